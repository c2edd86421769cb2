"""Kummer extensions ``(1/n)P`` and the groups ``C_n(P)``."""

from __future__ import annotations

from dataclasses import dataclass

from ..intlat import FgAbelianGroup, GroupHom, IntMatrix, cokernel
from .affine import AffineMonoid
from .homs import MonoidHom


@dataclass(frozen=True)
class KummerData:
    """``P ⊆ (1/n)P`` with the grading ``gp((1/n)P) -> C_n(P)``.

    ``(1/n)P`` reuses the vectors of P: a vector ``v`` of the extension
    stands for ``v/n``, so the inclusion multiplies by ``n``.
    """

    base: AffineMonoid
    n: int
    extension: AffineMonoid
    inclusion: MonoidHom
    group: FgAbelianGroup
    grading: GroupHom  # from gp coordinates of the extension

    def grade(self, v) -> tuple:
        c = self.extension.coordinates(v)
        if c is None:
            raise ValueError(f"{v} is not in the group of the extension")
        return self.grading(c)

    def generator_degrees(self) -> list[tuple]:
        return [self.grade(g) for g in self.extension.gens]


def kummer(p: AffineMonoid, n: int) -> KummerData:
    if n < 1:
        raise ValueError("root index must be positive")
    ext = AffineMonoid(p.dim, p.gens, name=p.name and f"(1/{n}){p.name}")
    incl = MonoidHom(p, ext, tuple(tuple(n * x for x in g) for g in p.gens))
    k = p.rank
    free = FgAbelianGroup.free(k)
    times_n = GroupHom(free, free, IntMatrix([[n * int(i == j) for j in range(k)] for i in range(k)], ncols=k))
    c_n, proj = cokernel(times_n)
    return KummerData(p, n, ext, incl, c_n, proj)


def c_n(p: AffineMonoid, n: int) -> FgAbelianGroup:
    return kummer(p, n).group
