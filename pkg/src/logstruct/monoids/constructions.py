"""Groupification, predicates, pushouts and cokernels of homomorphisms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from ..errors import Unsupported
from ..intlat import FgAbelianGroup, IntMatrix, solve
from .affine import AffineMonoid, is_saturated, is_sharp
from .homs import MonoidHom
from .presented import DEFAULT_BOUND, PresentedMonoid, is_integral, present


class Groupification(NamedTuple):
    group: FgAbelianGroup
    images: tuple  # canonical coordinates of each generator

    def __call__(self, word) -> tuple:
        out = [0] * self.group.ngens
        for c, img in zip(word, self.images):
            for i, x in enumerate(img):
                out[i] += c * x
        return self.group.reduce(out)


def gp(m) -> Groupification:
    """``m^gp`` in canonical form with the images of the generators."""
    if isinstance(m, AffineMonoid):
        return Groupification(FgAbelianGroup.free(m.rank), tuple(m.gp_coords))
    g = m.gp_group
    return Groupification(g, tuple(m.gp_image(_unit(i, m.ngens)) for i in range(m.ngens)))


def _unit(i: int, r: int) -> tuple:
    return tuple(int(i == j) for j in range(r))


@dataclass(frozen=True)
class Predicates:
    """Monoid predicates; None means undecided within the word-problem bound."""

    fine: Optional[bool]
    sharp: Optional[bool]
    integral: Optional[bool]
    torsion_free: Optional[bool]
    saturated: Optional[bool]

    def as_dict(self) -> dict:
        return {
            "fine": self.fine,
            "sharp": self.sharp,
            "integral": self.integral,
            "torsion_free": self.torsion_free,
            "saturated": self.saturated,
        }


def predicates(m) -> Predicates:
    if isinstance(m, AffineMonoid):
        return Predicates(True, is_sharp(m), True, True, is_saturated(m))
    integral = is_integral(m)
    torsion_free = not m.gp_group.torsion
    sharp = not m.unit_generators
    if integral is None:
        saturated = None
    elif not integral:
        saturated = False
    else:
        saturated = _presented_saturated(m)
    return Predicates(integral, sharp, integral, torsion_free, saturated)


def _presented_saturated(m: PresentedMonoid) -> bool:
    """Saturation of an integral presented monoid.

    With ``T`` the torsion of ``gp``: saturated iff ``T`` consists of units
    and the image of ``m`` in ``gp/T`` is saturated.
    """
    g = m.gp_group
    nt = len(g.torsion)
    if nt:
        cols = [m.gp_image(_unit(i, m.ngens)) for i in m.unit_generators]
        cols += [tuple(d if j == i else 0 for j in range(g.ngens)) for i, d in enumerate(g.torsion)]
        mat = IntMatrix.from_columns(cols, nrows=g.ngens)
        for i in range(nt):
            if solve(mat, _unit(i, g.ngens)) is None:
                return False
    free = [m.gp_image(_unit(i, m.ngens))[nt:] for i in range(m.ngens)]
    return is_saturated(AffineMonoid.from_vectors(free, dim=g.rank)) if any(any(v) for v in free) else True


def as_presented(m, bound: Optional[int] = None) -> PresentedMonoid:
    if isinstance(m, PresentedMonoid):
        return m if bound is None else m.with_bound(bound)
    q = present(m)
    return q if bound is None else q.with_bound(bound)


class Pushout(NamedTuple):
    monoid: PresentedMonoid
    left: MonoidHom
    right: MonoidHom


def _word_in(m, x) -> tuple:
    w = m.word_of(x)
    if w is None:
        raise ValueError(f"{x} is not an element of {m!r}")
    return tuple(w)


def pushout(f: MonoidHom, g: MonoidHom, bound: Optional[int] = None) -> Pushout:
    """``M ⊕_G N`` for ``f: G -> M`` and ``g: G -> N``.

    Generators are those of M followed by those of N; relations are those of
    both plus ``f(γ) = g(γ)`` for each generator γ of G.
    """
    if f.source != g.source:
        raise ValueError("homomorphisms must share their source")
    m, n = f.target, g.target
    pm, pn = as_presented(m), as_presented(n)
    r, s = pm.ngens, pn.ngens
    rels = [(u + (0,) * s, v + (0,) * s) for u, v in pm.relations]
    rels += [((0,) * r + u, (0,) * r + v) for u, v in pn.relations]
    for a, b in zip(f.images, g.images):
        rel = (_word_in(m, a) + (0,) * s, (0,) * r + _word_in(n, b))
        if rel[0] != rel[1] and rel not in rels:
            rels.append(rel)
    labels = None
    if pm.labels or pn.labels:
        labels = tuple(pm.label(i) for i in range(r)) + tuple(pn.label(i) for i in range(s))
    bound = bound or max(pm.bound, pn.bound)
    q = PresentedMonoid(r + s, tuple(rels), bound, labels=labels)
    left = MonoidHom(m, q, tuple(_unit(i, r + s) for i in range(r)))
    right = MonoidHom(n, q, tuple(_unit(r + i, r + s) for i in range(s)))
    return Pushout(q, left, right)


class Cokernel(NamedTuple):
    monoid: PresentedMonoid
    quotient: MonoidHom  # P -> P / ker f
    induced: MonoidHom  # P / ker f -> target


def hom_cokernel(f: MonoidHom, bound: Optional[int] = None) -> Cokernel:
    """Quotient of the source by the congruence generated by ``f^{-1}(0)``.

    ``p ~ p'`` iff ``p + h = p' + k`` with ``h, k`` in the kernel.  The
    kernel is the submonoid generated by the generators sent to zero; this
    is exact when no other generator is sent to a unit, and that case is the
    only one supported.
    """
    p, a = f.source, f.target
    kern = f.kernel_generators()
    for i, x in enumerate(f.images):
        if i not in kern and a.is_unit(x):
            raise Unsupported(f"generator {i} maps to a nonzero unit; kernel is not generated by generators")
    pp = as_presented(p)
    r = pp.ngens
    rels = list(pp.relations)
    for j in kern:
        rel = (_unit(j, r), (0,) * r)
        if rel not in rels:
            rels.append(rel)
    q = PresentedMonoid(r, tuple(rels), bound or pp.bound or DEFAULT_BOUND, labels=pp.labels)
    quotient = MonoidHom(p, q, tuple(_unit(i, r) for i in range(r)))
    induced = MonoidHom(q, a, f.images)
    return Cokernel(q, quotient, induced)


def trivial_monoid() -> AffineMonoid:
    return AffineMonoid(0, ())


def direct_sum(m: AffineMonoid, n: AffineMonoid) -> AffineMonoid:
    gens = [g + (0,) * n.dim for g in m.gens] + [(0,) * m.dim + h for h in n.gens]
    return AffineMonoid(m.dim + n.dim, tuple(gens))


def group_monoid(rank: int) -> AffineMonoid:
    """``Z^rank`` as the monoid generated by ``±e_i``."""
    gens = []
    for i in range(rank):
        e = _unit(i, rank)
        gens += [e, tuple(-x for x in e)]
    return AffineMonoid(rank, tuple(gens))


__all__ = [
    "Cokernel",
    "Groupification",
    "Predicates",
    "Pushout",
    "as_presented",
    "direct_sum",
    "gp",
    "group_monoid",
    "hom_cokernel",
    "predicates",
    "pushout",
    "trivial_monoid",
]
