"""Monoid homomorphisms given by generator images."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..intlat import IntMatrix, in_lattice, kernel_basis
from .affine import AffineMonoid
from .verdict import Verdict


def _tupled(x):
    return tuple(int(v) for v in x)


@dataclass(frozen=True, eq=False)
class MonoidHom:
    """Homomorphism determined by ``images[i]``, the image of source generator i.

    Elements of an affine monoid are vectors, elements of a presented monoid
    are words; images use the target's element convention.
    """

    source: object
    target: object
    images: tuple

    def __post_init__(self):
        images = tuple(_tupled(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.ngens:
            raise ValueError(f"expected {self.source.ngens} generator images, got {len(images)}")
        width = element_width(self.target)
        for x in images:
            if len(x) != width:
                raise ValueError(f"image {x} has wrong length for the target")

    @classmethod
    def identity(cls, m) -> "MonoidHom":
        if isinstance(m, AffineMonoid):
            return cls(m, m, m.gens)
        return cls(m, m, tuple(tuple(int(i == j) for j in range(m.ngens)) for i in range(m.ngens)))

    @classmethod
    def zero(cls, source, target) -> "MonoidHom":
        return cls(source, target, (target.zero(),) * source.ngens)

    def on_word(self, word):
        return self.target.combine(word, self.images)

    @cached_property
    def _gp_matrix(self):
        """Target vectors of the gp basis of an affine source (affine target only)."""
        src = self.source
        rows = []
        for b in src.gp_basis:
            z = in_lattice(src.gens, b)
            rows.append(self.on_word(z))
        return rows

    def __call__(self, x):
        src = self.source
        if isinstance(src, AffineMonoid):
            if isinstance(self.target, AffineMonoid):
                c = src.coordinates(x)
                if c is None:
                    raise ValueError(f"{x} is not in the group of the source")
                return self.target.combine(c, self._gp_matrix)
            w = src.word_of(x)
            if w is None:
                raise ValueError(f"{x} is not in the source monoid")
            return self.on_word(w)
        return self.on_word(x)

    def check(self) -> Verdict:
        """Whether the images respect the relations of the source."""
        src, tgt = self.source, self.target
        if isinstance(src, AffineMonoid):
            if isinstance(tgt, AffineMonoid):
                if not src.gens:
                    return Verdict.EQUAL
                for k in kernel_basis(IntMatrix.from_columns(src.gens, nrows=src.dim)):
                    if any(tgt.combine(k, self.images)):
                        return Verdict.UNEQUAL
                return Verdict.EQUAL
            from .presented import present

            pairs = present(src).relations
        else:
            pairs = src.relations
        worst = Verdict.EQUAL
        for u, v in pairs:
            r = tgt.eq(self.on_word(u), self.on_word(v))
            if r is Verdict.UNEQUAL:
                return r
            if r is Verdict.UNDECIDED:
                worst = r
        return worst

    def compose(self, other: "MonoidHom") -> "MonoidHom":
        """``self ∘ other``."""
        return MonoidHom(other.source, self.target, tuple(self(x) for x in other.images))

    def kernel_generators(self) -> list[int]:
        """Indices of source generators sent to zero (decidedly)."""
        z = self.target.zero()
        return [i for i, x in enumerate(self.images) if self.target.eq(x, z) is Verdict.EQUAL]

    def __repr__(self) -> str:
        return f"MonoidHom({self.source!r} -> {self.target!r}, {list(self.images)})"


def element_width(m) -> int:
    return m.dim if isinstance(m, AffineMonoid) else m.ngens
