"""Affine monoids: finitely generated submonoids of ``Z^d``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Optional, Sequence

from ..errors import ValidationError
from ..intlat import (
    IntMatrix,
    dot,
    fg_group,
    in_lattice,
    kernel_basis,
    lattice_basis,
    primitive,
    vadd,
    vsub,
)
from . import cones
from .verdict import Verdict

Vec = tuple


@dataclass(frozen=True)
class Membership:
    """Outcome of a membership query.

    A positive answer carries nonnegative generator coefficients.  A negative
    one carries a certificate: ``"separating"`` (``functional`` is
    nonnegative on every generator and negative on the vector),
    ``"lattice"`` (the vector is not in the group generated by the monoid) or
    ``"exhausted"`` (the finite search over generator multiplicities failed).
    """

    member: bool
    coefficients: Optional[Vec] = None
    certificate: Optional[str] = None
    functional: Optional[Vec] = None

    def __bool__(self) -> bool:
        return self.member


@dataclass(frozen=True, eq=False)
class AffineMonoid:
    """Submonoid of ``Z^dim`` generated by ``gens``.

    Elements are vectors of ``Z^dim``; such a monoid is cancellative by
    construction.
    """

    dim: int
    gens: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.gens)
        object.__setattr__(self, "gens", gens)
        for g in gens:
            if len(g) != self.dim:
                raise ValidationError(f"generator {g} does not live in Z^{self.dim}")
        if len(set(gens)) != len(gens):
            dup = next(g for i, g in enumerate(gens) if g in gens[:i])
            raise ValidationError(f"duplicate generator {g_fmt(dup)}")

    # -- identity --------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, AffineMonoid) and (self.dim, self.gens) == (other.dim, other.gens)

    def __hash__(self) -> int:
        return hash((self.dim, self.gens))

    def __repr__(self) -> str:
        inner = ", ".join(g_fmt(g) for g in self.gens)
        return f"AffineMonoid(dim={self.dim}, <{inner}>)"

    @classmethod
    def free(cls, r: int, name: str = "") -> "AffineMonoid":
        return cls(r, tuple(tuple(int(i == j) for j in range(r)) for i in range(r)), name)

    @classmethod
    def from_vectors(cls, vectors, dim: Optional[int] = None, name: str = "") -> "AffineMonoid":
        """Build from a possibly redundant list; drops zeros and repeats."""
        vectors = [tuple(v) for v in vectors]
        if dim is None:
            dim = len(vectors[0])
        out = []
        for v in vectors:
            if any(v) and v not in out:
                out.append(v)
        return cls(dim, tuple(out), name)

    @property
    def ngens(self) -> int:
        return len(self.gens)

    # -- element arithmetic ----------------------------------------------

    def zero(self) -> Vec:
        return (0,) * self.dim

    def add(self, a, b) -> Vec:
        return vadd(a, b)

    def element(self, word: Sequence[int]) -> Vec:
        out = [0] * self.dim
        for c, g in zip(word, self.gens):
            if c:
                for i, x in enumerate(g):
                    out[i] += c * x
        return tuple(out)

    def combine(self, word: Sequence[int], elements: Sequence[Vec]) -> Vec:
        out = [0] * self.dim
        for c, e in zip(word, elements):
            if c:
                for i, x in enumerate(e):
                    out[i] += c * x
        return tuple(out)

    def eq(self, a, b) -> Verdict:
        return Verdict.EQUAL if tuple(a) == tuple(b) else Verdict.UNEQUAL

    def same(self, a, b) -> bool:
        return tuple(a) == tuple(b)

    def word_of(self, v) -> Optional[Vec]:
        m = membership(self, v)
        return m.coefficients if m.member else None

    def contains(self, v) -> bool:
        return membership(self, v).member

    def is_unit(self, v) -> bool:
        v = tuple(v)
        return self.contains(v) and self.contains(tuple(-x for x in v))

    # -- cached geometry --------------------------------------------------

    @cached_property
    def gp_basis(self) -> list[Vec]:
        return lattice_basis(self.gens, self.dim) if self.gens else []

    @cached_property
    def rank(self) -> int:
        return len(self.gp_basis)

    @cached_property
    def gp_coords(self) -> list[Vec]:
        return [self.coordinates(g) for g in self.gens]

    def coordinates(self, v) -> Optional[Vec]:
        """Coordinates of ``v`` in ``gp_basis``, or None if ``v`` is outside gp."""
        c = in_lattice(self.gp_basis, v)
        return None if c is None else tuple(c)

    def from_coords(self, c) -> Vec:
        return cones.from_coordinates(self.gp_basis, c, self.dim)

    @cached_property
    def facet_normals(self) -> list[Vec]:
        """Inner facet normals of the cone, in gp coordinates."""
        return cones.facets(self.gp_coords, self.rank)

    @cached_property
    def unit_mask(self) -> tuple[bool, ...]:
        return tuple(all(dot(n, c) == 0 for n in self.facet_normals) for c in self.gp_coords)

    @cached_property
    def degree(self) -> Vec:
        return cones.grading(self.facet_normals, self.rank)

    @cached_property
    def ambient_functionals(self) -> list[Vec]:
        """Integer functionals on ``Z^dim`` restricting to the facet normals."""
        b = self.gp_basis
        if not b:
            return []
        k = len(b)
        gram = IntMatrix([[dot(b[i], b[j]) for j in range(k)] for i in range(k)])
        ginv = cones.rational_inverse(gram)
        out = []
        for n in self.facet_normals:
            row = [sum(Fraction(n[i]) * ginv[i][j] for i in range(k)) for j in range(k)]
            f = [sum(row[j] * b[j][t] for j in range(k)) for t in range(self.dim)]
            den = lcm(*[x.denominator for x in f]) if f else 1
            out.append(primitive([int(x * den) for x in f]))
        return out

    @cached_property
    def complement_functionals(self) -> list[Vec]:
        if not self.gens:
            return [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]
        return kernel_basis(IntMatrix(self.gens, ncols=self.dim))

    @cached_property
    def unit_gen_indices(self) -> list[int]:
        return [i for i, u in enumerate(self.unit_mask) if u and any(self.gens[i])]

    @cached_property
    def unit_relation_vector(self) -> Optional[Vec]:
        """Positive integer weights on the unit generators summing them to zero."""
        idx = self.unit_gen_indices
        if not idx:
            return None
        return positive_kernel_vector([self.gp_coords[i] for i in idx], self.rank)


def g_fmt(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def positive_kernel_vector(vectors: Sequence[Vec], dim: int) -> Vec:
    """Integer ``w >= 1`` with ``sum(w_i v_i) = 0``; the vectors must span a linear cone.

    Found by linear programming, then rationalised and re-checked exactly.
    """
    import numpy as np
    from scipy.optimize import linprog

    n = len(vectors)
    a_eq = np.array([[v[i] for v in vectors] for i in range(dim)], dtype=float).reshape(dim, n)
    res = linprog(np.ones(n), A_eq=a_eq, b_eq=np.zeros(dim), bounds=[(1, None)] * n, method="highs")
    if res.status != 0:
        raise ValueError("generators do not span a linear subspace")
    for limit in (10**3, 10**6, 10**9):
        fr = [Fraction(float(x)).limit_denominator(limit) for x in res.x]
        den = lcm(*[f.denominator for f in fr])
        w = tuple(int(f * den) for f in fr)
        if all(x >= 1 for x in w) and all(sum(w[j] * vectors[j][i] for j in range(n)) == 0 for i in range(dim)):
            return w
    raise ArithmeticError("could not rationalise a positive kernel vector")  # pragma: no cover


def membership(p: AffineMonoid, v) -> Membership:
    """Decide ``v ∈ P`` with a certificate either way.

    Search: depth-first over multiplicities of the non-unit generators,
    pruned by the facet functionals of the cone; the residue must then lie in
    the unit group, which is reached with nonnegative coefficients by adding
    a positive relation among the unit generators.
    """
    v = tuple(int(x) for x in v)
    if len(v) != p.dim:
        raise ValueError("vector has wrong length")
    if not any(v):
        return Membership(True, (0,) * p.ngens)
    for k in p.complement_functionals:
        s = dot(k, v)
        if s:
            f = k if s < 0 else tuple(-x for x in k)
            return Membership(False, certificate="separating", functional=f)
    for f in p.ambient_functionals:
        if dot(f, v) < 0:
            return Membership(False, certificate="separating", functional=f)
    c = p.coordinates(v)
    if c is None:
        return Membership(False, certificate="lattice")

    normals = p.facet_normals
    deg = p.degree
    nonunit = [i for i in range(p.ngens) if not p.unit_mask[i]]
    units = p.unit_gen_indices
    ncoords = p.gp_coords
    unit_basis = lattice_basis([ncoords[i] for i in units], p.rank) if units else []
    gdeg = [dot(deg, ncoords[i]) for i in nonunit]
    failed = set()

    def search(j: int, r: Vec, acc: list):
        if j == len(nonunit):
            if dot(deg, r) != 0:
                return None
            if not any(r):
                return acc
            return acc if in_lattice(unit_basis, r) is not None else None
        key = (j, r)
        if key in failed:
            return None
        gi = ncoords[nonunit[j]]
        top = dot(deg, r) // gdeg[j]
        for x in range(top, -1, -1):
            rr = tuple(a - x * b for a, b in zip(r, gi))
            if all(dot(n, rr) >= 0 for n in normals):
                acc.append(x)
                out = search(j + 1, rr, acc)
                if out is not None:
                    return out
                acc.pop()
        failed.add(key)
        return None

    found = search(0, c, [])
    if found is None:
        return Membership(False, certificate="exhausted")
    coeffs = [0] * p.ngens
    r = c
    for i, x in zip(nonunit, found):
        coeffs[i] = x
        r = tuple(a - x * b for a, b in zip(r, ncoords[i]))
    if any(r):
        z = in_lattice([ncoords[i] for i in units], r)
        w = p.unit_relation_vector
        t = max([0] + [(-zi + wi - 1) // wi for zi, wi in zip(z, w) if zi < 0])
        for i, zi, wi in zip(units, z, w):
            coeffs[i] = zi + t * wi
    coeffs = tuple(coeffs)
    assert p.element(coeffs) == v
    return Membership(True, coeffs)


def units(p: AffineMonoid) -> list[Vec]:
    """Lattice basis of the unit group ``{u : -u in P}``."""
    return lattice_basis([p.gens[i] for i in p.unit_gen_indices], p.dim)


def is_sharp(p: AffineMonoid) -> bool:
    return not p.unit_gen_indices


def _orient(images: list[Vec], rank: int) -> list[Vec]:
    flip = [sum(v[j] for v in images) < 0 for j in range(rank)]
    return [tuple(-x if f else x for x, f in zip(v, flip)) for v in images]


def sharpen(p: AffineMonoid):
    """Quotient by the unit group, with the quotient map.

    The result is affine when ``gp(P)/units`` is torsion-free; otherwise it
    is returned as a presented monoid (generators of P with the unit
    generators set to zero).
    """
    from .homs import MonoidHom

    if is_sharp(p):
        return p, MonoidHom.identity(p)
    ub = [p.gp_coords[i] for i in p.unit_gen_indices]
    q = fg_group(ub, p.rank)
    if q.torsion:
        from .presented import present, sharpen_presented

        pres = present(p)
        sharp, quot = sharpen_presented(pres)
        return sharp, MonoidHom(p, sharp, tuple(quot.images))
    images = _orient([q.to_canonical @ c for c in p.gp_coords], q.rank)
    sharp = AffineMonoid.from_vectors(images, dim=q.rank, name=p.name and f"{p.name}/units")
    return sharp, MonoidHom(p, sharp, tuple(images))


def saturate(p: AffineMonoid, lattice: str = "gp") -> AffineMonoid:
    """Saturation of ``P``.

    ``lattice="gp"`` (the default) gives ``cone(P) ∩ gp(P)``, the smallest
    saturated monoid between P and gp(P).  ``lattice="ambient"`` gives the
    normalisation ``cone(P) ∩ Z^dim``.
    """
    if not p.gens:
        return p
    basis = p.gp_basis if lattice == "gp" else None
    gens = cones.normal_generators(p.gens, p.dim, lattice=basis)
    return AffineMonoid(p.dim, tuple(gens), name=p.name)


def is_saturated(p: AffineMonoid) -> bool:
    return all(p.contains(g) for g in saturate(p).gens)


def hilbert_basis(gens: Sequence[Sequence[int]], dim: Optional[int] = None) -> list[Vec]:
    """Minimal generating set of ``cone(gens) ∩ Z^dim``.

    Raises NotPointed if the cone contains a line.
    """
    gens = [tuple(g) for g in gens]
    if dim is None:
        dim = len(gens[0])
    return cones.hilbert_basis(gens, dim)


def irreducibles(p: AffineMonoid) -> list[Vec]:
    """Minimal generators of a sharp affine monoid (its irreducible elements)."""
    gens = [g for g in p.gens if any(g)]
    return sorted(g for g in gens if not any(h != g and p.contains(vsub(g, h)) for h in gens))
