"""Groupoid presentations of chart stacks and root stacks, towers, toric export.

A quotient stack ``[Spec k[B] / G]`` with ``G`` diagonalizable is recorded
by the base monoid ``B`` and a grading ``gp(B) -> X(G)`` in the character
group.  The finite groups ``mu_n(P)`` are stored through their character
groups ``C_n(P)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import PredicateFailure, TorsionPresent
from .intlat import FgAbelianGroup, GroupHom, IntMatrix, kernel_basis, lattice_basis
from .monoids import AffineMonoid, MonoidHom, PresentedMonoid, kummer, predicates, present, to_affine
from .monoids.cones import normal_generators_from_inequalities


@dataclass(frozen=True)
class GroupoidPresentation:
    base: AffineMonoid
    group: FgAbelianGroup
    grading: GroupHom  # gp coordinates of the base -> group
    n: int = 1

    def grade(self, v) -> tuple:
        c = self.base.coordinates(v)
        if c is None:
            raise ValueError(f"{v} is not in the group of the base")
        return self.grading(c)

    def degrees(self) -> list[tuple]:
        return [self.grade(g) for g in self.base.gens]

    def grading_is_homomorphism(self) -> bool:
        """The grading is additive on the base generators."""
        gens = self.base.gens
        for i, a in enumerate(gens):
            for b in gens[i:]:
                s = tuple(x + y for x, y in zip(a, b))
                lhs = self.grade(s)
                rhs = self.group.reduce(tuple(x + y for x, y in zip(self.grade(a), self.grade(b))))
                if lhs != rhs:
                    return False
        return True

    def degree_zero_part(self) -> list[tuple]:
        """Hilbert basis of the invariant submonoid ``{b : grade(b) = 0}``."""
        b = self.base
        if not b.gens:
            return []
        m = self.grading.matrix
        t = self.group.ngens
        r = b.rank
        if t == 0:
            ker = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        else:
            cols = list(m.columns()) + [
                tuple(-d if j == i else 0 for j in range(t)) for i, d in enumerate(self.group.torsion)
            ]
            ker = [k[:r] for k in kernel_basis(IntMatrix.from_columns(cols, nrows=t))]
            ker = lattice_basis(ker, r) if ker else []
        if not ker:
            return []
        rows = [tuple(sum(nv[i] * k[i] for i in range(r)) for k in ker) for nv in b.facet_normals]
        gens = normal_generators_from_inequalities(rows, len(ker))
        return sorted(b.from_coords(tuple(sum(c * k[i] for c, k in zip(g, ker)) for i in range(r))) for g in gens)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "base": [list(g) for g in self.base.gens],
            "group": self.group.describe(),
            "degrees": [list(d) for d in self.degrees()],
        }


def _chart_monoid(p) -> AffineMonoid:
    if isinstance(p, PresentedMonoid):
        if p.gp_group.torsion:
            raise TorsionPresent(f"chart monoid has torsion {p.gp_group}")
        return to_affine(p)[0]
    return p


def chart_stack(p) -> GroupoidPresentation:
    """``[A(P) / G(P)]`` for a fine torsion-free chart monoid."""
    p = _chart_monoid(p)
    pr = predicates(p)
    if not pr.fine:
        raise PredicateFailure("chart monoid is not fine")
    if not pr.torsion_free:
        raise TorsionPresent("chart monoid is not torsion-free")
    g = FgAbelianGroup.free(p.rank)
    return GroupoidPresentation(p, g, GroupHom(g, g, IntMatrix.identity(p.rank)))


def _require_root_chart(p) -> AffineMonoid:
    p = _chart_monoid(p)
    pr = predicates(p)
    missing = [k for k in ("fine", "saturated", "sharp") if not getattr(pr, k)]
    if missing:
        raise PredicateFailure(f"root stacks need a fine saturated sharp chart; not {', '.join(missing)}")
    return p


def local_root_stack(p, n: int) -> GroupoidPresentation:
    """``[A((1/n)P) / mu_n(P)]``, with ``mu_n(P)`` given by ``C_n(P)``."""
    p = _require_root_chart(p)
    k = kummer(p, n)
    g = GroupoidPresentation(k.extension, k.group, k.grading, n)
    if not level_is_cartesian(g, k.inclusion):
        raise PredicateFailure(f"level {n} is not compatible with the chart")
    return g


def level_is_cartesian(g: GroupoidPresentation, inclusion: MonoidHom) -> bool:
    """Generators of the chart land in degree zero of the level."""
    return all(not any(g.grade(v)) for v in inclusion.images)


# -- towers ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Transition:
    """From level ``m`` down to level ``n``, ``n | m``.

    ``monoid`` is the inclusion ``(1/n)P -> (1/m)P``; ``group`` is the
    surjection ``C_m(P) -> C_n(P)`` standing for ``mu_m(P) -> mu_n(P)`` in
    dual coordinates; ``characters`` is the injection ``C_n(P) -> C_m(P)``
    that the gradings intertwine.
    """

    n: int
    m: int
    monoid: MonoidHom
    group: GroupHom
    characters: GroupHom


def _same_group_map(f: GroupHom, g: GroupHom) -> bool:
    if f.source != g.source or f.target != g.target:
        return False
    return all(f.target.equal(a, b) for a, b in zip(f.matrix.columns(), g.matrix.columns()))


def transition(levels: Mapping[int, GroupoidPresentation], n: int, m: int) -> Transition:
    if m % n:
        raise ValueError(f"{n} does not divide {m}")
    lo, hi = levels[n], levels[m]
    q = m // n
    mono = MonoidHom(lo.base, hi.base, tuple(tuple(q * x for x in g) for g in lo.base.gens))
    r = hi.base.rank
    to_n = lo.group.to_canonical if lo.group.to_canonical is not None else IntMatrix.identity(r)
    to_m = hi.group.to_canonical if hi.group.to_canonical is not None else IntMatrix.identity(r)
    from_m = hi.group.from_canonical if hi.group.from_canonical is not None else IntMatrix.identity(r)
    from_n = lo.group.from_canonical if lo.group.from_canonical is not None else IntMatrix.identity(r)
    red = to_n @ from_m
    chars = to_m @ IntMatrix([[q * x for x in row] for row in from_n.rows()], ncols=from_n.ncols)
    return Transition(
        n,
        m,
        mono,
        GroupHom(hi.group, lo.group, red),
        GroupHom(lo.group, hi.group, chars),
    )


@dataclass(frozen=True)
class RootStackTower:
    chart: AffineMonoid
    N: int
    levels: Mapping[int, GroupoidPresentation]
    transitions: Mapping[tuple, Transition] = field(default_factory=dict)  # (n, m)

    def divisors(self) -> list[int]:
        return sorted(self.levels)

    def failures(self) -> list[str]:
        """Every coherence check that does not hold, as messages."""
        out = []
        one = self.levels[1]
        if not one.group.is_trivial() or one.base != self.chart:
            out.append("level 1 is not the chart with trivial group")
        for (n, m), t in sorted(self.transitions.items()):
            if not t.group.is_well_defined() or not t.group.is_surjective():
                out.append(f"group map {m} -> {n} is not a well-defined surjection")
            if not t.characters.is_well_defined() or not t.characters.is_injective():
                out.append(f"character map {n} -> {m} is not a well-defined injection")
            lo, hi = self.levels[n], self.levels[m]
            for g, img in zip(lo.base.gens, t.monoid.images):
                if hi.grade(img) != t.characters(lo.grade(g)):
                    out.append(f"gradings of levels {n} and {m} disagree on {g}")
                    break
        for (k, n), outer in sorted(self.transitions.items()):
            for (n2, m), inner in sorted(self.transitions.items()):
                if n2 != n or n == k or n == m:
                    continue
                direct = self.transitions[(k, m)]
                if inner.monoid.compose(outer.monoid).images != direct.monoid.images:
                    out.append(f"monoid maps {k} -> {n} -> {m} do not compose")
                if not _same_group_map(outer.group.compose(inner.group), direct.group):
                    out.append(f"group maps {m} -> {n} -> {k} do not compose")
                if not _same_group_map(inner.characters.compose(outer.characters), direct.characters):
                    out.append(f"character maps {k} -> {n} -> {m} do not compose")
        return out

    def verify(self) -> bool:
        return not self.failures()

    def composition_count(self) -> int:
        return sum(
            1 for (k, n) in self.transitions for (n2, m) in self.transitions if n2 == n and k != n != m
        )


def tower(p, N: int) -> RootStackTower:
    """Levels ``n | N`` of the root tower with all transitions ``n | m``."""
    if N < 1:
        raise ValueError("tower index must be positive")
    p = _require_root_chart(p)
    divs = [d for d in range(1, N + 1) if N % d == 0]
    levels = {d: local_root_stack(p, d) for d in divs}
    trans = {(n, m): transition(levels, n, m) for n in divs for m in divs if m % n == 0 and m != n}
    return RootStackTower(p, N, levels, trans)


def fiber_rank(k, x: str) -> int:
    """Rank of the groupified characteristic monoid at ``x``.

    At a covered element the characteristic is taken as a sheaf, so sections
    that exist only locally still count.
    """
    from .logsite.df import kato_to_df
    from .logsite.kato import characteristic

    if k.site.covered(x):
        return kato_to_df(k).A.at(x).rank
    c, _ = characteristic(k.M.at(x))
    return c.rank if isinstance(c, AffineMonoid) else c.gp_group.rank


# -- toric export ------------------------------------------------------------------------


def _monomial(word, names) -> str:
    parts = []
    for e, name in zip(word, names):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class ToricExport:
    group: FgAbelianGroup
    variables: tuple  # (name, degree)
    relations: tuple  # (word, word)

    def homogeneous(self) -> bool:
        degs = [d for _, d in self.variables]

        def deg(word):
            tot = self.group.zero()
            for e, d in zip(word, degs):
                tot = tuple(a + e * b for a, b in zip(tot, d))
            return self.group.reduce(tot)

        return all(deg(u) == deg(v) for u, v in self.relations)

    def render(self) -> str:
        names = [n for n, _ in self.variables]
        lines = [f"group rank={self.group.rank} torsion=[{','.join(map(str, self.group.torsion))}]"]
        for name, d in self.variables:
            lines.append(f"var {name} deg=({','.join(map(str, d))})")
        for u, v in self.relations:
            lines.append(f"rel {_monomial(u, names)} = {_monomial(v, names)}")
        return "\n".join(lines) + "\n"


def export_toric(g: GroupoidPresentation, bound: int = 32, names: Optional[list] = None) -> ToricExport:
    """Binomial presentation of ``k[B]`` graded by the character group."""
    q = present(g.base, bound=bound)
    r = g.base.ngens
    names = list(names) if names else [f"x{i}" for i in range(r)]
    if len(names) != r:
        raise ValueError("need one name per generator")
    ex = ToricExport(g.group, tuple(zip(names, g.degrees())), tuple(q.relations))
    if not ex.homogeneous():
        raise PredicateFailure("exported relations are not homogeneous")
    return ex
