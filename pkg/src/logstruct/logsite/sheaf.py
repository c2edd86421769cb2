"""Monoid-valued sheaves on finite sites: restriction, equalizers, gluing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from ..errors import Unsupported, ValidationError
from ..intlat import IntMatrix, solve
from ..monoids import AffineMonoid, MonoidHom, Verdict, is_saturated
from ..monoids.cones import normal_generators_from_inequalities
from .site import FiniteSite


@dataclass(frozen=True, eq=False)
class MonoidSheaf:
    """Values ``F(x)`` and restrictions ``F(x) -> F(y)`` for ``y < x``."""

    site: FiniteSite
    values: Mapping[str, object]
    restrictions: Mapping[tuple, MonoidHom]
    name: str = ""
    equalizers: Mapping[str, "Equalizer"] = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, site: FiniteSite, values: Mapping, given: Mapping, name: str = "") -> "MonoidSheaf":
        """Fill in restrictions missing from ``given`` by composing known ones."""
        for x in site.elements:
            if x not in values:
                raise ValidationError(f"sheaf {name} has no value at {x}")
        homs = dict(given)
        for (x, y), h in homs.items():
            if not site.leq(y, x) or x == y:
                raise ValidationError(f"restriction {x} -> {y} does not follow the order")
            if h.source is not values[x] and h.source != values[x]:
                raise ValidationError(f"restriction {x} -> {y} has the wrong source")
        pending = sorted(
            (p for p in site.pairs() if p not in homs),
            key=lambda p: len(site.interval(p[1], p[0])),
        )
        for x, y in pending:
            for z in site.interval(y, x):
                if (x, z) in homs and (z, y) in homs:
                    homs[(x, y)] = homs[(z, y)].compose(homs[(x, z)])
                    break
            else:
                raise ValidationError(f"sheaf {name} has no restriction {x} -> {y}")
        return cls(site, dict(values), homs, name)

    def at(self, x: str):
        return self.values[x]

    def res(self, x: str, y: str) -> MonoidHom:
        if x == y:
            return MonoidHom.identity(self.values[x])
        return self.restrictions[(x, y)]

    def restrict(self, x: str, y: str, s):
        return self.res(x, y)(s)

    def all_affine(self) -> bool:
        return all(isinstance(v, AffineMonoid) for v in self.values.values())


def constant_sheaf(site: FiniteSite, m, name: str = "") -> MonoidSheaf:
    ident = MonoidHom.identity(m)
    return MonoidSheaf(site, {x: m for x in site.elements}, {p: ident for p in site.pairs()}, name)


# -- equalizers and gluing ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class Equalizer:
    """Compatible families over a cover, as a monoid in concatenated gp coordinates."""

    monoid: AffineMonoid
    members: tuple
    offsets: tuple
    projections: Mapping[str, MonoidHom]


def _require_saturated_affine(m, where: str) -> AffineMonoid:
    if not isinstance(m, AffineMonoid):
        raise Unsupported(f"equalizer at {where} needs affine values")
    if not is_saturated(m):
        raise Unsupported(f"equalizer at {where} needs saturated values")
    return m


def _gp_columns(h: MonoidHom) -> list[tuple]:
    """Target vectors of the gp basis of an affine source."""
    src = h.source
    return [h(b) for b in src.gp_basis]


def equalizer(f: MonoidSheaf, family) -> Equalizer:
    """Monoid of families ``(s_u)`` agreeing on all overlaps.

    Each ``F(u)`` must be affine and saturated, so that it is cut out of its
    group by its facet inequalities.
    """
    family = tuple(family)
    vals = [_require_saturated_affine(f.at(u), u) for u in family]
    offsets, k = [], 0
    for v in vals:
        offsets.append(k)
        k += v.rank
    rows = []
    for i, v in enumerate(vals):
        for n in v.facet_normals:
            row = [0] * k
            row[offsets[i]:offsets[i] + v.rank] = n
            rows.append(tuple(row))
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            for w in f.site.overlaps(family[i], family[j]):
                ci = _gp_columns(f.res(family[i], w))
                cj = _gp_columns(f.res(family[j], w))
                for t in range(f.at(w).dim if isinstance(f.at(w), AffineMonoid) else 0):
                    row = [0] * k
                    for a, col in enumerate(ci):
                        row[offsets[i] + a] += col[t]
                    for a, col in enumerate(cj):
                        row[offsets[j] + a] -= col[t]
                    if any(row):
                        rows.append(tuple(row))
                        rows.append(tuple(-x for x in row))
    gens = normal_generators_from_inequalities(rows, k) if k else []
    e = AffineMonoid(k, tuple(gens))
    proj = {}
    for i, u in enumerate(family):
        images = [vals[i].from_coords(g[offsets[i]:offsets[i] + vals[i].rank]) for g in gens]
        proj[u] = MonoidHom(e, vals[i], tuple(images))
    return Equalizer(e, family, tuple(offsets), proj)


def glue(f: MonoidSheaf, x: str, family, sections: Mapping[str, tuple]) -> Optional[tuple]:
    """The section of ``F(x)`` restricting to ``sections`` on ``family``, if any."""
    fx = f.at(x)
    if not isinstance(fx, AffineMonoid):
        raise Unsupported(f"gluing at {x} needs an affine value")
    target, cols = [], [[] for _ in fx.gp_basis]
    for u in family:
        fu = f.at(u)
        c = fu.coordinates(sections[u])
        if c is None:
            return None
        target.extend(c)
        for a, col in enumerate(_gp_columns(f.res(x, u))):
            cols[a].extend(fu.coordinates(col))
    if not fx.gp_basis:
        return fx.zero() if not any(target) else None
    res = solve(IntMatrix.from_columns(cols, nrows=len(target)), target)
    if res is None:
        return None
    v = fx.from_coords(res[0])
    return v if fx.contains(v) else None


def build_sheaf(
    site: FiniteSite,
    value_at: Callable[[str], object],
    restrict_between: Callable[[str, str], MonoidHom],
    name: str = "",
) -> MonoidSheaf:
    """Sheaf whose value at a covered element is the equalizer over its first cover.

    ``value_at`` and ``restrict_between`` are only consulted at elements
    without a declared cover.
    """
    values: dict = {}
    homs: dict = {}
    eqs: dict = {}
    partial = MonoidSheaf(site, values, homs, name, eqs)
    for x in site.bottom_up():
        below = sorted(site.strictly_below(x), key=site.bottom_up().index)
        if site.covered(x):
            fam = site.covers[x][0]
            eq = equalizer(partial, fam)
            values[x], eqs[x] = eq.monoid, eq
            for y in below:
                u = next(u for u in fam if site.leq(y, u))
                homs[(x, y)] = eq.projections[u] if u == y else partial.res(u, y).compose(eq.projections[u])
            continue
        values[x] = value_at(x)
        for y in below:
            if site.covered(y):
                fam = site.covers[y][0]
                images = []
                for g in values[x].gens:
                    s = glue(partial, y, fam, {u: partial.res(x, u)(g) for u in fam})
                    if s is None:
                        raise ValidationError(f"restriction of {g} from {x} to {y} does not glue")
                    images.append(s)
                homs[(x, y)] = MonoidHom(values[x], values[y], tuple(images))
            else:
                homs[(x, y)] = restrict_between(x, y)
    return partial


# -- sheaf checks --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    element: str
    message: str
    cover: Optional[tuple] = None


@dataclass(frozen=True)
class CheckReport:
    status: str  # "ok" | "violation" | "undecided"
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def __bool__(self) -> bool:
        return self.ok


def report(violations, undecided=()) -> CheckReport:
    if violations:
        return CheckReport("violation", tuple(violations) + tuple(undecided))
    if undecided:
        return CheckReport("undecided", tuple(undecided))
    return CheckReport("ok")


def check_sheaf(f: MonoidSheaf) -> CheckReport:
    """Well-definedness, functoriality and the equalizer condition on declared covers."""
    site = f.site
    bad, unknown = [], []
    for (x, y), h in sorted(f.restrictions.items(), key=lambda kv: (site.elements.index(kv[0][0]), site.elements.index(kv[0][1]))):
        r = h.check()
        if r is Verdict.UNEQUAL:
            bad.append(Violation(x, f"restriction {x} -> {y} does not respect relations"))
        elif r is Verdict.UNDECIDED:
            unknown.append(Violation(x, f"restriction {x} -> {y} undecided within bound"))
    for x, y in site.pairs():
        for z in site.interval(y, x):
            direct, via = f.res(x, y), f.res(z, y).compose(f.res(x, z))
            for g, a, b in zip(f.at(x).gens if isinstance(f.at(x), AffineMonoid) else range(f.at(x).ngens), direct.images, via.images):
                r = f.at(y).eq(a, b)
                if r is Verdict.UNEQUAL:
                    bad.append(Violation(x, f"restrictions {x} -> {z} -> {y} and {x} -> {y} differ on {g}"))
                elif r is Verdict.UNDECIDED:
                    unknown.append(Violation(x, f"functoriality {x} -> {z} -> {y} undecided"))
    for x in site.elements:
        for fam in site.covers.get(x, ()):
            try:
                bad.extend(_equalizer_violations(f, x, fam))
            except Unsupported as exc:
                unknown.append(Violation(x, str(exc), fam))
    return report(bad, unknown)


def _equalizer_violations(f: MonoidSheaf, x: str, fam) -> list[Violation]:
    fx = f.at(x)
    if not isinstance(fx, AffineMonoid):
        raise Unsupported(f"equalizer check at {x} needs an affine value")
    out = []
    cols = [[] for _ in fx.gp_basis]
    for u in fam:
        fu = f.at(u)
        if not isinstance(fu, AffineMonoid):
            raise Unsupported(f"equalizer check at {x} needs affine values on the cover")
        for a, col in enumerate(_gp_columns(f.res(x, u))):
            cols[a].extend(fu.coordinates(col))
    height = sum(f.at(u).rank for u in fam)
    if fx.gp_basis:
        from ..intlat import kernel_basis

        ker = kernel_basis(IntMatrix.from_columns(cols, nrows=height))
        if ker:
            s = fx.from_coords(ker[0])
            out.append(Violation(x, f"section {s} is not determined by its restrictions", fam))
            return out
    eq = equalizer(f, fam)
    for g in eq.monoid.gens:
        secs = {u: eq.projections[u](g) for u in fam}
        if glue(f, x, fam, secs) is None:
            out.append(Violation(x, f"compatible family {secs} does not glue", fam))
    return out
