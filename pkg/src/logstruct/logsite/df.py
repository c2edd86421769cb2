"""Deligne–Faltings structures and the equivalence with quasi-integral Kato structures.

A DF structure is a sheaf ``A`` of sharp affine monoids together with, at
every element without a declared cover, a representative in ``O(x)`` of the
class ``L(a)`` for each generator ``a`` of ``A(x)``.  At covered elements the
class is glued from the cover; the gluing units on overlaps form the
transition cocycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Mapping, Optional

from ..errors import Unsupported, ValidationError
from ..intlat import IntMatrix, in_lattice, kernel_basis, solve
from ..monoids import AffineMonoid, MonoidHom, irreducibles, is_sharp, units
from .kato import IsoResult, KatoStructure, affine_iso, characteristic, require_quasi_integral
from .sheaf import CheckReport, MonoidSheaf, Violation, build_sheaf, check_sheaf, glue, report
from .site import FiniteSite


@dataclass(frozen=True, eq=False)
class DFStructure:
    O: MonoidSheaf
    A: MonoidSheaf
    classes: Mapping[tuple, Optional[tuple]]  # (x, generator index) -> representative or None
    name: str = field(default="", compare=False)

    @property
    def site(self) -> FiniteSite:
        return self.O.site


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _aff(m, where) -> AffineMonoid:
    if not isinstance(m, AffineMonoid):
        raise Unsupported(f"an affine value is needed at {where}")
    return m


def same_class(o: AffineMonoid, a, b) -> bool:
    """``a`` and ``b`` differ by a unit of ``o``."""
    return in_lattice(units(o), _vsub(a, b)) is not None


def class_rep(d: DFStructure, x: str, a) -> tuple:
    """Representative of ``L(a)`` for an element ``a`` of ``A(x)`` (uncovered x)."""
    if d.site.covered(x):
        raise ValueError(f"{x} is covered; its classes are glued")
    ax = d.A.at(x)
    w = ax.word_of(a)
    if w is None:
        raise ValueError(f"{a} is not a section of A at {x}")
    reps = [d.classes[(x, j)] for j in range(ax.ngens)]
    return d.O.at(x).combine(w, reps)


def local_reps(d: DFStructure, x: str, a) -> dict:
    fam = d.site.covers[x][0]
    return {u: class_rep(d, u, d.A.res(x, u)(a)) for u in fam}


def transitions(d: DFStructure, x: str, a) -> dict:
    """``(u, v, w) -> rep_u|w - rep_v|w`` over the first cover of ``x``."""
    fam = d.site.covers[x][0]
    reps = local_reps(d, x, a)
    out = {}
    for i, u in enumerate(fam):
        for v in fam[i + 1:]:
            for w in d.site.overlaps(u, v):
                out[(u, v, w)] = _vsub(d.O.res(u, w)(reps[u]), d.O.res(v, w)(reps[v]))
    return out


def coboundary(d: DFStructure, x: str, cocycle: Mapping[tuple, tuple]) -> Optional[dict]:
    """Units ``psi_u`` on the cover with ``cocycle[u,v,w] = psi_v|w - psi_u|w``, or None.

    Solved over the integers in unit-lattice coordinates.
    """
    o, site = d.O, d.site
    fam = site.covers[x][0]
    ub = {u: units(_aff(o.at(u), u)) for u in fam}
    offs, n = {}, 0
    for u in fam:
        offs[u] = n
        n += len(ub[u])
    rows, rhs = [], []
    for (u, v, w), c in sorted(cocycle.items()):
        ubw = units(_aff(o.at(w), w))
        cw = in_lattice(ubw, c)
        if cw is None:
            return None
        for t in range(len(ubw)):
            row = [0] * n
            for s, b in enumerate(ub[v]):
                row[offs[v] + s] += in_lattice(ubw, o.res(v, w)(b))[t]
            for s, b in enumerate(ub[u]):
                row[offs[u] + s] -= in_lattice(ubw, o.res(u, w)(b))[t]
            rows.append(row)
            rhs.append(cw[t])
    if not rows:
        z = (0,) * n
    else:
        sol = solve(IntMatrix(rows, ncols=n), rhs) if n else (None if any(rhs) else ((), []))
        if sol is None:
            return None
        z = sol[0]
    return {u: tuple(sum(c * b[i] for c, b in zip(z[offs[u]:offs[u] + len(ub[u])], ub[u])) for i in range(o.at(u).dim)) for u in fam}


def global_rep(d: DFStructure, x: str, a) -> Optional[tuple]:
    """A section of ``O(x)`` in the class ``L(a)``; None when the torsor is nontrivial."""
    if not d.site.covered(x):
        return class_rep(d, x, a)
    psi = coboundary(d, x, transitions(d, x, a))
    if psi is None:
        return None
    reps = local_reps(d, x, a)
    fam = d.site.covers[x][0]
    return glue(d.O, x, fam, {u: tuple(r + p for r, p in zip(reps[u], psi[u])) for u in fam})


# -- validation -----------------------------------------------------------------------


def check_df(d: DFStructure) -> CheckReport:
    site = d.site
    bad, unknown = [], []
    sheaf_report = check_sheaf(d.A)
    bad.extend(v for v in sheaf_report.violations if sheaf_report.status == "violation")
    for x in site.elements:
        ax = d.A.at(x)
        if not isinstance(ax, AffineMonoid) or not is_sharp(ax):
            bad.append(Violation(x, "A is not sharp affine"))
            continue
        if site.covered(x):
            nested = [u for u in site.covers[x][0] if site.covered(u)]
            for u in nested:
                bad.append(Violation(x, f"cover member {u} is itself covered"))
            if nested:
                continue
            for j, a in enumerate(ax.gens):
                for (u, v, w), t in transitions(d, x, a).items():
                    if in_lattice(units(_aff(d.O.at(w), w)), t) is None:
                        bad.append(Violation(x, f"local classes of generator {j} disagree on {w}"))
            continue
        ox = _aff(d.O.at(x), x)
        missing = [j for j in range(ax.ngens) if d.classes.get((x, j)) is None]
        for j in missing:
            bad.append(Violation(x, f"generator {j} has no class"))
        if missing:
            continue
        reps = [d.classes[(x, j)] for j in range(ax.ngens)]
        for j, r in enumerate(reps):
            if not ox.contains(r):
                bad.append(Violation(x, f"representative {r} is not a section of O"))
            elif ox.is_unit(r):
                bad.append(Violation(x, f"generator {j} has the unit class (kernel not trivial)"))
        if ax.gens:
            for kv in kernel_basis(IntMatrix.from_columns(ax.gens, nrows=ax.dim)):
                s = tuple(sum(c * r[i] for c, r in zip(kv, reps)) for i in range(ox.dim))
                if in_lattice(units(ox), s) is None:
                    bad.append(Violation(x, f"classes are not additive along relation {kv}"))
        for y in site.strictly_below(x):
            if site.covered(y):
                continue
            for j, a in enumerate(ax.gens):
                lhs = d.O.res(x, y)(reps[j])
                rhs = class_rep(d, y, d.A.res(x, y)(a))
                if not same_class(_aff(d.O.at(y), y), lhs, rhs):
                    bad.append(Violation(x, f"class of generator {j} does not restrict to {y}"))
    return report(bad, unknown)


def check_transitions(d: DFStructure, given: Mapping[tuple, tuple]) -> list[Violation]:
    """Compare user-supplied transitions ``(x, j, u, v, w) -> unit`` with the derived ones."""
    out = []
    for (x, j, u, v, w), t in sorted(given.items()):
        derived = transitions(d, x, d.A.at(x).gens[j]).get((u, v, w))
        if derived is None:
            out.append(Violation(x, f"no overlap {w} of {u} and {v}"))
        elif tuple(derived) != tuple(t):
            out.append(Violation(x, f"transition of generator {j} on {w} is {derived}, not {tuple(t)}"))
    return out


# -- conversions --------------------------------------------------------------------------


def kato_to_df(k: KatoStructure) -> DFStructure:
    """``A = M / O^x`` (sheafified over declared covers) with classes from ``alpha``."""
    require_quasi_integral(k)
    site = k.site
    chars = {}
    for x in site.elements:
        if site.covered(x):
            continue
        a, q = characteristic(k.M.at(x))
        if not isinstance(a, AffineMonoid):
            raise Unsupported(f"characteristic monoid at {x} has torsion")
        lifts = [q.images.index(g) for g in a.gens]
        chars[x] = (a, q, lifts)

    def value_at(x):
        return chars[x][0]

    def restrict_between(x, y):
        a, _, lifts = chars[x]
        qy = chars[y][1]
        rm = k.M.res(x, y)
        return MonoidHom(a, chars[y][0], tuple(qy(rm.images[i]) for i in lifts))

    asheaf = build_sheaf(site, value_at, restrict_between, "A")
    classes = {}
    for x in site.elements:
        if site.covered(x):
            for j in range(asheaf.at(x).ngens):
                classes[(x, j)] = None
            continue
        _, _, lifts = chars[x]
        for j, i in enumerate(lifts):
            classes[(x, j)] = k.alpha[x].images[i]
    return DFStructure(k.O, asheaf, classes, k.name)


def df_to_kato(d: DFStructure) -> KatoStructure:
    """``M = A ×_Div O``: pairs ``(a, o)`` with ``o`` in the class ``L(a)``."""
    site = d.site
    local = {}
    for x in site.elements:
        if site.covered(x):
            continue
        ax, ox = _aff(d.A.at(x), x), _aff(d.O.at(x), x)
        ub = units(ox)
        reps = [d.classes[(x, j)] for j in range(ax.ngens)]
        gens = [a + r for a, r in zip(ax.gens, reps)]
        gens += [(0,) * ax.dim + u for u in ub] + [(0,) * ax.dim + tuple(-c for c in u) for u in ub]
        m = AffineMonoid.from_vectors(gens, dim=ax.dim + ox.dim)
        local[x] = (ax, ox, m, MonoidHom(m, ox, tuple(g[ax.dim:] for g in m.gens)))

    def value_at(x):
        return local[x][2]

    def restrict_between(x, y):
        ax, ox, m, _ = local[x]
        ra, ro = d.A.res(x, y), d.O.res(x, y)
        images = [ra(g[:ax.dim]) + ro(g[ax.dim:]) for g in m.gens]
        return MonoidHom(m, local[y][2], tuple(images))

    msheaf = build_sheaf(site, value_at, restrict_between, "M")
    alpha = {}
    for x in site.elements:
        if not site.covered(x):
            alpha[x] = local[x][3]
            continue
        fam = site.covers[x][0]
        images = []
        for g in msheaf.at(x).gens:
            secs = {u: local[u][3](msheaf.res(x, u)(g)) for u in fam}
            o = glue(d.O, x, fam, secs)
            if o is None:
                raise ValidationError(f"alpha does not glue at {x}")
            images.append(o)
        alpha[x] = MonoidHom(msheaf.at(x), d.O.at(x), tuple(images))
    return KatoStructure(d.O, msheaf, alpha, d.name)


# -- isomorphisms -----------------------------------------------------------------------------


def _candidate_maps(a1: AffineMonoid, a2: AffineMonoid) -> list[MonoidHom]:
    """Isomorphisms of sharp affine monoids, via bijections of irreducibles."""
    i1, i2 = irreducibles(a1), irreducibles(a2)
    if len(i1) != len(i2) or a1.rank != a2.rank:
        return []
    base = AffineMonoid(a1.dim, tuple(i1)) if i1 else AffineMonoid(a1.dim, ())
    words = [base.word_of(g) for g in a1.gens]
    out = []
    for perm in permutations(i2):
        images = tuple(a2.combine(w, perm) for w in words)
        h = MonoidHom(a1, a2, images)
        if affine_iso(h):
            out.append(h)
    return out


def df_isomorphic(d1: DFStructure, d2: DFStructure) -> IsoResult:
    """Search ``A1 ≅ A2`` matching classes, restrictions and transition cocycles."""
    site = d1.site
    order = site.bottom_up()
    options = {}
    for x in order:
        a1, a2 = _aff(d1.A.at(x), x), _aff(d2.A.at(x), x)
        opts = []
        for h in _candidate_maps(a1, a2):
            if site.covered(x):
                if all(_cocycles_match(d1, d2, x, g, h(g)) for g in a1.gens):
                    opts.append(h)
            else:
                ox = _aff(d1.O.at(x), x)
                if all(same_class(ox, d1.classes[(x, j)], class_rep(d2, x, h(g))) for j, g in enumerate(a1.gens)):
                    opts.append(h)
        if not opts:
            return IsoResult(False, witness=x, reason="no isomorphism of A matching the classes")
        options[x] = opts
    chosen: dict = {}

    def compatible(x, h) -> bool:
        for y in site.strictly_below(x):
            if y in chosen:
                r1, r2 = d1.A.res(x, y), d2.A.res(x, y)
                if any(chosen[y](r1.images[i]) != r2(h.images[i]) for i in range(len(h.images))):
                    return False
        return True

    def search(i) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for h in options[x]:
            if compatible(x, h):
                chosen[x] = h
                if search(i + 1):
                    return True
                del chosen[x]
        return False

    if search(0):
        return IsoResult(True, maps=dict(chosen))
    return IsoResult(False, reason="no compatible family of isomorphisms")


def _cocycles_match(d1: DFStructure, d2: DFStructure, x: str, a1, a2) -> bool:
    """Whether the glued classes of ``a1`` and ``a2`` are isomorphic torsors."""
    t1, t2 = transitions(d1, x, a1), transitions(d2, x, a2)
    fam = d1.site.covers[x][0]
    r1, r2 = local_reps(d1, x, a1), local_reps(d2, x, a2)
    for u in fam:
        if not same_class(_aff(d1.O.at(u), u), r1[u], r2[u]):
            return False
    # local isomorphisms are the unit differences of representatives; the
    # cocycles must then differ by their coboundary
    diff = {key: _vsub(t1[key], t2[key]) for key in t1}
    psi = coboundary(d1, x, diff)
    return psi is not None
