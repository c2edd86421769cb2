"""Kato log structures ``alpha: M -> O`` on finite sites."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, NamedTuple, Optional

from ..errors import NotQuasiIntegral, TorsionPresent, UndecidedError, Unsupported, ValidationError
from ..intlat import FgAbelianGroup, GroupHom, IntMatrix, dot, in_lattice, lattice_basis
from ..monoids import (
    AffineMonoid,
    MonoidHom,
    PresentedMonoid,
    Verdict,
    irreducibles,
    is_integral,
    pushout,
    sharpen,
    sharpen_presented,
    to_affine,
    units,
)
from ..monoids.presented import box_words
from .sheaf import CheckReport, MonoidSheaf, Violation, report
from .site import FiniteSite, SiteMorphism


@dataclass(frozen=True, eq=False)
class KatoStructure:
    """``alpha[x]: M(x) -> O(x)`` commuting with restrictions."""

    O: MonoidSheaf
    M: MonoidSheaf
    alpha: Mapping[str, MonoidHom]
    name: str = field(default="", compare=False)

    @property
    def site(self) -> FiniteSite:
        return self.O.site

    def __post_init__(self):
        for x in self.site.elements:
            if x not in self.alpha:
                raise ValidationError(f"alpha is missing at {x}")


def trivial_structure(o: MonoidSheaf, name: str = "") -> KatoStructure:
    """``M = O^x`` with the inclusion."""
    site = o.site
    vals, alpha = {}, {}
    for x in site.elements:
        ox = _affine(o.at(x), x)
        ub = units(ox)
        gens = tuple(ub) + tuple(tuple(-c for c in b) for b in ub)
        vals[x] = AffineMonoid(ox.dim, gens)
        alpha[x] = MonoidHom(vals[x], ox, gens)
    homs = {(x, y): MonoidHom(vals[x], vals[y], tuple(o.res(x, y)(g) for g in vals[x].gens)) for x, y in site.pairs()}
    return KatoStructure(o, MonoidSheaf(site, vals, homs, "M"), alpha, name)


def _affine(m, where: str) -> AffineMonoid:
    if not isinstance(m, AffineMonoid):
        raise Unsupported(f"an affine value is needed at {where}")
    return m


# -- unit groups ------------------------------------------------------------------


class UnitData(NamedTuple):
    group: FgAbelianGroup
    elements: tuple  # monoid elements representing the canonical generators
    coords: object  # unit element -> canonical coordinates


def unit_data(m) -> UnitData:
    if isinstance(m, AffineMonoid):
        ub = units(m)
        return UnitData(FgAbelianGroup.free(len(ub)), tuple(ub), lambda v: tuple(in_lattice(ub, v)))
    g = m.unit_group
    idx = m.unit_generators
    elems = []
    for j in range(g.ngens):
        word = [0] * m.ngens
        for pos, c in zip(idx, g.from_canonical.col(j)):
            if c > 0:
                word[pos] += c
            elif c < 0:
                inv = m.inverse_word(pos)
                word = [a + (-c) * b for a, b in zip(word, inv)]
        elems.append(tuple(word))
    return UnitData(g, tuple(elems), m.unit_coordinates)


def unit_map(alpha: MonoidHom) -> GroupHom:
    """``alpha`` restricted to unit groups."""
    src, tgt = unit_data(alpha.source), unit_data(alpha.target)
    cols = []
    for e in src.elements:
        img = alpha(e)
        if not alpha.target.is_unit(img):
            raise ValidationError(f"unit {e} is sent to the non-unit {img}")
        cols.append(tgt.coords(img))
    mat = IntMatrix.from_columns(cols, nrows=tgt.group.ngens) if cols else IntMatrix.zeros(tgt.group.ngens, 0)
    return GroupHom(src.group, tgt.group, mat)


# -- checks ---------------------------------------------------------------------------


def check_log(k: KatoStructure) -> CheckReport:
    """Compatibility with restrictions and the log condition at every element."""
    site = k.site
    bad, unknown = [], []
    for x in site.elements:
        a = k.alpha[x]
        r = a.check()
        if r is Verdict.UNEQUAL:
            bad.append(Violation(x, "alpha does not respect relations"))
        elif r is Verdict.UNDECIDED:
            unknown.append(Violation(x, "alpha undecided within bound"))
        for y in site.strictly_below(x):
            ry, oy = k.M.res(x, y), k.O.at(y)
            for i, img in enumerate(a.images):
                lhs = k.O.res(x, y)(img)
                rhs = k.alpha[y](ry.images[i])
                v = oy.eq(lhs, rhs)
                if v is Verdict.UNEQUAL:
                    bad.append(Violation(x, f"alpha does not commute with restriction to {y} on generator {i}"))
                elif v is Verdict.UNDECIDED:
                    unknown.append(Violation(x, f"commutation with restriction to {y} undecided"))
        bad.extend(_log_condition(k, x))
    return report(bad, unknown)


def _log_condition(k: KatoStructure, x: str) -> list[Violation]:
    m, o, a = k.M.at(x), k.O.at(x), k.alpha[x]
    for i, img in enumerate(a.images):
        g = m.gens[i] if isinstance(m, AffineMonoid) else tuple(int(i == j) for j in range(m.ngens))
        if o.is_unit(img) and not m.is_unit(g):
            return [Violation(x, f"generator {i} is not a unit but its image {img} is")]
    try:
        u = unit_map(a)
    except ValidationError as exc:
        return [Violation(x, str(exc))]
    if not u.is_isomorphism():
        return [Violation(x, "alpha is not an isomorphism on units")]
    return []


def quasi_integrality_witness(k: KatoStructure, side: int = 2) -> Optional[tuple]:
    """``(x, u, m)`` with ``u`` a nonzero unit and ``u + m = m`` in ``M(x)``."""
    for x in k.site.elements:
        m = k.M.at(x)
        if isinstance(m, AffineMonoid):
            continue
        idx = m.unit_generators
        if not idx:
            continue
        for uw in box_words(len(idx), side):
            u = [0] * m.ngens
            for pos, c in zip(idx, uw):
                u[pos] = c
            u = tuple(u)
            if not any(m.unit_coordinates(u)):
                continue
            for s in box_words(m.ngens, side):
                if m.eq(m.add(u, s), s) is Verdict.EQUAL:
                    return x, u, tuple(s)
    return None


def is_quasi_integral(k: KatoStructure) -> Optional[bool]:
    """True, False, or None when undecided within the word-problem bound."""
    verdict = True
    for x in k.site.elements:
        m = k.M.at(x)
        if isinstance(m, AffineMonoid):
            continue
        integral = is_integral(m)
        if integral:
            continue
        if quasi_integrality_witness(k) is not None:
            return False
        verdict = None
    return verdict


def require_quasi_integral(k: KatoStructure) -> None:
    w = quasi_integrality_witness(k)
    if w is not None:
        x, u, s = w
        raise NotQuasiIntegral(f"at {x} the unit {u} fixes the section {s}", witness=w)
    if is_quasi_integral(k) is None:
        raise UndecidedError("quasi-integrality undecided within the bound")


# -- characteristic ----------------------------------------------------------------------


def characteristic(m):
    """``M / M^x`` with the quotient map; affine whenever possible."""
    if isinstance(m, AffineMonoid):
        return sharpen(m)
    sharp, q = sharpen_presented(m)
    try:
        aff, real = to_affine(sharp)
    except (TorsionPresent, Unsupported, UndecidedError):
        return sharp, q
    return aff, real.compose(q)


def characteristic_profile(m) -> tuple:
    """Cheap isomorphism invariant of the characteristic monoid."""
    c, _ = characteristic(m)
    if isinstance(c, AffineMonoid):
        irr = irreducibles(c)
        return ("affine", c.rank, len(irr))
    g = c.gp_group
    return ("presented", g.rank, g.torsion, c.ngens)


# -- affine models ---------------------------------------------------------------------


def affinize(k: KatoStructure) -> KatoStructure:
    """Same structure with every ``M(x)`` realised as an affine monoid."""
    site = k.site
    if all(isinstance(k.M.at(x), AffineMonoid) for x in site.elements):
        return k
    vals, real = {}, {}
    for x in site.elements:
        m = k.M.at(x)
        if isinstance(m, AffineMonoid):
            vals[x], real[x] = m, MonoidHom.identity(m)
        else:
            vals[x], real[x] = to_affine(m)
    alpha = {x: _transport(k.alpha[x], real[x], vals[x]) for x in site.elements}
    homs = {}
    for x, y in site.pairs():
        h = real[y].compose(k.M.res(x, y))
        homs[(x, y)] = _transport(h, real[x], vals[x])
    return KatoStructure(k.O, MonoidSheaf(site, vals, homs, k.M.name), alpha, k.name)


def _transport(h: MonoidHom, real: MonoidHom, new_source: AffineMonoid) -> MonoidHom:
    """``h`` precomposed with the inverse of the generator realisation ``real``."""
    if real.source is new_source:
        return MonoidHom(new_source, h.target, h.images)
    images = []
    for g in new_source.gens:
        i = real.images.index(g)
        images.append(h.images[i])
    return MonoidHom(new_source, h.target, tuple(images))


# -- associated log structure -------------------------------------------------------------


def associated(k: KatoStructure) -> KatoStructure:
    """``M ⊕_{alpha^{-1} O^x} O^x`` at every element, with induced maps.

    Supported for affine values on sites with trivial covers.
    """
    site = k.site
    if not site.has_trivial_covers():
        raise Unsupported("the associated log structure is computed on sites with trivial covers only")
    data = {}
    for x in site.elements:
        m, o, a = _affine(k.M.at(x), x), _affine(k.O.at(x), x), k.alpha[x]
        gi = [i for i, img in enumerate(a.images) if o.is_unit(img)]
        g = AffineMonoid(m.dim, tuple(m.gens[i] for i in gi))
        ub = units(o)
        ugens = tuple(ub) + tuple(tuple(-c for c in b) for b in ub)
        ux = AffineMonoid(o.dim, ugens)
        po = pushout(MonoidHom(g, m, g.gens), MonoidHom(g, ux, tuple(a.images[i] for i in gi)))
        data[x] = (m, o, ub, ugens, po)
    vals, alpha = {}, {}
    for x, (m, o, ub, ugens, po) in data.items():
        vals[x] = po.monoid
        alpha[x] = MonoidHom(po.monoid, o, tuple(k.alpha[x].images) + ugens)
    homs = {}
    for x, y in site.pairs():
        m, o, ub, ugens, po = data[x]
        my, oy, uby, ugy, poy = data[y]
        images = []
        for img in k.M.res(x, y).images:
            images.append(poy.left(img))
        for u in ugens:
            z = in_lattice(uby, k.O.res(x, y)(u))
            word = [max(c, 0) for c in z] + [max(-c, 0) for c in z]
            images.append(poy.right.on_word(word))
        homs[(x, y)] = MonoidHom(vals[x], vals[y], tuple(images))
    out = KatoStructure(k.O, MonoidSheaf(site, vals, homs, "M"), alpha, k.name)
    try:
        return affinize(out)
    except (TorsionPresent, Unsupported, UndecidedError):
        return out


# -- pullback ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LogMorphismData:
    """Site map ``f: S -> T`` with ``O_S`` and comparisons ``O_T(f(s)) -> O_S(s)``."""

    site_map: SiteMorphism
    O_source: MonoidSheaf
    comparison: Mapping[str, MonoidHom]
    name: str = ""

    def __post_init__(self):
        for s in self.site_map.source.elements:
            if s not in self.comparison:
                raise ValidationError(f"comparison missing at {s}")


def pullback(f: LogMorphismData, k: KatoStructure) -> KatoStructure:
    """Inverse image (composition with the site map) followed by ``associated``."""
    fm = f.site_map
    src = fm.source
    vals = {s: k.M.at(fm(s)) for s in src.elements}
    alpha = {s: f.comparison[s].compose(k.alpha[fm(s)]) for s in src.elements}
    homs = {}
    for x, y in src.pairs():
        fx, fy = fm(x), fm(y)
        homs[(x, y)] = k.M.res(fx, fy) if fx != fy else MonoidHom.identity(vals[x])
    prelog = KatoStructure(f.O_source, MonoidSheaf(src, vals, homs, "M"), alpha, k.name)
    return associated(prelog)


def identity_morphism(o: MonoidSheaf) -> LogMorphismData:
    site = o.site
    return LogMorphismData(SiteMorphism.identity(site), o, {x: MonoidHom.identity(o.at(x)) for x in site.elements})


def compose_morphisms(g: LogMorphismData, f: LogMorphismData) -> LogMorphismData:
    """``g ∘ f`` for ``f: S -> T`` and ``g: T -> R``."""
    fm = f.site_map
    comp = {s: f.comparison[s].compose(g.comparison[fm(s)]) for s in fm.source.elements}
    return LogMorphismData(g.site_map.compose(fm), f.O_source, comp)


# -- isomorphisms ----------------------------------------------------------------------------


@dataclass(frozen=True)
class IsoResult:
    found: Optional[bool]
    maps: Optional[Mapping[str, MonoidHom]] = None
    witness: Optional[str] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return bool(self.found)


def _candidates(o: AffineMonoid, m2: AffineMonoid, a2: MonoidHom, target) -> list:
    """Elements ``m`` of ``M2`` with ``alpha2(m) = target``."""
    deg = o.degree
    tc = o.coordinates(target)
    if tc is None:
        return []
    goal = dot(deg, tc)
    ub = units(m2)
    ub_img = [a2(u) for u in ub]
    nonunit = [i for i in range(m2.ngens) if not m2.unit_mask[i]]
    weights = [dot(deg, o.coordinates(a2.images[i])) for i in nonunit]
    out = []

    def rec(j, left, acc):
        if j == len(nonunit):
            if left:
                return
            w = m2.element(_spread(acc, nonunit, m2.ngens))
            diff = tuple(t - s for t, s in zip(target, a2(w)))
            z = in_lattice(ub_img, diff) if ub_img else (() if not any(diff) else None)
            if z is None:
                return
            cand = tuple(a + sum(c * u[i] for c, u in zip(z, ub)) for i, a in enumerate(w))
            if cand not in out:
                out.append(cand)
            return
        wt = weights[j]
        if wt <= 0:
            rec(j + 1, left, acc + [0])
            return
        for c in range(left // wt + 1):
            rec(j + 1, left - c * wt, acc + [c])

    if goal >= 0:
        rec(0, goal, [])
    return out


def _spread(acc, idx, n):
    w = [0] * n
    for i, c in zip(idx, acc):
        w[i] = c
    return w


def affine_iso(h: MonoidHom) -> bool:
    """Whether a homomorphism of affine monoids is an isomorphism."""
    src, tgt = h.source, h.target
    if src.rank != tgt.rank or h.check() is not Verdict.EQUAL:
        return False
    imgs = [h(b) for b in src.gp_basis]
    if imgs and len(lattice_basis(imgs, tgt.dim)) != src.rank:
        return False
    image = AffineMonoid.from_vectors(list(h.images), dim=tgt.dim)
    return all(image.contains(g) for g in tgt.gens)


def isomorphic(k1: KatoStructure, k2: KatoStructure) -> IsoResult:
    """Search an isomorphism ``M1 -> M2`` over O commuting with alpha and restrictions."""
    site = k1.site
    if site is not k2.site and site.elements != k2.site.elements:
        raise ValueError("structures live on different sites")
    for x in site.elements:
        if characteristic_profile(k1.M.at(x)) != characteristic_profile(k2.M.at(x)):
            return IsoResult(False, witness=x, reason="characteristic monoids differ")
    a1, a2 = affinize(k1), affinize(k2)
    order = site.bottom_up()
    options = {}
    for x in order:
        o = _affine(k1.O.at(x), x)
        m1, m2 = a1.M.at(x), a2.M.at(x)
        cands = [_candidates(o, m2, a2.alpha[x], img) for img in a1.alpha[x].images]
        if any(not c for c in cands):
            return IsoResult(False, witness=x, reason="a generator has no candidate image")
        opts = []
        for choice in product(*cands):
            h = MonoidHom(m1, m2, choice)
            if affine_iso(h):
                opts.append(h)
        if not opts:
            return IsoResult(False, witness=x, reason="no candidate assignment is an isomorphism")
        options[x] = opts

    chosen: dict = {}

    def compatible(x, h) -> bool:
        for y in site.strictly_below(x):
            if y not in chosen:
                continue
            r1, r2 = a1.M.res(x, y), a2.M.res(x, y)
            for i in range(len(h.images)):
                if chosen[y](r1.images[i]) != r2(h.images[i]):
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
    return IsoResult(False, witness=order[len(chosen)] if len(chosen) < len(order) else None, reason="no compatible family of isomorphisms")


class StrictResult(NamedTuple):
    strict: bool
    witness: Optional[str]
    pulled_back: KatoStructure


def verify_strict(f: LogMorphismData, source: KatoStructure, target: KatoStructure) -> StrictResult:
    """Whether ``f^{-1}(target) -> source`` is an isomorphism."""
    pb = pullback(f, target)
    for x in f.site_map.source.elements:
        if characteristic_profile(pb.M.at(x)) != characteristic_profile(source.M.at(x)):
            return StrictResult(False, x, pb)
    res = isomorphic(pb, source)
    return StrictResult(bool(res.found), res.witness, pb)
