"""Charts for DF structures: verification, upgrading, and Kato lifts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from ..errors import Obstructed, TorsionPresent, Unsupported
from ..intlat import FgAbelianGroup, GroupHom, IntMatrix, in_lattice, kernel_basis, lattice_basis, split_onto_free
from ..monoids import AffineMonoid, MonoidHom, PresentedMonoid, Verdict, predicates, to_affine, units
from .df import DFStructure, class_rep, same_class
from .sheaf import MonoidSheaf


@dataclass(frozen=True)
class ChartResult:
    is_chart: bool
    witness: Optional[str] = None
    reason: str = ""
    checked: tuple = ()

    def __bool__(self) -> bool:
        return self.is_chart


def _affine_source(p):
    if isinstance(p, AffineMonoid):
        return p
    if p.gp_group.torsion:
        raise TorsionPresent(f"chart monoid has torsion {p.gp_group}")
    return to_affine(p)[0]


def stalk_check(phi: MonoidHom) -> Optional[str]:
    """Why ``P / ker(phi) -> A`` fails to be an isomorphism, or None.

    ``A`` is sharp, so the kernel is the face spanned by the generators sent
    to zero.  Surjectivity is membership of the generators of A in the image;
    injectivity is ``ker(phi^gp) = gp(face)``.
    """
    p, a = phi.source, phi.target
    if not isinstance(p, AffineMonoid) or not isinstance(a, AffineMonoid):
        raise Unsupported("chart verification needs affine monoids")
    image = AffineMonoid.from_vectors(list(phi.images), dim=a.dim)
    for g in a.gens:
        if not image.contains(g):
            return f"not surjective: {g} is not in the image"
    if not p.gp_basis:
        return None
    cols = [phi(b) for b in p.gp_basis]
    ker = kernel_basis(IntMatrix.from_columns(cols, nrows=a.dim)) if a.dim else [
        tuple(int(i == j) for j in range(p.rank)) for i in range(p.rank)
    ]
    face = [p.gp_coords[i] for i, img in enumerate(phi.images) if not any(img)]
    fb = lattice_basis(face, p.rank) if face else []
    for v in ker:
        if in_lattice(fb, v) is None:
            return f"not injective: {p.from_coords(v)} is in the kernel of the group map but not in the face"
    return None


def verify_chart(a: MonoidSheaf, x: str, p, h: MonoidHom) -> ChartResult:
    """Whether ``h: P -> A(x)`` is a chart for ``A`` over ``x``."""
    p = _affine_source(p) if not isinstance(p, AffineMonoid) else p
    if h.source != p:
        h = MonoidHom(p, h.target, h.images)
    if h.check() is not Verdict.EQUAL:
        return ChartResult(False, x, "not a homomorphism: the images do not respect the relations of P", (x,))
    checked = []
    for y in a.site.down(x):
        phi = a.res(x, y).compose(h)
        reason = stalk_check(phi)
        checked.append(y)
        if reason is not None:
            return ChartResult(False, y, reason, tuple(checked))
    return ChartResult(True, checked=tuple(checked))


@dataclass(frozen=True)
class Upgrade:
    monoid: AffineMonoid
    chart: MonoidHom
    result: ChartResult
    source_predicates: dict
    upgraded_predicates: dict

    @property
    def preserved(self) -> bool:
        """Properties of the original chart monoid hold for the upgraded one."""
        keys = ("fine", "saturated", "torsion_free")
        return all(self.upgraded_predicates[k] or not self.source_predicates[k] for k in keys)


def upgrade_chart(a: MonoidSheaf, x: str, p, h: MonoidHom) -> Upgrade:
    """Replace a verified chart by the identity of ``A(x)``."""
    first = verify_chart(a, x, p, h)
    if not first:
        raise ValueError(f"not a chart: {first.reason} at {first.witness}")
    q = a.at(x)
    ident = MonoidHom.identity(q)
    res = verify_chart(a, x, q, ident)
    return Upgrade(q, ident, res, predicates(p).as_dict(), predicates(q).as_dict())


@dataclass(frozen=True)
class KatoChart:
    cover: tuple
    lifts: Mapping[str, MonoidHom]  # element -> P -> O(element)


def lift_chart(d: DFStructure, x: str, p, h: MonoidHom) -> KatoChart:
    """Lift the DF chart ``h: P -> A(x)`` to ``P -> O`` over a cover of ``x``.

    At each cover element the sections ``(p, o)`` with ``o`` in the class of
    ``h(p)`` form an extension of ``P^gp`` by the units of O; a splitting of
    that surjection onto the free group ``P^gp`` gives the lift.
    """
    if isinstance(p, PresentedMonoid) and p.gp_group.torsion:
        raise TorsionPresent(f"chart monoid has torsion {p.gp_group}")
    p = _affine_source(p)
    if h.source != p:
        h = MonoidHom(p, h.target, h.images)
    site = d.site
    cover = tuple(site.covers[x][0]) if site.covered(x) else (x,)
    lifts = {}
    for u in cover:
        hu = d.A.res(x, u).compose(h)
        ou = d.O.at(u)
        if not isinstance(ou, AffineMonoid):
            raise Unsupported(f"lifting needs an affine O at {u}")
        reps = [class_rep(d, u, img) for img in hu.images]
        k = p.rank
        vecs = [tuple(c) + tuple(o) for c, o in zip(p.gp_coords, reps)]
        vecs += [(0,) * k + tuple(b) for b in units(ou)]
        basis = lattice_basis(vecs, k + ou.dim)
        proj = GroupHom(
            FgAbelianGroup.free(len(basis)),
            FgAbelianGroup.free(k),
            IntMatrix.from_columns([b[:k] for b in basis], nrows=k),
        )
        section = split_onto_free(proj)
        gp_lifts = []
        for i in range(k):
            coeffs = section.matrix.col(i)
            gp_lifts.append(tuple(sum(c * b[k + t] for c, b in zip(coeffs, basis)) for t in range(ou.dim)))
        images = tuple(ou.combine(c, gp_lifts) for c in p.gp_coords)
        lift = MonoidHom(p, ou, images)
        for j, (img, rep) in enumerate(zip(images, reps)):
            if not ou.contains(img) or not same_class(ou, img, rep):
                raise Obstructed(f"lift of generator {j} at {u} leaves the class")
        lifts[u] = lift
    return KatoChart(cover, lifts)


def lift_projects(d: DFStructure, x: str, h: MonoidHom, chart: KatoChart) -> bool:
    """The lifts reproduce the DF chart after passing to classes."""
    for u, lift in chart.lifts.items():
        hu = d.A.res(x, u).compose(h)
        ou = d.O.at(u)
        for img, src in zip(lift.images, hu.images):
            if not same_class(ou, img, class_rep(d, u, src)):
                return False
    return True
