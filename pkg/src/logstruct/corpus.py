"""Small finite-site log structures used by the tests, demos and CLI examples.

Coordinates of the structure sheaves follow one convention: the last
coordinate is a unit direction, the others are coordinate functions that
become invertible on smaller opens.
"""

from __future__ import annotations

from .logsite import (
    DFStructure,
    FiniteSite,
    KatoStructure,
    MonoidSheaf,
    associated,
    build_sheaf,
    constant_sheaf,
    trivial_structure,
)
from .monoids import AffineMonoid, MonoidHom, PresentedMonoid

NAT = AffineMonoid(1, ((1,),), name="N")
NAT2 = AffineMonoid(2, ((1, 0), (0, 1)), name="N2")
A1_CONE = AffineMonoid(2, ((1, 0), (1, 1), (1, 2)), name="A1")
TWO_THREE = AffineMonoid(1, ((2,), (3,)), name="N23")


def _identity_sheaf(site: FiniteSite, values: dict, name: str) -> MonoidSheaf:
    homs = {}
    for x, y in site.pairs():
        homs[(x, y)] = MonoidHom(values[x], values[y], values[x].gens)
    return MonoidSheaf(site, values, homs, name)


def line_structure_sheaf() -> MonoidSheaf:
    """Functions on the affine line near the origin: ``t^a u`` with ``u`` a unit."""
    site = FiniteSite.build("line", ["X", "U"], [("U", "X")])
    ox = AffineMonoid(2, ((1, 0), (0, 1), (0, -1)), name="O_X")
    ou = AffineMonoid(2, ((1, 0), (-1, 0), (0, 1), (0, -1)), name="O_U")
    return _identity_sheaf(site, {"X": ox, "U": ou}, "O")


def trivial_log() -> KatoStructure:
    return trivial_structure(line_structure_sheaf(), "trivial")


def line_model() -> KatoStructure:
    """The divisorial structure of the origin: every function invertible off it."""
    o = line_structure_sheaf()
    alpha = {x: MonoidHom.identity(o.at(x)) for x in o.site.elements}
    return KatoStructure(o, o, alpha, "line")


def plane_model() -> KatoStructure:
    """Two coordinate axes; the chart ``N^2`` is the identity on ``A(X)``."""
    site = FiniteSite.build(
        "plane",
        ["X", "U1", "U2", "U12"],
        [("U1", "X"), ("U2", "X"), ("U12", "X"), ("U12", "U1"), ("U12", "U2")],
    )
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    neg = [tuple(-c for c in v) for v in e]
    values = {
        "X": AffineMonoid(3, (e[0], e[1], e[2], neg[2]), name="O_X"),
        "U1": AffineMonoid(3, (e[0], neg[0], e[1], e[2], neg[2]), name="O_U1"),
        "U2": AffineMonoid(3, (e[0], e[1], neg[1], e[2], neg[2]), name="O_U2"),
        "U12": AffineMonoid(3, (e[0], neg[0], e[1], neg[1], e[2], neg[2]), name="O_U12"),
    }
    o = _identity_sheaf(site, values, "O")
    alpha = {x: MonoidHom.identity(o.at(x)) for x in site.elements}
    return KatoStructure(o, o, alpha, "plane")


def circle_site() -> FiniteSite:
    return FiniteSite.build(
        "circle",
        ["X", "U1", "U2", "W1", "W2"],
        [("U1", "X"), ("U2", "X"), ("W1", "X"), ("W2", "X"), ("W1", "U1"), ("W2", "U1"), ("W1", "U2"), ("W2", "U2")],
        covers={"X": [["U1", "U2"]]},
    )


def circle_df() -> DFStructure:
    """A line bundle on a circle of two arcs, twisted on one overlap.

    ``A = N`` everywhere; the class of the generator is glued from the arcs
    and the gluing units form a nontrivial cocycle.
    """
    site = circle_site()
    o_local = AffineMonoid(2, ((1, 0), (-1, 0), (0, 1)), name="O")
    twisted = MonoidHom(o_local, o_local, ((1, 0), (-1, 0), (1, 1)))

    def o_restrict(x, y):
        return twisted if (x, y) == ("U2", "W2") else MonoidHom.identity(o_local)

    o = build_sheaf(site, lambda x: o_local, o_restrict, "O")
    a = build_sheaf(site, lambda x: NAT, lambda x, y: MonoidHom.identity(NAT), "A")
    classes = {}
    for x in site.elements:
        classes[(x, 0)] = None if site.covered(x) else (0, 1)
    return DFStructure(o, a, classes, "circle")


def pushout_model() -> KatoStructure:
    """Log structure associated with the chart ``N -> O``, ``1 -> t^2``."""
    o = line_structure_sheaf()
    p = constant_sheaf(o.site, NAT, "P")
    alpha = {x: MonoidHom(NAT, o.at(x), ((2, 0),)) for x in o.site.elements}
    return associated(KatoStructure(o, p, alpha, "pushout"))


def non_quasi_integral() -> KatoStructure:
    """``<e, t | 2e = 0, e + t = t>`` on a point: the unit ``e`` fixes ``t``."""
    site = FiniteSite.build("pt", ["pt"])
    q = PresentedMonoid(2, (((2, 0), (0, 0)), ((1, 1), (0, 1))), name="Q")
    o = constant_sheaf(site, q, "O")
    return KatoStructure(o, o, {"pt": MonoidHom.identity(q)}, "nonqi")


def kato_corpus() -> dict:
    """Quasi-integral examples in Kato form."""
    from .logsite import df_to_kato

    return {
        "trivial": trivial_log(),
        "line": line_model(),
        "plane": plane_model(),
        "circle": df_to_kato(circle_df()),
        "pushout": pushout_model(),
    }


def chart_corpus() -> dict:
    """A chart ``(x, P, images in A(x))`` per corpus example, in DF form."""
    from .logsite import kato_to_df

    out = {}
    for name, k in kato_corpus().items():
        d = circle_df() if name == "circle" else kato_to_df(k)
        ax = d.A.at("X")
        if name == "plane":
            out[name] = (d, "X", NAT2, tuple(ax.gens))
        elif ax.ngens == 0:
            out[name] = (d, "X", AffineMonoid(0, (), name="0"), ())
        else:
            out[name] = (d, "X", NAT, (ax.gens[0],))
    return out
