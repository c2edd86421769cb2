from pathlib import Path

import pytest

from logstruct.cli.formats import build_model, parse_document
from logstruct.corpus import (
    NAT,
    circle_df,
    circle_site,
    kato_corpus,
    line_model,
    line_structure_sheaf,
    non_quasi_integral,
    plane_model,
    pushout_model,
    trivial_log,
)
from logstruct.errors import NotQuasiIntegral, Unsupported, ValidationError
from logstruct.logsite import (
    FiniteSite,
    MonoidSheaf,
    SiteMorphism,
    characteristic_profile,
    check_df,
    check_log,
    check_sheaf,
    check_transitions,
    coboundary,
    constant_sheaf,
    df_isomorphic,
    df_to_kato,
    equalizer,
    glue,
    global_rep,
    is_quasi_integral,
    isomorphic,
    kato_to_df,
    pullback,
    quasi_integrality_witness,
    transitions,
    verify_strict,
)
from logstruct.monoids import AffineMonoid, MonoidHom

DATA = Path(__file__).parent / "data"


# -- sites ---------------------------------------------------------------------------


def test_site_order_and_covers():
    s = circle_site()
    assert s.leq("W1", "X") and not s.leq("U1", "U2")
    assert s.bottom_up()[:2] == ["W1", "W2"]
    assert sorted(s.overlaps("U1", "U2")) == ["W1", "W2"]
    assert s.covered("X") and not s.covered("U1")
    assert s.families("X") == [("X",), ("U1", "U2")]
    assert s.interval("W1", "X") == ["U1", "U2"]


def test_site_rejects_bad_declarations():
    with pytest.raises(ValidationError, match=r"\(c, a\)"):
        FiniteSite.build("t", ["a", "b", "c"], [("b", "a"), ("c", "b")])
    closed = FiniteSite.build("t", ["a", "b", "c"], [("b", "a"), ("c", "b")], close=True)
    assert closed.leq("c", "a")
    with pytest.raises(ValidationError, match="cycle"):
        FiniteSite.build("t", ["a", "b"], [("a", "b"), ("b", "a")], close=True)
    with pytest.raises(ValidationError, match="does not reach"):
        FiniteSite.build("t", ["x", "u", "v"], [("u", "x"), ("v", "x")], covers={"x": [["u"]]})
    with pytest.raises(ValidationError):
        FiniteSite.build("t", ["a", "a"])


def test_site_morphisms():
    line = line_structure_sheaf().site
    pt = FiniteSite.build("pt", ["p"])
    f = SiteMorphism(pt, line, {"p": "X"})
    assert f("p") == "X"
    assert f.compose(SiteMorphism.identity(pt)).mapping == {"p": "X"}
    with pytest.raises(ValidationError, match="monotone"):
        SiteMorphism(line, line, {"X": "U", "U": "X"})


# -- sheaves ----------------------------------------------------------------------------


def test_structure_sheaves_pass_the_checks():
    assert check_sheaf(line_structure_sheaf()).ok
    assert check_sheaf(circle_df().O).ok and check_sheaf(circle_df().A).ok


def test_functoriality_violation_is_reported():
    site = FiniteSite.build("t", ["a", "b", "c"], [("b", "a"), ("c", "a"), ("c", "b")])
    f = MonoidSheaf.build(
        site,
        {x: NAT for x in site.elements},
        {("a", "b"): MonoidHom.identity(NAT), ("b", "c"): MonoidHom.identity(NAT), ("a", "c"): MonoidHom(NAT, NAT, ((2,),))},
    )
    rep = check_sheaf(f)
    assert rep.status == "violation"
    assert "a -> b -> c" in rep.violations[0].message


def test_build_fills_composites():
    site = FiniteSite.build("t", ["a", "b", "c"], [("b", "a"), ("c", "a"), ("c", "b")])
    f = MonoidSheaf.build(site, {x: NAT for x in site.elements}, {("a", "b"): MonoidHom(NAT, NAT, ((2,),)), ("b", "c"): MonoidHom(NAT, NAT, ((3,),))})
    assert f.res("a", "c").images == ((6,),)


def test_equalizer_and_gluing_on_the_circle():
    a = circle_df().A
    eq = equalizer(a, ("U1", "U2"))
    assert eq.monoid.gens == ((1, 1),)
    assert glue(a, "X", ("U1", "U2"), {"U1": (1,), "U2": (1,)}) == (1, 1)
    assert glue(a, "X", ("U1", "U2"), {"U1": (1,), "U2": (2,)}) is None


def test_non_gluing_value_is_a_violation():
    site = circle_site()
    vals = {x: NAT for x in site.elements}
    vals["X"] = AffineMonoid.free(2)
    homs = {}
    for x, y in site.pairs():
        src = vals[x]
        homs[(x, y)] = MonoidHom(src, NAT, ((1,),) * src.ngens)
    rep = check_sheaf(MonoidSheaf(site, vals, homs))
    assert rep.status == "violation"
    assert rep.violations[0].element == "X"


# -- Kato and DF ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(kato_corpus()))
def test_corpus_round_trips(name):
    k = kato_corpus()[name]
    assert check_log(k).ok and is_quasi_integral(k)
    d = kato_to_df(k)
    assert check_df(d).ok
    k2 = df_to_kato(d)
    assert check_log(k2).ok
    assert isomorphic(k, k2).found
    assert df_isomorphic(d, kato_to_df(k2)).found


def test_df_first_round_trip():
    d = circle_df()
    assert df_isomorphic(d, kato_to_df(df_to_kato(d))).found


def test_characteristic_ranks():
    ranks = {x: len(kato_to_df(plane_model()).A.at(x).gens) for x in plane_model().site.elements}
    assert ranks == {"X": 2, "U1": 1, "U2": 1, "U12": 0}
    assert characteristic_profile(trivial_log().M.at("X")) == characteristic_profile(AffineMonoid(0, ()))


def test_distinct_structures_are_not_isomorphic():
    assert not isomorphic(line_model(), trivial_log()).found
    # same characteristic, different alpha: t versus t^2
    assert not isomorphic(line_model(), pushout_model()).found
    assert not df_isomorphic(kato_to_df(line_model()), kato_to_df(pushout_model())).found


def test_circle_cocycle_is_twisted():
    d = circle_df()
    gen = d.A.at("X").gens[0]
    t = transitions(d, "X", gen)
    assert t == {("U1", "U2", "W1"): (0, 0), ("U1", "U2", "W2"): (-1, 0)}
    assert coboundary(d, "X", t) is None
    assert coboundary(d, "X", {k: (0, 0) for k in t}) is not None
    assert global_rep(d, "X", gen) is None
    assert check_transitions(d, {("X", 0, "U1", "U2", "W2"): (-1, 0)}) == []
    bad = check_transitions(d, {("X", 0, "U1", "U2", "W2"): (1, 0)})
    assert len(bad) == 1 and bad[0].element == "X"


def test_quasi_integrality_witness():
    k = non_quasi_integral()
    assert is_quasi_integral(k) is False
    assert quasi_integrality_witness(k) == ("pt", (1, 0), (0, 1))
    with pytest.raises(NotQuasiIntegral):
        kato_to_df(k)


def test_associated_needs_trivial_covers():
    from logstruct.logsite import KatoStructure, associated

    d = circle_df()
    p = constant_sheaf(d.site, NAT, "P")
    alpha = {x: MonoidHom(NAT, d.O.at(x), (d.O.at(x).zero(),)) for x in d.site.elements}
    with pytest.raises(Unsupported):
        associated(KatoStructure(d.O, p, alpha))


def _closed_point(name):
    model = build_model(parse_document((DATA / name).read_text()))
    return model, model.morphisms[0][1]


def test_pullback_to_the_origin_is_strict():
    model, f = _closed_point("closed_point.log")
    pb = pullback(f, model.kato["line"])
    assert check_log(pb).ok
    res = verify_strict(f, model.kato["origin"], model.kato["line"])
    assert res.strict


def test_trivial_structure_on_the_origin_is_not_strict():
    model, f = _closed_point("closed_point_trivial.log")
    res = verify_strict(f, model.kato["origin"], model.kato["line"])
    assert not res.strict and res.witness == "p"
