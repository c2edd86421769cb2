import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logstruct.corpus import A1_CONE, NAT, NAT2, TWO_THREE, chart_corpus, circle_df, kato_corpus
from logstruct.errors import Obstructed, TorsionPresent
from logstruct.logsite import (
    kato_to_df,
    lift_chart,
    lift_projects,
    stalk_check,
    upgrade_chart,
    verify_chart,
)
from logstruct.monoids import MonoidHom, PresentedMonoid
from oracles import brute_stalk_is_iso

CORPUS = chart_corpus()


def _hom(d, x, p, images):
    return MonoidHom(p, d.A.at(x), tuple(images))


def _brute(d, x, h):
    return all(brute_stalk_is_iso(d.A.res(x, y).compose(h)) for y in d.site.down(x))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_charts_agree_with_brute_force(name):
    d, x, p, images = CORPUS[name]
    h = _hom(d, x, p, images)
    res = verify_chart(d.A, x, p, h)
    assert res.is_chart and res.is_chart == _brute(d, x, h)
    assert res.checked == tuple(d.site.down(x))


@pytest.mark.parametrize(
    "name,images,witness",
    [
        ("line", [(2,)], "X"),
        ("plane", [(0, 1), (0, 1)], "X"),
        ("plane", [(2, 0), (0, 1)], "X"),
        ("circle", [(2, 2)], "X"),
    ],
)
def test_bad_charts_agree_with_brute_force(name, images, witness):
    d, x, p, _ = CORPUS[name]
    h = _hom(d, x, p, images)
    res = verify_chart(d.A, x, p, h)
    assert not res.is_chart and res.witness == witness
    assert not _brute(d, x, h)


def test_stalkwise_failure_is_located():
    # N^2 -> A(X) sending both generators to the first axis fails at X but
    # restricts to an isomorphism on U2, where that axis dies.
    d, x, p, _ = CORPUS["plane"]
    ax = d.A.at(x)
    h = _hom(d, x, p, [ax.gens[0], ax.gens[0]])
    assert stalk_check(h) is not None
    for y in d.site.down(x):
        assert (stalk_check(d.A.res(x, y).compose(h)) is None) == brute_stalk_is_iso(d.A.res(x, y).compose(h))


SOURCES = {"N": NAT, "N2": NAT2, "A1": A1_CONE, "N23": TWO_THREE}


@given(
    st.sampled_from(["line", "plane", "circle", "pushout"]),
    st.sampled_from(sorted(SOURCES)),
    st.data(),
)
@settings(max_examples=80, deadline=None)
def test_random_chart_maps_agree_with_brute_force(name, src, data):
    d, x, _, _ = CORPUS[name]
    p = SOURCES[src]
    ax = d.A.at(x)
    coeff = st.lists(st.integers(0, 2), min_size=ax.ngens, max_size=ax.ngens)
    images = []
    for _ in range(p.ngens):
        c = data.draw(coeff)
        images.append(ax.element(c) if ax.ngens else ())
    h = _hom(d, x, p, images)
    assert verify_chart(d.A, x, p, h).is_chart == _brute(d, x, h)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_upgrade_reverifies(name):
    d, x, p, images = CORPUS[name]
    up = upgrade_chart(d.A, x, p, _hom(d, x, p, images))
    assert up.result.is_chart
    assert verify_chart(d.A, x, up.monoid, up.chart).is_chart
    assert up.preserved
    assert up.upgraded_predicates["sharp"]


def test_upgrade_of_a_non_chart_raises():
    d, x, p, _ = CORPUS["line"]
    with pytest.raises(ValueError, match="not a chart"):
        upgrade_chart(d.A, x, p, _hom(d, x, p, [(2,)]))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_lifts_project_back(name):
    d, x, p, images = CORPUS[name]
    h = _hom(d, x, p, images)
    try:
        chart = lift_chart(d, x, p, h)
    except Obstructed as exc:  # pragma: no cover - reported as a failure
        pytest.fail(f"lift obstructed on a torsion-free chart: {exc}")
    assert lift_projects(d, x, h, chart)
    expected = d.site.covers[x][0] if d.site.covered(x) else (x,)
    assert chart.cover == tuple(expected)
    for u, lift in chart.lifts.items():
        assert lift.target == d.O.at(u)
        assert all(d.O.at(u).contains(img) for img in lift.images)


def test_circle_lift_uses_the_cover():
    d = circle_df()
    x = "X"
    h = MonoidHom(NAT, d.A.at(x), (d.A.at(x).gens[0],))
    chart = lift_chart(d, x, NAT, h)
    assert chart.cover == ("U1", "U2")
    assert chart.lifts["U1"].images == ((0, 1),)


def test_lift_to_kato_chart_of_the_pushout():
    d = kato_to_df(kato_corpus()["pushout"])
    h = MonoidHom(NAT, d.A.at("X"), (d.A.at("X").gens[0],))
    chart = lift_chart(d, "X", NAT, h)
    # the class of the generator is t^2 up to a unit
    (img,) = chart.lifts["X"].images
    assert img[0] == 2


def test_lift_rejects_torsion():
    d, x, _, _ = CORPUS["line"]
    t = PresentedMonoid(2, (((2, 0), (0, 2)),))
    with pytest.raises(TorsionPresent):
        lift_chart(d, x, t, MonoidHom(t, d.A.at(x), ((1,), (1,))))
