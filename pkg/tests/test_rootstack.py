import itertools

import pytest

from logstruct.corpus import A1_CONE, NAT, NAT2, TWO_THREE, kato_corpus, plane_model
from logstruct.errors import PredicateFailure
from logstruct.monoids import AffineMonoid, c_n
from logstruct.rootstack import chart_stack, export_toric, fiber_rank, local_root_stack, tower
from oracles import invariant_factors

CHARTS = {"N": NAT, "N2": NAT2, "A1": A1_CONE}


def elements(group):
    """Every element of a finite group, in canonical coordinates."""
    return list(itertools.product(*[range(d) for d in group.torsion]))


def test_chart_stack_of_the_cone():
    g = chart_stack(A1_CONE)
    assert g.group.rank == 2 and not g.group.torsion
    assert g.degrees() == [(1, 0), (1, 1), (1, 2)]
    assert g.grading_is_homomorphism()
    assert g.degree_zero_part() == []


@pytest.mark.parametrize("name", sorted(CHARTS))
@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_invariants_of_a_level_are_the_chart(name, n):
    p = CHARTS[name]
    g = local_root_stack(p, n)
    assert g.grading_is_homomorphism()
    # invariants of mu_n on k[(1/n)P] are k[P], sitting inside as n * P
    assert g.degree_zero_part() == sorted(tuple(n * x for x in v) for v in p.gens)


def test_level_two_of_the_cone():
    g = local_root_stack(A1_CONE, 2)
    assert str(g.group) == "Z/2 + Z/2"
    assert g.degree_zero_part() == [(2, 0), (2, 2), (2, 4)]


def test_root_stacks_need_a_good_chart():
    with pytest.raises(PredicateFailure, match="saturated"):
        local_root_stack(TWO_THREE, 2)
    with pytest.raises(PredicateFailure, match="sharp"):
        local_root_stack(AffineMonoid(1, ((1,), (-1,))), 2)


@pytest.mark.parametrize("name", sorted(CHARTS))
def test_tower_of_twelve(name):
    t = tower(CHARTS[name], 12)
    assert t.divisors() == [1, 2, 3, 4, 6, 12]
    assert t.failures() == []
    assert t.composition_count() == 10
    one = t.levels[1]
    assert one.group.is_trivial() and one.base == CHARTS[name]


@pytest.mark.parametrize("name", sorted(CHARTS))
def test_tower_maps_compose_elementwise(name):
    t = tower(CHARTS[name], 12)
    for (k, n), outer in t.transitions.items():
        for (n2, m), inner in t.transitions.items():
            if n2 != n:
                continue
            direct = t.transitions[(k, m)]
            for e in elements(t.levels[m].group):
                assert outer.group(inner.group(e)) == direct.group(e)
            for e in elements(t.levels[k].group):
                assert inner.characters(outer.characters(e)) == direct.characters(e)
            for g in t.levels[k].base.gens:
                assert inner.monoid(outer.monoid(g)) == direct.monoid(g)


@pytest.mark.parametrize("name", sorted(CHARTS))
def test_reduction_is_onto_and_characters_are_injective(name):
    t = tower(CHARTS[name], 12)
    for (n, m), tr in t.transitions.items():
        hi, lo = t.levels[m].group, t.levels[n].group
        assert {tr.group(e) for e in elements(hi)} == set(elements(lo))
        images = {tr.characters(e) for e in elements(lo)}
        assert len(images) == lo.order()


@pytest.mark.parametrize("r", range(1, 5))
@pytest.mark.parametrize("n", range(1, 13))
def test_cn_of_free_monoids_against_snf_oracle(r, n):
    g = c_n(AffineMonoid.free(r), n)
    diag = [[n * int(i == j) for j in range(r)] for i in range(r)]
    expected = [d for d in invariant_factors(diag, r) if d != 1]
    assert list(g.torsion) == expected and g.rank == 0


@pytest.mark.parametrize("name", sorted(kato_corpus()))
def test_fiber_rank_matches_cn_on_the_corpus(name):
    from logstruct.logsite import kato_to_df

    k = kato_corpus()[name]
    a = kato_to_df(k).A
    for x in k.site.elements:
        r = fiber_rank(k, x)
        for n in (2, 3):
            g = c_n(a.at(x), n)
            assert g.torsion == (n,) * r and g.rank == 0


def test_fiber_ranks_of_the_plane():
    k = plane_model()
    assert {x: fiber_rank(k, x) for x in k.site.elements} == {"X": 2, "U1": 1, "U2": 1, "U12": 0}


def test_toric_exports():
    ex = export_toric(chart_stack(A1_CONE))
    assert ex.homogeneous()
    assert ex.render().splitlines()[-1] == "rel x0*x2 = x1^2"
    lvl = export_toric(local_root_stack(NAT, 2))
    assert lvl.render() == "group rank=0 torsion=[2]\nvar x0 deg=(1)\n"
    named = export_toric(chart_stack(NAT2), names=["u", "v"])
    assert [v for v, _ in named.variables] == ["u", "v"] and named.relations == ()
    with pytest.raises(ValueError):
        export_toric(chart_stack(NAT2), names=["u"])
