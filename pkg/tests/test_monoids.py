import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from logstruct.errors import BoundExhausted, TorsionPresent, Unsupported, ValidationError
from logstruct.intlat import IntMatrix, fg_group
from logstruct.monoids import (
    AffineMonoid,
    MonoidHom,
    PresentedMonoid,
    Verdict,
    c_n,
    direct_sum,
    gp,
    group_monoid,
    hilbert_basis,
    hom_cokernel,
    irreducibles,
    is_integral,
    is_saturated,
    is_sharp,
    kummer,
    membership,
    predicates,
    present,
    pushout,
    saturate,
    sharpen,
    to_affine,
    trivial_monoid,
    units,
    verify_presentation,
    word_equal,
)
from logstruct.monoids.presented import sharpen_presented
from oracles import brute_hilbert_basis, in_cone_lp, invariant_factors, sums_up_to, value, words

N23 = AffineMonoid(1, ((2,), (3,)))
A1 = AffineMonoid(2, ((1, 0), (1, 1), (1, 2)))


def positive_gens(dim, max_gens=4, top=3):
    vec = st.tuples(*[st.integers(0, top)] * dim).filter(any)
    return st.lists(vec, min_size=1, max_size=max_gens, unique=True)


# -- affine monoids -----------------------------------------------------------------------


def test_affine_validation():
    with pytest.raises(ValidationError):
        AffineMonoid(1, ((1,), (1,)))
    assert AffineMonoid.from_vectors([(0,), (2,), (2,), (3,)], dim=1).gens == ((2,), (3,))
    assert AffineMonoid.free(2).gens == ((1, 0), (0, 1))


def test_membership_examples():
    m = membership(N23, (5,))
    assert m.member and N23.element(m.coefficients) == (5,)
    no = membership(N23, (1,))
    assert not no.member and no.certificate == "exhausted"
    neg = membership(N23, (-1,))
    assert not neg.member and neg.certificate == "separating"
    assert neg.functional is not None and neg.functional[0] * -1 < 0
    off = membership(AffineMonoid(2, ((2, 0), (0, 2))), (1, 1))
    assert not off.member and off.certificate == "lattice"


@given(positive_gens(2), st.tuples(st.integers(-2, 7), st.integers(-2, 7)))
@settings(max_examples=120, deadline=None)
def test_membership_matches_enumeration(gens, v):
    p = AffineMonoid(2, tuple(gens))
    reachable = sums_up_to(p.gens, 2, max(0, sum(v)))
    res = membership(p, v)
    assert res.member == (v in reachable)
    if res.member:
        assert p.element(res.coefficients) == v


def test_units_and_sharpening():
    p = AffineMonoid(2, ((1, 0), (-1, 0), (0, 1)))
    assert units(p) == [(1, 0)]
    s, q = sharpen(p)
    assert s.gens == ((1,),) and q.images == ((0,), (0,), (1,))
    z, _ = sharpen(group_monoid(1))
    assert z.ngens == 0
    assert is_sharp(A1) and not is_sharp(p)


def test_saturation():
    assert saturate(N23).gens == ((1,),)
    c = AffineMonoid(2, ((2, 1), (1, 2)))
    assert sorted(saturate(c).gens) == sorted(c.gens)
    assert sorted(saturate(c, lattice="ambient").gens) == [(1, 1), (1, 2), (2, 1)]
    assert is_saturated(A1) and not is_saturated(N23)
    assert sorted(irreducibles(A1)) == sorted(A1.gens)
    assert irreducibles(AffineMonoid(1, ((1,), (2,)))) == [(1,)]


@given(positive_gens(2, 3, 3))
@settings(max_examples=40, deadline=None)
def test_hilbert_basis_matches_box_oracle(gens):
    rays = [tuple(g) for g in gens]
    hb = hilbert_basis(rays, 2)
    assert hb == brute_hilbert_basis(rays, 2)


def test_hilbert_basis_three_dims():
    rays = [(1, 0, 0), (0, 1, 0), (1, 1, 2)]
    assert hilbert_basis(rays, 3) == brute_hilbert_basis(rays, 3)


@given(positive_gens(3, 4, 2))
@settings(max_examples=40, deadline=None)
def test_saturation_contains_monoid_and_is_saturated(gens):
    p = AffineMonoid(3, tuple(gens))
    s = saturate(p)
    assert is_saturated(s)
    for g in p.gens:
        assert s.contains(g)
    for h in s.gens:
        assert in_cone_lp(p.gens, h)


# -- presentations ------------------------------------------------------------------------


def test_presentation_examples():
    assert present(N23).relations == (((3, 0), (0, 2)),)
    assert present(A1).relations == (((1, 0, 1), (0, 2, 0)),)
    assert present(AffineMonoid.free(3)).relations == ()
    assert present(group_monoid(1)).relations == (((1, 1), (0, 0)),)
    assert verify_presentation(present(A1), A1)


@pytest.mark.parametrize("p", [N23, A1], ids=["N23", "A1"])
def test_word_equal_agrees_with_vector_equality(p):
    q = present(p, bound=32)
    ws = words(p.ngens, 3)
    for u, v in itertools.combinations(ws, 2):
        expected = value(p.gens, u, p.dim) == value(p.gens, v, p.dim)
        assert word_equal(q, u, v) is (Verdict.EQUAL if expected else Verdict.UNEQUAL)


def test_presented_groups_and_predicates():
    t = PresentedMonoid(2, (((2, 0), (0, 2)),))
    assert str(t.gp_group) == "Z/2 + Z"
    pr = predicates(t)
    assert pr.integral and not pr.torsion_free and not pr.saturated and pr.sharp
    with pytest.raises(TorsionPresent):
        to_affine(t)
    q = PresentedMonoid(2, (((2, 0), (0, 2)), ((1, 0), (0, 1))))
    aff, real = to_affine(q)
    assert aff.rank == 1
    assert str(gp(q).group) == "Z"


def test_non_integral_presentation():
    q = PresentedMonoid(2, (((2, 0), (0, 0)), ((1, 1), (0, 1))))
    assert is_integral(q) is False
    assert q.is_unit((1, 0))
    sharp, _ = sharpen_presented(q)
    assert sharp.ngens >= 1


def test_present_gives_up_loudly():
    with pytest.raises(BoundExhausted):
        present(AffineMonoid(1, ((7,), (11,))), bound=4)


# -- constructions --------------------------------------------------------------------


def test_pushout_and_cokernel():
    nat = AffineMonoid.free(1)
    zed = group_monoid(1)
    po = pushout(MonoidHom(nat, nat, ((1,),)), MonoidHom(nat, zed, ((1,),)))
    assert all(po.monoid.is_unit(tuple(int(i == j) for j in range(po.monoid.ngens))) for i in range(po.monoid.ngens))
    f = MonoidHom(AffineMonoid.free(2), nat, ((1,), (0,)))
    ck = hom_cokernel(f)
    assert ck.monoid.relations == (((0, 1), (0, 0)),)
    assert to_affine(ck.monoid)[0].rank == 1
    with pytest.raises(Unsupported):
        hom_cokernel(MonoidHom(nat, zed, ((1,),)))


def test_direct_sum_and_trivial():
    s = direct_sum(AffineMonoid.free(1), A1)
    assert s.dim == 3 and s.ngens == 4
    assert trivial_monoid().ngens == 0
    assert predicates(trivial_monoid()).saturated


@pytest.mark.parametrize("r", range(1, 5))
@pytest.mark.parametrize("n", [1, 2, 3, 5, 6, 12])
def test_cn_of_free_monoids(r, n):
    g = c_n(AffineMonoid.free(r), n)
    expected = invariant_factors([[n * int(i == j) for j in range(r)] for i in range(r)], r)
    assert list(g.torsion) == [d for d in expected if d != 1] and g.rank == 0


def test_cn_of_a1_cone_and_grading():
    assert str(c_n(A1, 2)) == "Z/2 + Z/2"
    k = kummer(AffineMonoid.free(1), 2)
    assert k.generator_degrees() == [(1,)]
    assert k.inclusion.images == ((2,),)
    assert k.grade((2,)) == (0,)


@given(positive_gens(2, 3, 3), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_cn_order(gens, n):
    p = AffineMonoid(2, tuple(gens))
    g = c_n(p, n)
    assert g.order() == n ** p.rank


@given(positive_gens(3, 4, 2))
@settings(max_examples=60, deadline=None)
def test_sharp_fine_saturated_implies_torsion_free(gens):
    pr = predicates(AffineMonoid(3, tuple(gens)))
    if pr.sharp and pr.fine and pr.saturated:
        assert pr.torsion_free


def test_gp_of_affine():
    g = gp(A1)
    assert g.group.rank == 2
    assert fg_group(IntMatrix([[1, -2, 1]]), 3).rank == 2
