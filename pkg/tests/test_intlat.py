import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logstruct.errors import NotSurjective, TargetNotFree
from logstruct.intlat import (
    FgAbelianGroup,
    GroupHom,
    IntMatrix,
    cokernel,
    diagonal,
    fg_group,
    hnf,
    in_lattice,
    inverse_unimodular,
    is_unimodular,
    kernel_basis,
    lattice_basis,
    saturation_basis,
    snf,
    solve,
    split_onto_free,
)
from oracles import det, invariant_factors


def matrices(max_rows=5, max_cols=5, bound=20):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r
            ).map(lambda rows: IntMatrix(rows, ncols=c))
        )
    )


def test_matrix_basics():
    m = IntMatrix([[1, 2], [3, 4]])
    assert m.T == IntMatrix([[1, 3], [2, 4]])
    assert (m @ IntMatrix.identity(2)) == m
    assert m @ (1, 1) == (3, 7)
    assert m.det() == -2
    assert IntMatrix.from_columns([(1, 3), (2, 4)]) == m
    assert m.render() == "[[1,2],[3,4]]"


def test_zero_sized_matrices():
    z = IntMatrix.zeros(0, 3)
    assert z.shape == (0, 3)
    assert kernel_basis(IntMatrix.zeros(1, 2)) == [(1, 0), (0, 1)]


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_hnf_shape_and_transform(m):
    h, u = hnf(m)
    assert u @ m == h
    assert is_unimodular(u)
    last_pivot = -1
    zero_seen = False
    for i, row in enumerate(h.rows()):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            zero_seen = True
            continue
        assert not zero_seen, "zero rows come last"
        p = nz[0]
        assert p > last_pivot and row[p] > 0
        for k in range(i):
            assert 0 <= h[k, p] < row[p]
        last_pivot = p


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_snf_against_determinantal_divisors(m):
    d, u, v = snf(m)
    assert u @ m @ v == d
    assert is_unimodular(u) and is_unimodular(v)
    diag = diagonal(d)
    for i in range(d.nrows):
        for j in range(d.ncols):
            if i != j:
                assert d[i, j] == 0
    nonzero = [x for x in diag if x]
    assert all(x > 0 for x in nonzero)
    assert diag == nonzero + [0] * (len(diag) - len(nonzero))
    assert all(nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1))
    assert nonzero == invariant_factors([list(r) for r in m.rows()], m.ncols)


def test_snf_known_example():
    d, _, _ = snf(IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))
    assert diagonal(d) == [2, 6, 12]


@given(matrices(4, 4, 9), st.lists(st.integers(-9, 9), min_size=4, max_size=4))
@settings(max_examples=150, deadline=None)
def test_solve_is_sound_and_complete(m, x0):
    x0 = tuple(x0[: m.ncols])
    b = m @ x0
    res = solve(m, b)
    assert res is not None
    x, ker = res
    assert m @ x == b
    for k in ker:
        assert not any(m @ k)
    # x0 - x lies in the kernel lattice
    diff = tuple(a - c for a, c in zip(x0, x))
    assert in_lattice(ker, diff) is not None


def test_solve_reports_no_integer_solution():
    assert solve(IntMatrix([[2]]), (1,)) is None
    assert solve(IntMatrix([[2, 4]]), (3,)) is None
    assert solve(IntMatrix([[1, 1], [1, 1]]), (1, 2)) is None


def test_lattice_helpers():
    assert lattice_basis([(2, 1), (1, 2)], 2) == [(1, 2), (0, 3)]
    assert saturation_basis([(2, 2)], 2) == [(1, 1)]
    assert in_lattice([(1, 2), (0, 3)], (2, 1)) is not None
    assert in_lattice([(1, 2), (0, 3)], (1, 1)) is None
    u = IntMatrix([[2, 1], [1, 1]])
    assert inverse_unimodular(u) @ u == IntMatrix.identity(2)


def test_fg_group_canonical_forms():
    assert str(fg_group([[2, 0], [0, 3]], 2)) == "Z/6"
    g = fg_group([[2, -2]], 2)
    assert (g.rank, g.torsion) == (1, (2,))
    assert str(g) == "Z/2 + Z"
    assert fg_group([], 3) == FgAbelianGroup.free(3)
    assert FgAbelianGroup.cyclic(1).is_trivial()
    assert g.reduce((3, 5)) == (1, 5)
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (4, 6))


@given(matrices(4, 3, 6))
@settings(max_examples=100, deadline=None)
def test_fg_group_order_matches_determinant(m):
    g = fg_group(m, m.ncols)
    if m.nrows >= m.ncols:
        # |Z^n / rows| is the gcd of maximal minors when finite
        full = invariant_factors([list(r) for r in m.rows()], m.ncols)
        if len(full) == m.ncols:
            prod = 1
            for x in full:
                prod *= x
            assert g.order() == prod
    # presentation witness: each relation row maps to zero
    for row in m.rows():
        assert g.is_zero(g.project(row))


def test_group_homs_and_cokernels():
    z2 = FgAbelianGroup.free(2)
    f = GroupHom(z2, z2, IntMatrix([[2, 0], [0, 3]]))
    q, proj = cokernel(f)
    assert str(q) == "Z/6"
    assert proj.is_surjective()
    assert proj.compose(f).is_zero()
    assert f.is_injective() and not f.is_surjective()
    z4 = FgAbelianGroup.cyclic(4)
    z2c = FgAbelianGroup.cyclic(2)
    red = GroupHom(z4, z2c, z2c.to_canonical @ z4.from_canonical)
    assert red.is_well_defined() and red.is_surjective() and not red.is_injective()
    bad = GroupHom(z2c, FgAbelianGroup.free(1), IntMatrix([[1]]))
    assert not bad.is_well_defined()


def test_split_onto_free():
    p = GroupHom(FgAbelianGroup.free(3), FgAbelianGroup.free(2), IntMatrix([[1, 2, 0], [0, 3, 1]]))
    s = split_onto_free(p)
    assert p.compose(s).matrix == IntMatrix.identity(2)
    with pytest.raises(NotSurjective):
        split_onto_free(GroupHom(FgAbelianGroup.free(1), FgAbelianGroup.free(1), IntMatrix([[2]])))
    with pytest.raises(TargetNotFree):
        split_onto_free(GroupHom(FgAbelianGroup.free(1), FgAbelianGroup.cyclic(2), IntMatrix([[1]])))


def test_oracle_determinant():
    assert det([[1, 2], [3, 4]]) == -2
    assert det([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24
