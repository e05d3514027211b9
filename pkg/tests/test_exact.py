from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from errors import DomainError, ResourceLimitError
from exact import (
    ONE, ZERO, ExactScalar, GridPermutation, SparseSquareMatrix, compose_all, embed_legs,
    first_difference, flip, flip_map, grid, grid_identity, identity, is_unitary, kron,
    mat_add, mat_adjoint, mat_equal, mat_mul, mat_scale, mat_sub, mat_unit, matrix_to_perm,
    pair_index, perm_to_matrix, phi_map, product_map, tensor_index, tensor_unindex,
    unit_indices, unpair_index, zero,
)
from limits import Limits, set_limits

fractions = st.fractions(max_denominator=60).filter(lambda f: abs(f.numerator) < 10 ** 6)
scalars = st.builds(ExactScalar, fractions, fractions)


@st.composite
def matrices(draw, n, max_entries=6):
    positions = st.tuples(st.integers(1, n), st.integers(1, n))
    return SparseSquareMatrix(n, draw(st.dictionaries(positions, scalars, max_size=max_entries)))


@st.composite
def grid_permutations(draw, shape=(2, 3)):
    points = list(grid(shape))
    images = draw(st.permutations(points))
    return GridPermutation(shape, dict(zip(points, images)))


# ================== Scalars ==================

@given(scalars, scalars, scalars)
def test_scalar_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(scalars, scalars)
def test_conjugation_is_an_involutive_antiautomorphism(a, b):
    assert a.conjugate().conjugate() == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()


@given(scalars)
def test_division_inverts_multiplication(a):
    if a.is_zero():
        with pytest.raises(DomainError):
            ONE / a
    else:
        assert (ONE / a) * a == ONE


def test_scalar_rejects_floats():
    with pytest.raises(DomainError):
        ExactScalar(0.5)
    with pytest.raises(DomainError):
        ExactScalar.of(1.0)


def test_scalar_equality_with_rationals():
    assert ExactScalar(Fraction(3, 4)) == Fraction(3, 4)
    assert ExactScalar(2) == 2
    assert ExactScalar(2, 1) != 2
    assert ExactScalar(Fraction(-1, 3), 2).to_json() == [-1, 3, 2, 1]


# ================== Indices ==================

@pytest.mark.parametrize("m,i,k,expected", [(3, 1, 1, 1), (3, 1, 3, 3), (3, 2, 1, 4), (4, 3, 2, 10)])
def test_pair_index(m, i, k, expected):
    assert pair_index(m, i, k) == expected
    assert unpair_index(m, expected) == (i, k)


def test_tensor_index_is_lexicographic():
    shape = (2, 3, 4)
    assert [tensor_index(shape, idx) for idx in grid(shape)] == list(range(1, 25))
    assert tensor_index(shape, (1, 2, 1)) == 5
    assert tensor_unindex(shape, 24) == (2, 3, 4)


def test_unit_indices_put_diagonal_first():
    assert list(unit_indices(3)) == [
        (1, 1), (2, 2), (3, 3), (1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2),
    ]


# ================== Matrices ==================

def test_zero_entries_are_pruned():
    x = SparseSquareMatrix(3, {(1, 1): 0, (2, 3): ExactScalar(1, -1)})
    assert x.nnz == 1
    assert x[(1, 1)] == ZERO
    assert x[(2, 3)] == ExactScalar(1, -1)


@pytest.mark.parametrize("entries", [{(0, 1): 1}, {(1, 4): 1}])
def test_out_of_range_entries_raise(entries):
    with pytest.raises(DomainError):
        SparseSquareMatrix(3, entries)


def test_matrix_unit_products():
    assert mat_mul(mat_unit(3, 1, 2), mat_unit(3, 2, 3)) == mat_unit(3, 1, 3)
    assert mat_mul(mat_unit(3, 1, 2), mat_unit(3, 1, 2)).is_zero()
    with pytest.raises(DomainError):
        mat_mul(mat_unit(2, 1, 1), mat_unit(3, 1, 1))


def test_linear_operations():
    a = SparseSquareMatrix(2, {(1, 1): 2, (1, 2): ExactScalar(0, 1)})
    assert mat_sub(a, a) == zero(2)
    assert mat_add(a, a) == mat_scale(2, a)
    assert mat_adjoint(a)[(2, 1)] == ExactScalar(0, -1)
    assert first_difference(a, a) is None
    assert first_difference(a, zero(2)) == ((1, 1), ExactScalar(2), ZERO)
    assert mat_equal(mat_adjoint(mat_adjoint(a)), a)
    with pytest.raises(DomainError):
        mat_equal(a, zero(3))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(matrices(n), matrices(n), matrices(n))))
def test_matrix_ring_and_involution_axioms(abc):
    a, b, c = abc
    one = identity(a.dim)
    assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))
    assert mat_mul(a, mat_add(b, c)) == mat_add(mat_mul(a, b), mat_mul(a, c))
    assert mat_mul(mat_add(a, b), c) == mat_add(mat_mul(a, c), mat_mul(b, c))
    assert mat_mul(one, a) == a == mat_mul(a, one)
    assert mat_adjoint(mat_adjoint(a)) == a
    assert mat_adjoint(mat_add(a, b)) == mat_add(mat_adjoint(a), mat_adjoint(b))
    assert mat_adjoint(mat_mul(a, b)) == mat_mul(mat_adjoint(b), mat_adjoint(a))


def test_identity_respects_the_cell_limit():
    set_limits(Limits(max_cells=100))
    identity(10)
    with pytest.raises(ResourceLimitError):
        identity(11)


def test_kron_uses_the_pairing():
    got = kron(2, 3, mat_unit(2, 1, 2), mat_unit(3, 2, 3))
    assert got == mat_unit(6, 2, 6)
    with pytest.raises(DomainError):
        kron(2, 2, mat_unit(2, 1, 1), mat_unit(3, 1, 1))


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_flip_is_an_involution(n, m, data):
    i = data.draw(st.integers(1, n * m))
    j = data.draw(st.integers(1, n * m))
    x = mat_unit(n * m, i, j)
    assert flip(m, n, flip(n, m, x)) == x


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_flip_is_a_star_isomorphism(n, m, data):
    x = data.draw(matrices(n * m, 10))
    y = data.draw(matrices(n * m, 10))
    assert flip(n, m, mat_mul(x, y)) == mat_mul(flip(n, m, x), flip(n, m, y))
    assert flip(n, m, mat_adjoint(x)) == mat_adjoint(flip(n, m, x))
    assert flip(n, m, identity(n * m)) == identity(n * m)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.data())
def test_kron_is_associative(n, m, l, data):
    a, b, c = data.draw(matrices(n)), data.draw(matrices(m)), data.draw(matrices(l))
    assert kron(n * m, l, kron(n, m, a, b), c) == kron(n, m * l, a, kron(m, l, b, c))


def test_flip_swaps_tensor_factors():
    a, b = mat_unit(2, 1, 2), mat_unit(3, 3, 1)
    assert flip(2, 3, kron(2, 3, a, b)) == kron(3, 2, b, a)


@pytest.mark.parametrize("dims", [(2, 3, 2), (1, 2, 3), (3, 1, 2)])
def test_embed_legs_agree_with_kron(dims):
    n, m, l = dims
    x12 = mat_add(mat_unit(n * m, 1, n * m), mat_unit(n * m, n * m, 1))
    x23 = mat_add(mat_unit(m * l, 1, m * l), mat_unit(m * l, m * l, 1))
    assert embed_legs(dims, "12", x12) == kron(n * m, l, x12, identity(l))
    assert embed_legs(dims, "23", x23) == kron(n, m * l, identity(n), x23)


def test_embed_legs_13_acts_on_outer_factors():
    a, b = mat_unit(2, 1, 2), mat_unit(2, 2, 1)
    # (E12 (x) I_3 (x) E21) on M_2 (x) M_3 (x) M_2
    expected = kron(6, 2, kron(2, 3, a, identity(3)), b)
    assert embed_legs((2, 3, 2), "13", kron(2, 2, a, b)) == expected


def test_embed_legs_rejects_bad_input():
    with pytest.raises(DomainError):
        embed_legs((2, 2, 2), "21", identity(4))
    with pytest.raises(DomainError):
        embed_legs((2, 2, 2), "12", identity(3))


# ================== Grid permutations ==================

def test_grid_permutation_must_be_a_bijection():
    with pytest.raises(DomainError):
        GridPermutation((2,), {(1,): (1,), (2,): (1,)})
    with pytest.raises(DomainError):
        GridPermutation((2,), {(1,): (1,)})
    with pytest.raises(DomainError):
        GridPermutation((2,), {(1,): (1,), (2,): (3,)})


def test_flip_and_phi_maps():
    assert flip_map(2, 3).compose(flip_map(3, 2)).is_identity()
    assert phi_map(2, 3)(2, 1) == (4,)
    assert phi_map(2, 3).inverse()(4) == (2, 1)
    with pytest.raises(DomainError):
        flip_map(2, 3).compose(flip_map(2, 3))


def test_product_map_concatenates_grids():
    p = product_map(flip_map(2, 3), grid_identity((2,)))
    assert p.shape == (2, 3, 2)
    assert p.codomain == (3, 2, 2)
    assert p(1, 3, 2) == (3, 1, 2)


@given(grid_permutations(), grid_permutations())
def test_permutation_matrices_are_multiplicative(p, q):
    assert perm_to_matrix(p.compose(q)) == mat_mul(perm_to_matrix(p), perm_to_matrix(q))
    assert is_unitary(perm_to_matrix(p))


@given(grid_permutations())
def test_inverse_cycles_and_order(p):
    assert p.compose(p.inverse()).is_identity()
    assert sum(len(c) for c in p.cycles()) == 6
    assert compose_all(*([p] * p.order())).is_identity()
    assert matrix_to_perm(perm_to_matrix(p), p.shape) == p


def test_matrix_to_perm_rejects_non_permutations():
    assert matrix_to_perm(mat_scale(2, identity(4)), (2, 2)) is None
    assert matrix_to_perm(mat_unit(4, 1, 1), (2, 2)) is None
