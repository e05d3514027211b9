import pytest
from hypothesis import given, strategies as st

from bialgebra import (
    BlockFamily, DirectSumElement, collapse_left, collapse_right, counit, counit_left,
    counit_right, delta, delta_op, extended_flip, noncocommutativity_witness, phi, phi_op,
    unit_element, verify_coassociativity, verify_counit_law, verify_delta_homomorphism,
    verify_noncocommutativity,
)
from errors import DomainError, ResourceLimitError
from exact import (
    ExactScalar, SparseSquareMatrix, identity, kron, mat_add, mat_adjoint, mat_mul, mat_unit,
    pair_index, unit_indices,
)
from limits import Limits, set_limits
from serialization import block_family_to_json, direct_sum_to_json


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_phi_sends_units_to_tensor_units(n, m, data):
    i, i2 = data.draw(st.integers(1, n)), data.draw(st.integers(1, n))
    j, j2 = data.draw(st.integers(1, m)), data.draw(st.integers(1, m))
    x = mat_unit(n * m, pair_index(m, i, j), pair_index(m, i2, j2))
    assert phi(n, m, x) == kron(n, m, mat_unit(n, i, i2), mat_unit(m, j, j2))


def test_phi_checks_dimensions():
    with pytest.raises(DomainError):
        phi(2, 3, identity(5))


def _shapes(bound):
    return [(n, m) for n in range(1, bound + 1) for m in range(1, bound // n + 1)]


def test_phi_is_unital():
    for n, m in _shapes(64):
        assert phi(n, m, identity(n * m)) == kron(n, m, identity(n), identity(m))


def test_phi_preserves_adjoints_on_units():
    for n, m in _shapes(36):
        for i, j in unit_indices(n * m):
            x = mat_unit(n * m, i, j)
            image = phi(n, m, x)
            assert phi(n, m, mat_adjoint(x)) == mat_adjoint(image)
            assert phi(n, m, mat_mul(x, mat_adjoint(x))) == mat_mul(image, mat_adjoint(image))


def test_phi_is_multiplicative_on_units():
    for n, m in _shapes(8):
        units = [mat_unit(n * m, i, j) for i, j in unit_indices(n * m)]
        for x in units:
            for y in units:
                assert phi(n, m, mat_mul(x, y)) == mat_mul(phi(n, m, x), phi(n, m, y))


entries = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).map(lambda p: ExactScalar(*p))


@given(st.sampled_from(_shapes(36)), st.data())
def test_phi_is_a_star_homomorphism(shape, data):
    n, m = shape
    positions = st.tuples(st.integers(1, n * m), st.integers(1, n * m))
    x, y = (
        SparseSquareMatrix(n * m, data.draw(st.dictionaries(positions, entries, max_size=8)))
        for _ in range(2)
    )
    assert phi(n, m, mat_mul(x, y)) == mat_mul(phi(n, m, x), phi(n, m, y))
    assert phi(n, m, mat_adjoint(x)) == mat_adjoint(phi(n, m, x))
    assert phi(n, m, mat_add(x, y)) == mat_add(phi(n, m, x), phi(n, m, y))


def test_delta_op_is_the_flipped_coproduct():
    for n in range(1, 13):
        for i, j in unit_indices(n):
            x = unit_element(n, i, j)
            assert delta_op(x).equals(extended_flip(delta(x)))


def test_delta_of_e6_22_has_four_blocks():
    image = delta(unit_element(6, 2, 2))
    assert sorted(image.blocks) == [(1, 6), (2, 3), (3, 2), (6, 1)]
    assert image.block(1, 6) == kron(1, 6, identity(1), mat_unit(6, 2, 2))
    assert image.block(2, 3) == kron(2, 3, mat_unit(2, 1, 1), mat_unit(3, 2, 2))
    assert image.block(3, 2) == kron(3, 2, mat_unit(3, 1, 1), mat_unit(2, 2, 2))
    assert image.block(6, 1) == kron(6, 1, mat_unit(6, 2, 2), identity(1))
    assert image.block(2, 2).is_zero()


def test_delta_is_not_cocommutative():
    x = unit_element(6, 2, 2)
    assert not delta(x).equals(delta_op(x))
    assert delta_op(x).block(2, 3) == kron(2, 3, mat_unit(2, 2, 2), mat_unit(3, 1, 1))
    assert noncocommutativity_witness() == (2, 3)
    assert verify_noncocommutativity().passed


def test_phi_op_lands_in_the_swapped_product():
    # E^{(6)}_{2,2} = E^{(2)}_{1,1} (x) E^{(3)}_{2,2} under phi_{2,3}
    assert phi_op(2, 3, mat_unit(6, 2, 2)) == kron(3, 2, mat_unit(3, 2, 2), mat_unit(2, 1, 1))


def test_counit():
    assert counit(DirectSumElement.scalar(5)) == 5
    assert counit(unit_element(2, 1, 1)) == 0
    z = DirectSumElement.of(mat_unit(1, 1, 1), mat_unit(3, 1, 2))
    assert counit(z) == 1


def test_counit_law_up_to_16():
    report = verify_counit_law(16)
    assert report.passed
    assert report.instances == sum(n * n for n in range(1, 17))


def test_counit_law_respects_the_cap():
    set_limits(Limits(counit_max_n=4))
    with pytest.raises(ResourceLimitError):
        verify_counit_law(5)


def test_collapse_recovers_the_element():
    x = DirectSumElement.of(mat_unit(4, 2, 3), mat_unit(6, 1, 1))
    image = delta(x)
    assert collapse_left(image) == x
    assert collapse_right(image) == x
    assert counit_left(image, 4) == mat_unit(4, 2, 3)
    assert counit_right(image, 6) == mat_unit(6, 1, 1)


def test_coassociativity_up_to_12():
    assert verify_coassociativity(12).passed


def test_delta_is_a_star_homomorphism():
    assert verify_delta_homomorphism(4).passed


def test_direct_sum_arithmetic():
    a = DirectSumElement.of(mat_unit(2, 1, 2), mat_unit(3, 1, 1))
    b = DirectSumElement.of(mat_unit(2, 2, 1))
    assert (a @ b) == DirectSumElement.of(mat_unit(2, 1, 1))
    assert a.adjoint().component(2) == mat_unit(2, 2, 1)
    assert (a + b).support == (2, 3)
    assert DirectSumElement.of(mat_unit(2, 1, 1), mat_unit(2, 2, 2)).component(2) == identity(2)
    with pytest.raises(DomainError):
        DirectSumElement({3: identity(2)})


def test_block_family_validation_and_generator():
    with pytest.raises(DomainError):
        BlockFamily(2, {(3, 1): identity(3)})
    with pytest.raises(DomainError):
        BlockFamily(2, {(2, 2): identity(3)})
    ones = BlockFamily(3, {}, lambda n, m: identity(n * m))
    assert len(list(ones.keys())) == 9
    assert ones.materialize().blocks[(2, 3)] == identity(6)
    assert ones.mul(ones).equals(ones)


def test_extended_flip_is_an_involution():
    image = delta(DirectSumElement.of(mat_unit(6, 2, 5), mat_add(mat_unit(4, 1, 1), mat_unit(4, 3, 2))))
    assert extended_flip(extended_flip(image)).equals(image)


def test_delta_json_document():
    doc = block_family_to_json(delta(unit_element(6, 2, 2)))
    assert doc["window"] == 6
    assert [(b["n"], b["m"]) for b in doc["blocks"]] == [(1, 6), (2, 3), (3, 2), (6, 1)]
    assert all(b["entries"] == [[2, 2, [1, 1, 0, 1]]] for b in doc["blocks"])


def test_direct_sum_json_omits_m():
    doc = direct_sum_to_json(DirectSumElement.of(mat_unit(2, 1, 2)))
    assert doc == {"blocks": [{"n": 2, "entries": [[1, 2, [1, 1, 0, 1]]]}]}


def test_scalar_direct_sum():
    s = DirectSumElement.scalar(ExactScalar(0, 1))
    assert s.support == (1,)
    assert counit(s) == ExactScalar(0, 1)
