import pytest

from braidrep import (
    RepSpace, build_c, c_i, c_matches_chi, c_perm, flip_operator, pi_of_family, reduced_words,
    verify_braid_relations, verify_flip_conjugation, verify_involution, verify_symmetric_group,
)
from errors import DomainError, ResourceLimitError
from exact import identity, is_unitary, kron, mat_mul
from limits import Limits, set_limits
from report import FAIL, PASS
from rmatrix import InvertedSource, r_family


@pytest.mark.parametrize("dims", [(), (2, 1), (2, 2), (0, 1)])
def test_rep_space_validation(dims):
    with pytest.raises(DomainError):
        RepSpace(dims)


def test_rep_space_basis():
    space = RepSpace((1, 2, 3))
    assert space.total_dim == 6
    assert space.basis() == [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
    assert space.index_of(3, 1) == 4
    assert space.label_of(4) == (3, 1)
    with pytest.raises(DomainError):
        space.index_of(4, 1)


def test_c_on_a_single_point_is_the_identity():
    assert build_c([1]).matrix == identity(1)


def test_c_on_c2_matches_chi_2_2():
    # chi_{2,2} is the flip, so T Pi(R) fixes every basis vector
    op = build_c([2])
    for i in (1, 2):
        for j in (1, 2):
            assert op.image((2, i), (2, j)) == ((2, i), (2, j))
    assert op.perm.is_identity()


def test_c_example_on_two_summands():
    assert build_c([2, 3]).image((2, 1), (3, 2)) == ((3, 1), (2, 2))


@pytest.mark.parametrize("dims", [[1], [2], [1, 2], [2, 3], [1, 2, 3], [1, 2, 3, 4]])
def test_c_matches_chi_and_is_unitary(dims):
    assert c_matches_chi(dims)
    assert is_unitary(build_c(dims).matrix)


def test_c_i_placement():
    assert c_i([2, 3], 2, 1) == build_c([2, 3]).matrix
    assert c_i([2], 3, 2) == kron(2, 4, identity(2), build_c([2]).matrix)
    c1 = c_i([1, 2], 3, 1)
    assert c1.dim == 27
    assert c1 == kron(9, 3, build_c([1, 2]).matrix, identity(3))
    assert is_unitary(c1)
    with pytest.raises(DomainError):
        c_perm([1, 2], 3, 3)


@pytest.mark.parametrize("dims,k", [([1, 2], 3), ([1], 5), ([2, 3], 3), ([1, 2, 3], 3), ([1, 2], 4)])
def test_braid_relations(dims, k):
    report = verify_braid_relations(dims, k)
    assert report.status == PASS, report.describe()
    assert report.paths == {"matrix": True, "permutation": True}


def test_far_commutation_is_checked_from_four_strands():
    assert verify_braid_relations([1, 2], 3).instances == 1
    # two braid relations and C_1 C_3 = C_3 C_1
    assert verify_braid_relations([1, 2], 4).instances == 3


@pytest.mark.parametrize("dims", [[1], [2, 3], [1, 2, 3, 4, 5]])
def test_involution(dims):
    assert verify_involution(dims).passed


def test_involution_fails_with_inverted_chi():
    report = verify_involution([2, 3], source=InvertedSource(2, 3))
    assert report.status == FAIL
    assert report.counterexample is not None


@pytest.mark.parametrize("dims", [[1, 2, 3, 4], [2, 3], [3]])
def test_flip_conjugation(dims):
    assert verify_flip_conjugation(dims).passed


def test_pi_of_r_is_t_times_c():
    space = RepSpace((1, 2, 3))
    t = flip_operator(space)
    assert mat_mul(t, pi_of_family(space, r_family(3))) == build_c(space).matrix


def test_reduced_words():
    s3 = reduced_words(3)
    assert len(s3) == 6
    assert s3[(1, 2, 3)] == ((),)
    assert set(s3[(3, 2, 1)]) == {(1, 2, 1), (2, 1, 2)}
    s4 = reduced_words(4)
    assert len(s4) == 24
    assert len(s4[(4, 3, 2, 1)]) == 16
    assert all(len(w) == 6 for w in s4[(4, 3, 2, 1)])


def test_symmetric_group_on_four_strands():
    report = verify_symmetric_group([1, 2], 4)
    assert report.status == PASS, report.describe()


def test_braid_checks_respect_the_dimension_cap():
    set_limits(Limits(braid_max_dim=100))
    with pytest.raises(ResourceLimitError):
        verify_braid_relations([1, 2, 3], 3)
