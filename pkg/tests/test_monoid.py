import pytest
from hypothesis import given, strategies as st

from bialgebra import MATRIX_SYSTEM, phi
from errors import DomainError, ResourceLimitError
from exact import flip, identity
from limits import Limits, set_limits
from monoid import (
    UNIT, FactorizationSet, MonoidElement, check_wcs_base, check_wcs_coassoc, check_wcs_unit,
    coassoc_triples, divisor_count, factorizations, trial_division_count,
)


def test_monoid_elements():
    assert MonoidElement(2) * MonoidElement(3) == MonoidElement(6)
    assert UNIT * MonoidElement(5) == MonoidElement(5)
    assert int(MonoidElement(7)) == 7
    with pytest.raises(DomainError):
        MonoidElement(0)


def test_factorizations_of_six():
    n6 = factorizations(6)
    assert isinstance(n6, FactorizationSet)
    assert tuple(n6) == ((1, 6), (2, 3), (3, 2), (6, 1))
    assert (2, 3) in n6
    assert (4, 2) not in n6
    assert len(factorizations(1)) == 1


@given(st.integers(min_value=1, max_value=5000))
def test_divisor_count_matches_trial_division(a):
    assert divisor_count(a) == trial_division_count(a)
    assert len(factorizations(a)) == divisor_count(a)
    assert all(b * c == a for b, c in factorizations(a))


def test_factorizations_are_symmetric():
    for a in range(1, 200):
        pairs = factorizations(a)
        assert len(pairs) == divisor_count(a)
        for b, c in pairs:
            assert b * c == a
            assert (c, b) in pairs


def test_coassoc_triples():
    triples = list(coassoc_triples(4))
    assert all(a * b * c <= 4 for a, b, c in triples)
    assert (2, 2, 1) in triples and (1, 1, 4) in triples
    assert len(triples) == len(set(triples)) == 13


def test_wcs_base_passes():
    assert check_wcs_base().passed


@pytest.mark.parametrize("a", range(1, 17))
def test_wcs_unit_axioms(a):
    report = check_wcs_unit(a)
    assert report.passed
    assert report.instances == a * a


@pytest.mark.parametrize("a,b,c", [(2, 2, 2), (1, 2, 3), (3, 1, 2), (2, 3, 2), (4, 2, 1)])
def test_wcs_coassoc_examples(a, b, c):
    report = check_wcs_coassoc(a, b, c)
    assert report.passed
    assert report.counterexample is None


def test_wcs_coassoc_up_to_product_64():
    for a, b, c in coassoc_triples(64):
        report = check_wcs_coassoc(a, b, c)
        assert report.passed, report.describe()


def test_wcs_coassoc_respects_the_product_cap():
    set_limits(Limits(coassoc_max_product=8))
    with pytest.raises(ResourceLimitError):
        check_wcs_coassoc(3, 3, 1)


class FlippedSystem:
    """Matrix algebras with phi replaced by tau o phi; not coassociative."""

    def unit(self, a):
        return identity(a)

    def basis(self, a):
        return MATRIX_SYSTEM.basis(a)

    def embed(self, a, b, x):
        return flip(a, b, phi(a, b, x))


def test_wcs_coassoc_detects_a_broken_system():
    report = check_wcs_coassoc(2, 3, 2, system=FlippedSystem())
    assert not report.passed
    assert report.counterexample is not None
    assert report.counterexample.indices["unit"][0] == 12
