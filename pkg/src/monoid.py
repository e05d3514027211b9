"""
rmatrix-lab Monoid Module
Factorizations in the abelian monoid (N, x) and the weakly coassociative
system checks: coassociativity across factorizations and the unit axioms.

The checks are written against a `WCSSystem` (a family of algebras A_a with
embeddings phi_{a,b}: A_{ab} -> A_a (x) A_b). The matrix system
M_a = M_a(C) from `bialgebra` is the instance used unless another is passed.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Optional, Protocol, Tuple

import sympy

from errors import DomainError
from exact import (
    ZERO, ExactScalar, SparseSquareMatrix, first_difference, kron, mat_unit, pair_index, unpair_index,
)
from limits import get_limits
from report import Counterexample, Timer, VerificationReport, single_path
from serialization import matrix_to_json

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonoidElement:
    """An element of (N, x); the unit is 1."""
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or self.value < 1:
            raise DomainError(f"monoid elements are positive integers, got {self.value!r}")

    def __mul__(self, other: "MonoidElement") -> "MonoidElement":
        return MonoidElement(self.value * other.value)

    def __int__(self) -> int:
        return self.value


UNIT = MonoidElement(1)


@dataclass(frozen=True)
class FactorizationSet:
    """N_a = {(b, c) : bc = a}, sorted by b."""
    owner: MonoidElement
    pairs: Tuple[Tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs


def _value(a) -> int:
    return a.value if isinstance(a, MonoidElement) else int(a)


def _element(a) -> MonoidElement:
    return a if isinstance(a, MonoidElement) else MonoidElement(a)


def factorizations(a) -> FactorizationSet:
    """Every divisor pair (b, c) with b * c = a, b ascending."""
    owner = _element(a)
    n = owner.value
    return FactorizationSet(owner, tuple((b, n // b) for b in sympy.divisors(n)))


def divisor_count(a) -> int:
    return int(sympy.divisor_count(_value(a)))


def trial_division_count(a: int) -> int:
    """Reference divisor count by trial division."""
    return sum(1 for b in range(1, a + 1) if a % b == 0)


# ================== Weakly coassociative systems ==================

class WCSSystem(Protocol):
    """A family {(A_a, phi_{a,b})} over (N, x) with matrix-algebra fibres."""

    def unit(self, a: int) -> SparseSquareMatrix: ...

    def basis(self, a: int) -> Iterable[Tuple[Tuple[int, int], SparseSquareMatrix]]: ...

    def embed(self, a: int, b: int, x: SparseSquareMatrix) -> SparseSquareMatrix: ...


def _default_system() -> WCSSystem:
    from bialgebra import MATRIX_SYSTEM
    return MATRIX_SYSTEM


@lru_cache(maxsize=1 << 16)
def _embedded_unit(system: WCSSystem, a: int, b: int, i: int, j: int) -> SparseSquareMatrix:
    return system.embed(a, b, mat_unit(a * b, i, j))


def _accumulate(out: Dict, key, value: ExactScalar, weight: ExactScalar):
    out[key] = out.get(key, ZERO) + (value if weight == 1 else value * weight)


def embed_second_leg(system: WCSSystem, a: int, b: int, c: int, x: SparseSquareMatrix) -> SparseSquareMatrix:
    """(id_a (x) phi_{b,c}) on an element of A_a (x) A_{bc}."""
    bc = b * c
    out: Dict = {}
    for (r, col), value in x.entries.items():
        i, k = unpair_index(bc, r)
        j, l = unpair_index(bc, col)
        for (p, q), w in _embedded_unit(system, b, c, k, l).entries.items():
            _accumulate(out, (pair_index(bc, i, p), pair_index(bc, j, q)), value, w)
    return SparseSquareMatrix._trusted(a * bc, {key: v for key, v in out.items() if v})


def embed_first_leg(system: WCSSystem, a: int, b: int, c: int, x: SparseSquareMatrix) -> SparseSquareMatrix:
    """(phi_{a,b} (x) id_c) on an element of A_{ab} (x) A_c."""
    out: Dict = {}
    for (r, col), value in x.entries.items():
        t, k = unpair_index(c, r)
        s, l = unpair_index(c, col)
        for (p, q), w in _embedded_unit(system, a, b, t, s).entries.items():
            _accumulate(out, (pair_index(c, p, k), pair_index(c, q, l)), value, w)
    return SparseSquareMatrix._trusted(a * b * c, {key: v for key, v in out.items() if v})


def check_wcs_coassoc(a, b, c, system: Optional[WCSSystem] = None) -> VerificationReport:
    """(id_a (x) phi_{b,c}) o phi_{a,bc} == (phi_{a,b} (x) id_c) o phi_{ab,c} on every unit of A_{abc}."""
    product = _element(a) * _element(b) * _element(c)
    a, b, c = _value(a), _value(b), _value(c)
    get_limits().check_coassoc(product.value)
    system = system or _default_system()
    params = {"a": a, "b": b, "c": c}
    timer = Timer()

    failure = None
    count = 0
    for (i, j), x in system.basis(a * b * c):
        count += 1
        left = embed_second_leg(system, a, b, c, system.embed(a, b * c, x))
        right = embed_first_leg(system, a, b, c, system.embed(a * b, c, x))
        if left != right:
            failure = Counterexample(
                description="coassociativity across factorizations fails on a matrix unit",
                indices={"unit": [a * b * c, i, j], "first_difference": list(first_difference(left, right)[0])},
                left=matrix_to_json(left),
                right=matrix_to_json(right),
            )
            break
    return single_path("wcs_coassoc", params, timer, failure, count)


def check_wcs_unit(a, system: Optional[WCSSystem] = None) -> VerificationReport:
    """phi_{1,a}(x) == I_1 (x) x and phi_{a,1}(x) == x (x) I_1 on every unit of A_a."""
    a = _value(a)
    MonoidElement(a)
    get_limits().check_dim(a, "wcs unit")
    system = system or _default_system()
    timer = Timer()
    one = system.unit(1)

    failure = None
    count = 0
    for (i, j), x in system.basis(a):
        count += 1
        for side, got, want in (
            ("left", system.embed(1, a, x), kron(1, a, one, x)),
            ("right", system.embed(a, 1, x), kron(a, 1, x, one)),
        ):
            if got != want:
                failure = Counterexample(
                    description=f"{side} unit axiom fails",
                    indices={"unit": [a, i, j]},
                    left=matrix_to_json(got),
                    right=matrix_to_json(want),
                )
                break
        if failure:
            break
    return single_path("wcs_unit", {"a": a}, timer, failure, count)


def check_wcs_base(system: Optional[WCSSystem] = None) -> VerificationReport:
    """(A_e, phi_{e,e}, eps_e) is a counital bialgebra; for A_e = C this is phi_{1,1} = id."""
    system = system or _default_system()
    timer = Timer()
    e = UNIT.value
    one = system.unit(e)
    got = system.embed(e, e, one)
    failure = None
    if got != one:
        failure = Counterexample("phi_{1,1} is not the identity of C", {"unit": [1, 1, 1]},
                                 matrix_to_json(got), matrix_to_json(one))
    return single_path("wcs_base", {}, timer, failure, 1)


def coassoc_triples(n_max: int):
    """All (a, b, c) with a * b * c <= n_max, lexicographic."""
    for a in range(1, n_max + 1):
        for b in range(1, n_max // a + 1):
            for c in range(1, n_max // (a * b) + 1):
                yield a, b, c
