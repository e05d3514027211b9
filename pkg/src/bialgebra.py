"""
rmatrix-lab Bialgebra Module
The C*-bialgebra M_*(C) = M_1(C) + M_2(C) + ... with comultiplication
Delta_phi, its opposite and the counit, on finitely supported elements.

Images of Delta live in prod_{n,m} M_n (x) M_m; they are held as
`BlockFamily` objects over a finite window of block indices, with an
optional generator supplying blocks that are not stored.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Callable, Dict, Iterator, Mapping, Optional, Tuple

from errors import DomainError
from exact import (
    ZERO, ExactScalar, SparseSquareMatrix, first_difference, flip, identity,
    mat_adjoint, mat_add, mat_mul, mat_unit, phi_map, relabel, tensor_index,
    unit_indices, unpair_index, zero,
)
from limits import get_limits
from monoid import coassoc_triples, check_wcs_coassoc, factorizations
from report import Counterexample, Timer, VerificationReport, single_path
from serialization import direct_sum_to_json

logger = logging.getLogger(__name__)

BlockKey = Tuple[int, int]


# ================== Direct sums ==================

@dataclass(frozen=True, eq=False)
class DirectSumElement:
    """Finitely supported element of M_*(C): n -> component in M_n(C)."""
    components: Mapping[int, SparseSquareMatrix]

    def __post_init__(self):
        clean = {}
        for n, block in self.components.items():
            if not isinstance(n, int) or n < 1:
                raise DomainError(f"direct-sum keys are positive integers, got {n!r}")
            if block.dim != n:
                raise DomainError(f"component {n} has dimension {block.dim}")
            if not block.is_zero():
                clean[n] = block
        object.__setattr__(self, "components", MappingProxyType(clean))

    @classmethod
    def of(cls, *blocks: SparseSquareMatrix) -> "DirectSumElement":
        out: Dict[int, SparseSquareMatrix] = {}
        for block in blocks:
            out[block.dim] = mat_add(out[block.dim], block) if block.dim in out else block
        return cls(out)

    @classmethod
    def scalar(cls, value) -> "DirectSumElement":
        return cls({1: SparseSquareMatrix(1, {(1, 1): ExactScalar.of(value)})})

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self.components))

    def component(self, n: int) -> SparseSquareMatrix:
        return self.components.get(n) or zero(n)

    def __add__(self, other: "DirectSumElement") -> "DirectSumElement":
        keys = set(self.components) | set(other.components)
        return DirectSumElement({n: mat_add(self.component(n), other.component(n)) for n in keys})

    def __matmul__(self, other: "DirectSumElement") -> "DirectSumElement":
        keys = set(self.components) & set(other.components)
        return DirectSumElement({n: mat_mul(self.components[n], other.components[n]) for n in keys})

    def adjoint(self) -> "DirectSumElement":
        return DirectSumElement({n: mat_adjoint(x) for n, x in self.components.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectSumElement):
            return NotImplemented
        return dict(self.components) == dict(other.components)

    def __hash__(self) -> int:
        return hash(frozenset(self.components.items()))


def unit_element(n: int, i: int, j: int) -> DirectSumElement:
    """E^{(n)}_{i,j} as an element of M_*(C)."""
    return DirectSumElement({n: mat_unit(n, i, j)})


# ================== Block families ==================

@dataclass(frozen=True, eq=False)
class BlockFamily:
    """An element of prod_{n,m <= window} M_n (x) M_m.

    Stored blocks take precedence; other blocks come from `generator` when one
    is given and are zero otherwise.
    """
    window: int
    blocks: Mapping[BlockKey, SparseSquareMatrix] = field(default_factory=dict)
    generator: Optional[Callable[[int, int], SparseSquareMatrix]] = None

    def __post_init__(self):
        if self.window < 1:
            raise DomainError(f"window must be positive, got {self.window}")
        for (n, m), block in self.blocks.items():
            if not (1 <= n <= self.window and 1 <= m <= self.window):
                raise DomainError(f"block ({n},{m}) lies outside the window {self.window}")
            if block.dim != n * m:
                raise DomainError(f"block ({n},{m}) has dimension {block.dim}, expected {n * m}")
        object.__setattr__(self, "blocks", MappingProxyType(dict(self.blocks)))

    def block(self, n: int, m: int) -> SparseSquareMatrix:
        stored = self.blocks.get((n, m))
        if stored is not None:
            return stored
        if self.generator is not None:
            return self.generator(n, m)
        return zero(n * m)

    def keys(self) -> Iterator[BlockKey]:
        """Block indices that may be nonzero, in lexicographic order."""
        if self.generator is None:
            return iter(sorted(self.blocks))
        return ((n, m) for n in range(1, self.window + 1) for m in range(1, self.window + 1))

    def materialize(self) -> "BlockFamily":
        """Evaluate every block of the window and store it."""
        return BlockFamily(self.window, {key: self.block(*key) for key in self.keys()})

    def mul(self, other: "BlockFamily") -> "BlockFamily":
        window = max(self.window, other.window)
        keys = sorted(set(self.keys()) & set(other.keys()))
        return BlockFamily(window, {(n, m): mat_mul(self.block(n, m), other.block(n, m)) for n, m in keys})

    def adjoint(self) -> "BlockFamily":
        generator = None
        if self.generator is not None:
            source = self.generator
            generator = lambda n, m: mat_adjoint(source(n, m))
        return BlockFamily(self.window, {k: mat_adjoint(b) for k, b in self.blocks.items()}, generator)

    def first_difference(self, other: "BlockFamily") -> Optional[Tuple[BlockKey, Tuple]]:
        """First block (lexicographic) where the families differ, with the entry difference."""
        for key in sorted(set(self.keys()) | set(other.keys())):
            left, right = self.block(*key), other.block(*key)
            if left != right:
                return key, first_difference(left, right)
        return None

    def equals(self, other: "BlockFamily") -> bool:
        return self.first_difference(other) is None


def extended_flip(family: BlockFamily) -> BlockFamily:
    """tau-tilde: block (b, c) of the result is the flip of block (c, b)."""
    generator = None
    if family.generator is not None:
        source = family.generator
        generator = lambda b, c: flip(c, b, source(c, b))
    blocks = {(b, c): flip(c, b, block) for (c, b), block in family.blocks.items()}
    return BlockFamily(family.window, blocks, generator)


# ================== phi, Delta, epsilon ==================

@lru_cache(maxsize=4096)
def _phi_relabelling(n: int, m: int) -> Dict[int, int]:
    """Row/column relabelling induced by phi_{n,m}: N -> linear index of phi_{n,m}^{-1}(N) in F_n x F_m."""
    inverse = phi_map(n, m).inverse()
    return {N: tensor_index((n, m), inverse(N)) for N in range(1, n * m + 1)}


def phi(n: int, m: int, x: SparseSquareMatrix) -> SparseSquareMatrix:
    """phi_{n,m}: M_{nm} -> M_n (x) M_m, E_{m(i-1)+j, m(i'-1)+j'} -> E_{i,i'} (x) E_{j,j'}."""
    if x.dim != n * m:
        raise DomainError(f"phi({n},{m}) expects dimension {n * m}, got {x.dim}")
    return relabel(x, n * m, _phi_relabelling(n, m).__getitem__)


def phi_op(a: int, b: int, x: SparseSquareMatrix) -> SparseSquareMatrix:
    """phi^op_{a,b} = tau_{a,b} o phi_{a,b}: M_{ab} -> M_b (x) M_a."""
    return flip(a, b, phi(a, b, x))


def _window(x: DirectSumElement) -> int:
    return max(x.support, default=1)


def delta(x: DirectSumElement) -> BlockFamily:
    """Delta_phi(x) = sum over n and ml = n of phi_{m,l}(x_n)."""
    blocks: Dict[BlockKey, SparseSquareMatrix] = {}
    for n, component in sorted(x.components.items()):
        for m, l in factorizations(n):
            image = phi(m, l, component)
            blocks[(m, l)] = mat_add(blocks[(m, l)], image) if (m, l) in blocks else image
    return BlockFamily(_window(x), blocks)


def delta_op(x: DirectSumElement) -> BlockFamily:
    """Delta_phi^op(x): block (b, c) accumulates phi^op_{c,b}(x_n) for cb = n."""
    blocks: Dict[BlockKey, SparseSquareMatrix] = {}
    for n, component in sorted(x.components.items()):
        for c, b in factorizations(n):
            image = phi_op(c, b, component)
            blocks[(b, c)] = mat_add(blocks[(b, c)], image) if (b, c) in blocks else image
    return BlockFamily(_window(x), blocks)


def counit(x: DirectSumElement) -> ExactScalar:
    """epsilon: the M_1 component, 0 on M_n for n >= 2."""
    component = x.components.get(1)
    return component[(1, 1)] if component is not None else ZERO


def counit_left(family: BlockFamily, c: int) -> SparseSquareMatrix:
    """(epsilon (x) id) on block (1, c), as an element of M_c."""
    return relabel(family.block(1, c), c, lambda index: unpair_index(c, index)[1])


def counit_right(family: BlockFamily, b: int) -> SparseSquareMatrix:
    """(id (x) epsilon) on block (b, 1), as an element of M_b."""
    return relabel(family.block(b, 1), b, lambda index: unpair_index(1, index)[0])


def collapse_left(family: BlockFamily) -> DirectSumElement:
    """(epsilon (x) id)(family): the (1, c) blocks reassembled into M_*(C)."""
    return DirectSumElement({c: counit_left(family, c) for b, c in family.keys() if b == 1})


def collapse_right(family: BlockFamily) -> DirectSumElement:
    return DirectSumElement({b: counit_right(family, b) for b, c in family.keys() if c == 1})


class MatrixSystem:
    """The matrix instance {(M_a(C), phi_{a,b})} of a weakly coassociative system."""

    def unit(self, a: int) -> SparseSquareMatrix:
        return identity(a)

    def basis(self, a: int):
        for i, j in unit_indices(a):
            yield (i, j), mat_unit(a, i, j)

    def embed(self, a: int, b: int, x: SparseSquareMatrix) -> SparseSquareMatrix:
        return phi(a, b, x)

    def __repr__(self) -> str:
        return "MatrixSystem()"


MATRIX_SYSTEM = MatrixSystem()


# ================== Verification ==================

def verify_counit_law(n_max: int) -> VerificationReport:
    """(epsilon (x) id) o Delta = id = (id (x) epsilon) o Delta on every unit of M_n, n <= n_max."""
    if n_max < 1:
        raise DomainError(f"n_max must be positive, got {n_max}")
    get_limits().check_counit(n_max)
    timer = Timer()

    failure = None
    count = 0
    for n in range(1, n_max + 1):
        for i, j in unit_indices(n):
            count += 1
            x = unit_element(n, i, j)
            image = delta(x)
            for side, got in (("left", collapse_left(image)), ("right", collapse_right(image))):
                if got != x:
                    failure = Counterexample(
                        description=f"{side} counit law fails",
                        indices={"unit": [n, i, j]},
                        left=direct_sum_to_json(got),
                        right=direct_sum_to_json(x),
                    )
                    break
            if failure:
                break
        if failure:
            break
    return single_path("counit_law", {"n_max": n_max}, timer, failure, count)


def verify_coassociativity(n_max: int) -> VerificationReport:
    """Coassociativity of Delta, checked blockwise: the WCS axiom for every abc <= n_max."""
    if n_max < 1:
        raise DomainError(f"n_max must be positive, got {n_max}")
    get_limits().check_coassoc(n_max)
    timer = Timer()

    failure = None
    count = 0
    for a, b, c in coassoc_triples(n_max):
        report = check_wcs_coassoc(a, b, c, MATRIX_SYSTEM)
        count += report.instances
        if not report.passed:
            failure = report.counterexample
            failure.indices = {"a": a, "b": b, "c": c, **failure.indices}
            break
    return single_path("coassociativity", {"n_max": n_max}, timer, failure, count)


def verify_delta_homomorphism(n_max: int) -> VerificationReport:
    """Delta(xy) = Delta(x)Delta(y) and Delta(x*) = Delta(x)* blockwise for units of M_n, n <= n_max."""
    if n_max < 1:
        raise DomainError(f"n_max must be positive, got {n_max}")
    timer = Timer()

    failure = None
    count = 0
    for n in range(1, n_max + 1):
        units = [unit_element(n, i, j) for i, j in unit_indices(n)]
        images = [delta(x) for x in units]
        for x, dx in zip(units, images):
            count += 1
            diff = delta(x.adjoint()).first_difference(dx.adjoint())
            if diff:
                failure = Counterexample("Delta does not preserve the adjoint",
                                         {"n": n, "unit": _unit_position(x), "block": list(diff[0])})
                break
            for y, dy in zip(units, images):
                count += 1
                diff = delta(x @ y).first_difference(dx.mul(dy))
                if diff:
                    failure = Counterexample("Delta is not multiplicative",
                                             {"n": n, "x": _unit_position(x), "y": _unit_position(y),
                                              "block": list(diff[0])})
                    break
            if failure:
                break
        if failure:
            break
    return single_path("delta_homomorphism", {"n_max": n_max}, timer, failure, count)


def _unit_position(x: DirectSumElement):
    (n, block), = x.components.items()
    (i, j), = block.entries
    return [n, i, j]


def noncocommutativity_witness() -> Optional[BlockKey]:
    """First block where Delta(E^{(6)}_{2,2}) and Delta^op(E^{(6)}_{2,2}) differ."""
    x = unit_element(6, 2, 2)
    diff = delta(x).first_difference(delta_op(x))
    return diff[0] if diff else None


def verify_noncocommutativity() -> VerificationReport:
    """Delta != Delta^op, witnessed by E^{(6)}_{2,2}."""
    timer = Timer()
    failure = None
    if noncocommutativity_witness() is None:
        failure = Counterexample("Delta(E^{(6)}_{2,2}) equals Delta^op(E^{(6)}_{2,2})", {"unit": [6, 2, 2]})
    return single_path("noncocommutativity", {}, timer, failure, 1)
