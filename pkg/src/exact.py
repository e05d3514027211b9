"""
rmatrix-lab Exact Linear Algebra Module
Sparse square matrices over the Gaussian rationals, grid permutations and the
tensor-product plumbing (Kronecker pairing, flips, leg embeddings).

All indices are 1-based. M_n (x) M_m is identified with M_{nm} through the
pairing (i, k) -> m(i-1) + k, and a tuple (i_1, ..., i_r) over a grid of shape
(d_1, ..., d_r) is linearised lexicographically with the same rule.
"""

import math
import logging
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from types import MappingProxyType
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from errors import DomainError
from limits import get_limits

logger = logging.getLogger(__name__)

Index = Tuple[int, int]
Shape = Tuple[int, ...]
ScalarLike = Union["ExactScalar", int, Fraction]


@dataclass(frozen=True, eq=False)
class ExactScalar:
    """Complex number with exact rational real and imaginary parts."""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("re", "im"):
            value = getattr(self, name)
            if isinstance(value, float):
                raise DomainError(f"floating point {name} part {value!r} is not exact")
            object.__setattr__(self, name, Fraction(value))

    @classmethod
    def of(cls, value: ScalarLike) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise DomainError(f"cannot build an exact scalar from {value!r}")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: ScalarLike) -> "ExactScalar":
        other = ExactScalar.of(other)
        return ExactScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, other: ScalarLike) -> "ExactScalar":
        return self + (-ExactScalar.of(other))

    def __rsub__(self, other: ScalarLike) -> "ExactScalar":
        return ExactScalar.of(other) - self

    def __mul__(self, other: ScalarLike) -> "ExactScalar":
        other = ExactScalar.of(other)
        return ExactScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "ExactScalar":
        other = ExactScalar.of(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise DomainError("division by zero")
        return self * ExactScalar(other.re / norm, -other.im / norm)

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactScalar.of(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"ExactScalar({self.re})"
        return f"ExactScalar({self.re}, {self.im})"

    def to_json(self) -> List[int]:
        """[re_num, re_den, im_num, im_den]"""
        return [self.re.numerator, self.re.denominator, self.im.numerator, self.im.denominator]


ZERO = ExactScalar()
ONE = ExactScalar(Fraction(1))


# ================== Index pairing ==================

def pair_index(m: int, i: int, k: int) -> int:
    """(i, k) in F_n x F_m -> m(i-1) + k."""
    return m * (i - 1) + k


def unpair_index(m: int, index: int) -> Index:
    """Inverse of pair_index for the second factor of size m."""
    return (index - 1) // m + 1, (index - 1) % m + 1


def tensor_index(shape: Sequence[int], idx: Sequence[int]) -> int:
    """Lexicographic linearisation of a grid tuple (iterated pairing)."""
    flat = 1
    for size, i in zip(shape, idx):
        flat = pair_index(size, flat, i)
    return flat


def tensor_unindex(shape: Sequence[int], flat: int) -> Tuple[int, ...]:
    out = []
    for size in reversed(shape):
        flat, i = unpair_index(size, flat)
        out.append(i)
    return tuple(reversed(out))


def grid(shape: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All tuples of F_{d_1} x ... x F_{d_r} in lexicographic order."""
    return itertools.product(*(range(1, d + 1) for d in shape))


def _check_index(n: int, *indices: int):
    for i in indices:
        if not 1 <= i <= n:
            raise DomainError(f"index {i} out of range 1..{n}")


def _check_dim(n: int, what: str = "dimension"):
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"{what} must be a positive integer, got {n!r}")


# ================== Sparse matrices ==================

@dataclass(frozen=True, eq=False)
class SparseSquareMatrix:
    """Square matrix stored as a map (row, col) -> nonzero ExactScalar."""
    dim: int
    entries: Mapping[Index, ExactScalar]

    def __post_init__(self):
        _check_dim(self.dim)
        clean: Dict[Index, ExactScalar] = {}
        for (i, j), value in self.entries.items():
            _check_index(self.dim, i, j)
            value = ExactScalar.of(value)
            if value:
                clean[(i, j)] = value
        object.__setattr__(self, "entries", MappingProxyType(clean))

    @classmethod
    def _trusted(cls, dim: int, entries: Dict[Index, ExactScalar]) -> "SparseSquareMatrix":
        """Build from already-pruned, in-range entries."""
        matrix = object.__new__(cls)
        object.__setattr__(matrix, "dim", dim)
        object.__setattr__(matrix, "entries", MappingProxyType(entries))
        return matrix

    @cached_property
    def rows(self) -> Dict[int, List[Tuple[int, ExactScalar]]]:
        rows: Dict[int, List[Tuple[int, ExactScalar]]] = {}
        for (i, j), value in self.entries.items():
            rows.setdefault(i, []).append((j, value))
        return rows

    def __getitem__(self, key: Index) -> ExactScalar:
        return self.entries.get(key, ZERO)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def items(self) -> List[Tuple[Index, ExactScalar]]:
        """Entries in row-major order."""
        return sorted(self.entries.items())

    def __matmul__(self, other: "SparseSquareMatrix") -> "SparseSquareMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "SparseSquareMatrix") -> "SparseSquareMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "SparseSquareMatrix") -> "SparseSquareMatrix":
        return mat_sub(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseSquareMatrix):
            return NotImplemented
        return self.dim == other.dim and dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v!r}" for k, v in self.items()[:8])
        more = ", ..." if self.nnz > 8 else ""
        return f"SparseSquareMatrix(dim={self.dim}, {{{body}{more}}})"


def zero(n: int) -> SparseSquareMatrix:
    _check_dim(n)
    return SparseSquareMatrix._trusted(n, {})


def identity(n: int) -> SparseSquareMatrix:
    _check_dim(n)
    get_limits().check_dim(n, "identity")
    return SparseSquareMatrix._trusted(n, {(i, i): ONE for i in range(1, n + 1)})


def mat_unit(n: int, i: int, j: int) -> SparseSquareMatrix:
    """The matrix unit E^{(n)}_{i,j}."""
    _check_dim(n)
    _check_index(n, i, j)
    return SparseSquareMatrix._trusted(n, {(i, j): ONE})


def unit_indices(n: int) -> Iterator[Index]:
    """Matrix-unit positions of M_n: diagonal units first, then off-diagonal row-major."""
    for i in range(1, n + 1):
        yield i, i
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                yield i, j


def _same_dim(a: SparseSquareMatrix, b: SparseSquareMatrix):
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")


def mat_mul(a: SparseSquareMatrix, b: SparseSquareMatrix) -> SparseSquareMatrix:
    _same_dim(a, b)
    out: Dict[Index, ExactScalar] = {}
    b_rows = b.rows
    for (i, k), left in a.entries.items():
        for j, right in b_rows.get(k, ()):
            out[(i, j)] = out.get((i, j), ZERO) + left * right
    return SparseSquareMatrix._trusted(a.dim, {key: v for key, v in out.items() if v})


def mat_add(a: SparseSquareMatrix, b: SparseSquareMatrix) -> SparseSquareMatrix:
    _same_dim(a, b)
    out = dict(a.entries)
    for key, value in b.entries.items():
        out[key] = out.get(key, ZERO) + value
    return SparseSquareMatrix._trusted(a.dim, {key: v for key, v in out.items() if v})


def mat_scale(c: ScalarLike, a: SparseSquareMatrix) -> SparseSquareMatrix:
    c = ExactScalar.of(c)
    if not c:
        return zero(a.dim)
    return SparseSquareMatrix._trusted(a.dim, {key: c * v for key, v in a.entries.items()})


def mat_sub(a: SparseSquareMatrix, b: SparseSquareMatrix) -> SparseSquareMatrix:
    return mat_add(a, mat_scale(-1, b))


def mat_adjoint(a: SparseSquareMatrix) -> SparseSquareMatrix:
    return SparseSquareMatrix._trusted(
        a.dim, {(j, i): v.conjugate() for (i, j), v in a.entries.items()}
    )


def mat_equal(a: SparseSquareMatrix, b: SparseSquareMatrix) -> bool:
    _same_dim(a, b)
    return a == b


def is_unitary(a: SparseSquareMatrix) -> bool:
    return mat_mul(a, mat_adjoint(a)) == identity(a.dim)


def first_difference(a: SparseSquareMatrix, b: SparseSquareMatrix) -> Optional[Tuple[Index, ExactScalar, ExactScalar]]:
    """First (row-major) position where a and b differ, with both values."""
    _same_dim(a, b)
    for key in sorted(set(a.entries) | set(b.entries)):
        if a[key] != b[key]:
            return key, a[key], b[key]
    return None


# ================== Tensor products ==================

def kron(n: int, m: int, a: SparseSquareMatrix, b: SparseSquareMatrix) -> SparseSquareMatrix:
    """A (x) B in M_{nm} under the pairing (i, k) -> m(i-1) + k."""
    if a.dim != n or b.dim != m:
        raise DomainError(f"kron({n},{m}) got factors of dimension {a.dim} and {b.dim}")
    get_limits().check_dim(n * m, "kron")
    out: Dict[Index, ExactScalar] = {}
    for (i, j), x in a.entries.items():
        for (k, l), y in b.entries.items():
            out[(pair_index(m, i, k), pair_index(m, j, l))] = x * y
    return SparseSquareMatrix._trusted(n * m, out)


def relabel(x: SparseSquareMatrix, target_dim: int, index_map: Callable[[int], int]) -> SparseSquareMatrix:
    """Move entry (r, c) to (index_map(r), index_map(c)); index_map must be a bijection."""
    out = {(index_map(r), index_map(c)): v for (r, c), v in x.entries.items()}
    return SparseSquareMatrix._trusted(target_dim, out)


def flip(n: int, m: int, x: SparseSquareMatrix) -> SparseSquareMatrix:
    """tau_{n,m}: M_n (x) M_m -> M_m (x) M_n, E_{(i,k),(j,l)} -> E_{(k,i),(l,j)}."""
    _check_dim(n)
    _check_dim(m)
    if x.dim != n * m:
        raise DomainError(f"flip({n},{m}) expects dimension {n * m}, got {x.dim}")

    def swap(index: int) -> int:
        i, k = unpair_index(m, index)
        return pair_index(n, k, i)

    return relabel(x, n * m, swap)


LEGS = ("12", "13", "23")


def embed_legs(dims: Sequence[int], legs: Union[str, int], x: SparseSquareMatrix) -> SparseSquareMatrix:
    """X acting on the named legs of M_n (x) M_m (x) M_l, identity on the remaining leg."""
    legs = str(legs)
    if legs not in LEGS:
        raise DomainError(f"legs must be one of {LEGS}, got {legs!r}")
    if len(dims) != 3:
        raise DomainError(f"embed_legs needs three dimensions, got {tuple(dims)}")
    for d in dims:
        _check_dim(d)
    n, m, l = dims
    first, second = (int(c) - 1 for c in legs)
    spare = ({0, 1, 2} - {first, second}).pop()
    a, b, rest = dims[first], dims[second], dims[spare]
    if x.dim != a * b:
        raise DomainError(f"legs {legs} of {tuple(dims)} need dimension {a * b}, got {x.dim}")
    get_limits().check_dim(n * m * l, "embed_legs")

    out: Dict[Index, ExactScalar] = {}
    for (r, c), value in x.entries.items():
        ri, rk = unpair_index(b, r)
        ci, ck = unpair_index(b, c)
        for s in range(1, rest + 1):
            row = [0, 0, 0]
            col = [0, 0, 0]
            row[first], row[second], row[spare] = ri, rk, s
            col[first], col[second], col[spare] = ci, ck, s
            out[(tensor_index(dims, row), tensor_index(dims, col))] = value
    return SparseSquareMatrix._trusted(n * m * l, out)


# ================== Grid permutations ==================

@dataclass(frozen=True, eq=False)
class GridPermutation:
    """Bijection between product grids F_{d_1} x ... x F_{d_r}.

    `codomain` defaults to `shape`; a map whose codomain differs (a flip
    F_n x F_m -> F_m x F_n, or phi_{n,m}: F_n x F_m -> F_{nm}) is used as a
    factor of composites that are permutations of one grid.
    """
    shape: Shape
    table: Mapping[Tuple[int, ...], Tuple[int, ...]]
    codomain: Optional[Shape] = None

    def __post_init__(self):
        shape = tuple(self.shape)
        codomain = tuple(self.codomain) if self.codomain is not None else shape
        for d in shape + codomain:
            _check_dim(d, "grid size")
        if math.prod(shape) != math.prod(codomain):
            raise DomainError(f"grids {shape} and {codomain} have different sizes")

        table = {tuple(k): tuple(v) for k, v in self.table.items()}
        if len(table) != math.prod(shape) or any(
            len(k) != len(shape) or not all(1 <= i <= d for i, d in zip(k, shape)) for k in table
        ):
            raise DomainError(f"table does not cover the grid {shape}")
        images = set(table.values())
        if len(images) != len(table):
            raise DomainError("table is not injective")
        if any(len(v) != len(codomain) or not all(1 <= i <= d for i, d in zip(v, codomain)) for v in images):
            raise DomainError(f"table leaves the grid {codomain}")

        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "table", MappingProxyType(table))

    @classmethod
    def _trusted(cls, shape: Shape, table: Dict, codomain: Shape) -> "GridPermutation":
        perm = object.__new__(cls)
        object.__setattr__(perm, "shape", shape)
        object.__setattr__(perm, "codomain", codomain)
        object.__setattr__(perm, "table", MappingProxyType(table))
        return perm

    def __call__(self, *idx: int) -> Tuple[int, ...]:
        key = tuple(idx[0]) if len(idx) == 1 and isinstance(idx[0], tuple) else tuple(idx)
        try:
            return self.table[key]
        except KeyError:
            raise DomainError(f"{key} is not in the grid {self.shape}") from None

    @property
    def is_endo(self) -> bool:
        return self.shape == self.codomain

    def compose(self, other: "GridPermutation") -> "GridPermutation":
        """self o other (apply other first)."""
        if other.codomain != self.shape:
            raise DomainError(f"cannot compose: {other.codomain} does not feed {self.shape}")
        table = {k: self.table[v] for k, v in other.table.items()}
        return GridPermutation._trusted(other.shape, table, self.codomain)

    def __matmul__(self, other: "GridPermutation") -> "GridPermutation":
        return self.compose(other)

    def inverse(self) -> "GridPermutation":
        return GridPermutation._trusted(
            self.codomain, {v: k for k, v in self.table.items()}, self.shape
        )

    def is_identity(self) -> bool:
        return self.is_endo and all(k == v for k, v in self.table.items())

    def items(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        return sorted(self.table.items())

    def cycles(self) -> List[List[Tuple[int, ...]]]:
        """Disjoint cycles (fixed points included), each starting at its least element."""
        if not self.is_endo:
            raise DomainError("cycles are only defined for a permutation of one grid")
        seen = set()
        out = []
        for start in sorted(self.table):
            if start in seen:
                continue
            cycle = []
            x = start
            while x not in seen:
                seen.add(x)
                cycle.append(x)
                x = self.table[x]
            out.append(cycle)
        return out

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridPermutation):
            return NotImplemented
        return (self.shape, self.codomain) == (other.shape, other.codomain) and dict(self.table) == dict(other.table)

    def __hash__(self) -> int:
        return hash((self.shape, self.codomain, frozenset(self.table.items())))

    def __repr__(self) -> str:
        return f"GridPermutation(shape={self.shape}, codomain={self.codomain}, size={len(self.table)})"


def grid_map(shape: Sequence[int], fn: Callable[..., Tuple[int, ...]],
             codomain: Optional[Sequence[int]] = None) -> GridPermutation:
    """Tabulate fn over the grid; validated to be a bijection."""
    shape = tuple(shape)
    return GridPermutation(shape, {idx: tuple(fn(*idx)) for idx in grid(shape)}, codomain)


@lru_cache(maxsize=4096)
def grid_identity(shape: Sequence[int]) -> GridPermutation:
    shape = tuple(shape)
    return GridPermutation._trusted(shape, {idx: idx for idx in grid(shape)}, shape)


@lru_cache(maxsize=4096)
def flip_map(n: int, m: int) -> GridPermutation:
    """theta_{n,m}: F_n x F_m -> F_m x F_n, (i, j) -> (j, i)."""
    _check_dim(n)
    _check_dim(m)
    return GridPermutation._trusted((n, m), {(i, j): (j, i) for i, j in grid((n, m))}, (m, n))


@lru_cache(maxsize=4096)
def phi_map(n: int, m: int) -> GridPermutation:
    """Index bijection phi_{n,m}: F_n x F_m -> F_{nm}, (i, j) -> m(i-1) + j."""
    _check_dim(n)
    _check_dim(m)
    return GridPermutation._trusted(
        (n, m), {(i, j): (pair_index(m, i, j),) for i, j in grid((n, m))}, (n * m,)
    )


def product_map(*factors: GridPermutation) -> GridPermutation:
    """p_1 x ... x p_r acting on the concatenated grid."""
    shape = tuple(itertools.chain.from_iterable(f.shape for f in factors))
    codomain = tuple(itertools.chain.from_iterable(f.codomain for f in factors))
    table = {}
    for parts in itertools.product(*(f.table.items() for f in factors)):
        key = tuple(itertools.chain.from_iterable(k for k, _ in parts))
        table[key] = tuple(itertools.chain.from_iterable(v for _, v in parts))
    return GridPermutation._trusted(shape, table, codomain)


def compose_all(*maps: GridPermutation) -> GridPermutation:
    """maps[0] o maps[1] o ... o maps[-1]."""
    return reduce(lambda left, right: left.compose(right), maps)


def perm_to_matrix(p: GridPermutation) -> SparseSquareMatrix:
    """Sum over x of E_{p(x), x}: the permutation matrix of p."""
    if not p.is_endo:
        raise DomainError(f"perm_to_matrix needs a permutation of one grid, got {p.shape} -> {p.codomain}")
    dim = math.prod(p.shape)
    get_limits().check_dim(dim, "permutation matrix")
    out = {
        (tensor_index(p.shape, image), tensor_index(p.shape, source)): ONE
        for source, image in p.table.items()
    }
    return SparseSquareMatrix._trusted(dim, out)


def matrix_to_perm(x: SparseSquareMatrix, shape: Sequence[int]) -> Optional[GridPermutation]:
    """Read a 0/1 permutation matrix back as a grid permutation; None if it is not one."""
    shape = tuple(shape)
    if math.prod(shape) != x.dim or x.nnz != x.dim:
        return None
    table = {}
    for (r, c), value in x.entries.items():
        if value != ONE:
            return None
        table[tensor_unindex(shape, c)] = tensor_unindex(shape, r)
    if len(table) != x.dim or len(set(table.values())) != x.dim:
        return None
    return GridPermutation._trusted(shape, table, shape)
