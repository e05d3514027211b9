"""
rmatrix-lab Braid Representation Module
The operator C = T Pi(R) on H (x) H for the block representation
H = C^{n_1} + ... + C^{n_r} of M_*(C), its copies C_i on H^{(x)k}, and
the braid, far-commutation, involution and symmetric-group checks.

Basis of H: pairs (n, i), summands in the order of `dims`, i ascending;
H^{(x)k} is ordered lexicographically in those pairs. Every operator here
is a permutation of basis vectors, so each check runs on grid permutations
and on their sparse matrices and compares the two verdicts.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Tuple

from errors import DomainError
from exact import (
    GridPermutation, SparseSquareMatrix, compose_all, flip_map, grid_identity, grid_map,
    identity, mat_mul, pair_index, perm_to_matrix, unpair_index,
)
from limits import get_limits
from bialgebra import BlockFamily, extended_flip
from report import Counterexample, Timer, VerificationReport, dual_path, single_path
from serialization import matrix_to_json
from rmatrix import RSource, chi, r_family, standard_source

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RepSpace:
    """H = sum over n in dims of C^n."""
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(self.dims)
        if not dims:
            raise DomainError("a representation space needs at least one summand")
        if any(not isinstance(d, int) or d < 1 for d in dims):
            raise DomainError(f"summand dimensions must be positive integers, got {dims}")
        if any(a >= b for a, b in zip(dims, dims[1:])):
            raise DomainError(f"summand dimensions must be strictly increasing, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @cached_property
    def offsets(self) -> Dict[int, int]:
        out, start = {}, 0
        for n in self.dims:
            out[n] = start
            start += n
        return out

    def basis(self) -> List[Tuple[int, int]]:
        return [(n, i) for n in self.dims for i in range(1, n + 1)]

    def index_of(self, n: int, i: int) -> int:
        """1-based position of (n, i) in the basis of H."""
        if n not in self.offsets or not 1 <= i <= n:
            raise DomainError(f"({n}, {i}) is not a basis vector of H{self.dims}")
        return self.offsets[n] + i

    def label_of(self, index: int) -> Tuple[int, int]:
        return self.basis()[index - 1]


@dataclass(frozen=True, eq=False)
class BraidOperator:
    """C = T Pi(R) on H (x) H, as a permutation of the grid (D, D) with D = total_dim."""
    space: RepSpace
    perm: GridPermutation

    @cached_property
    def matrix(self) -> SparseSquareMatrix:
        return perm_to_matrix(self.perm)

    def image(self, a: Tuple[int, int], b: Tuple[int, int]) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """C(e_a (x) e_b) for basis labels a = (n, i), b = (m, j)."""
        x, y = self.perm(self.space.index_of(*a), self.space.index_of(*b))
        return self.space.label_of(x), self.space.label_of(y)


# ================== Operators ==================

def _space_of(space) -> RepSpace:
    return space if isinstance(space, RepSpace) else RepSpace(tuple(space))


def _source_map(space: RepSpace, source: RSource) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """Pi(R) on basis index pairs of H (x) H."""
    labels = space.basis()
    out = {}
    for x, (n, i) in enumerate(labels, start=1):
        for y, (m, j) in enumerate(labels, start=1):
            i2, j2 = source(n, m).perm(i, j)
            out[(x, y)] = (space.index_of(n, i2), space.index_of(m, j2))
    return out


def build_c(space, source: RSource = standard_source) -> BraidOperator:
    """C(e_i^{(n)} (x) e_j^{(m)}) = e_{j'}^{(m)} (x) e_{i'}^{(n)} with (i', j') = chi_{n,m}(i, j)."""
    space = _space_of(space)
    d = space.total_dim
    get_limits().check_braid(d * d)
    get_limits().check_dim(d * d, "braid operator")
    pi = _source_map(space, source)
    return BraidOperator(space, grid_map((d, d), lambda x, y: pi[(x, y)][::-1]))


def c_perm(space, k: int, i: int, source: RSource = standard_source) -> GridPermutation:
    """C_i = I^{(x)(i-1)} (x) C (x) I^{(x)(k-i-1)} as a permutation of H^{(x)k}."""
    space = _space_of(space)
    if not 1 <= i <= k - 1:
        raise DomainError(f"C_{i} needs 1 <= i <= k-1 with k = {k}")
    d = space.total_dim
    get_limits().check_braid(d ** k)
    c = _c_table(space, source)
    return grid_map((d,) * k, lambda *idx: idx[:i - 1] + c[idx[i - 1:i + 1]] + idx[i + 1:])


def c_i(space, k: int, i: int, source: RSource = standard_source) -> SparseSquareMatrix:
    """C_i as a matrix on H^{(x)k}."""
    return perm_to_matrix(c_perm(space, k, i, source))


@lru_cache(maxsize=256)
def _c_table(space: RepSpace, source: RSource) -> Dict[Tuple[int, int], Tuple[int, int]]:
    return dict(build_c(space, source).perm.table)


def flip_operator(space) -> SparseSquareMatrix:
    """T: e_a (x) e_b -> e_b (x) e_a on H (x) H."""
    d = _space_of(space).total_dim
    return perm_to_matrix(flip_map(d, d))


def pi_of_family(space, family: BlockFamily) -> SparseSquareMatrix:
    """Pi(family) on H (x) H: block (n, m) of the family acts on C^n (x) C^m."""
    space = _space_of(space)
    d = space.total_dim
    get_limits().check_dim(d * d, "Pi")
    entries = {}
    for n in space.dims:
        for m in space.dims:
            for (r, c), value in family.block(n, m).entries.items():
                ri, rj = unpair_index(m, r)
                ci, cj = unpair_index(m, c)
                row = pair_index(d, space.index_of(n, ri), space.index_of(m, rj))
                col = pair_index(d, space.index_of(n, ci), space.index_of(m, cj))
                entries[(row, col)] = value
    return SparseSquareMatrix(d * d, entries)


# ================== Reduced words ==================

@lru_cache(maxsize=None)
def _reduced_words(w: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    descents = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
    if not descents:
        return ((),)
    words = []
    for p in descents:
        shorter = w[:p] + (w[p + 1], w[p]) + w[p + 2:]
        words.extend(word + (p + 1,) for word in _reduced_words(shorter))
    return tuple(sorted(words))


def reduced_words(k: int) -> Dict[Tuple[int, ...], Tuple[Tuple[int, ...], ...]]:
    """Every permutation of S_k (one-line notation) with all its reduced words in s_1, ..., s_{k-1}."""
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    return {w: _reduced_words(w) for w in itertools.permutations(range(1, k + 1))}


# ================== Verification ==================

def _perm_failure(description: str, p: GridPermutation, q: GridPermutation, indices: Dict) -> Optional[Counterexample]:
    for point in sorted(p.table):
        if p(point) != q(point):
            return Counterexample(description, {**indices, "point": list(point)},
                                  list(p(point)), list(q(point)))
    return None


def _matrix_failure(description: str, left: SparseSquareMatrix, right: SparseSquareMatrix, indices: Dict):
    if left != right:
        return Counterexample(description, indices, matrix_to_json(left), matrix_to_json(right))
    return None


def _relation_pairs(k: int) -> List[Tuple[str, Tuple[int, ...], Tuple[int, ...]]]:
    """(kind, left word, right word) for every braid and far-commutation relation on k strands.

    Far generators commute, C_i C_j = C_j C_i for |i - j| >= 2; the relation is
    sometimes misprinted with both sides equal, which would be vacuous.
    """
    pairs = []
    for i in range(1, k - 1):
        pairs.append(("braid", (i, i + 1, i), (i + 1, i, i + 1)))
    for i in range(1, k):
        for j in range(i + 2, k):
            pairs.append(("far", (i, j), (j, i)))
    return pairs


def _run_words(space: RepSpace, k: int, relations, check_name: str, params: Dict,
               source: RSource) -> VerificationReport:
    """Compare products of C_i along word pairs on permutations and on matrices."""
    timer = Timer()
    perms = {i: c_perm(space, k, i, source) for i in range(1, k)}
    matrices = {i: perm_to_matrix(p) for i, p in perms.items()}
    d = space.total_dim ** k
    ones = grid_identity((space.total_dim,) * k)

    def perm_word(word):
        return compose_all(*(perms[i] for i in word)) if word else ones

    def matrix_word(word):
        out = identity(d)
        for i in word:
            out = mat_mul(out, matrices[i])
        return out

    perm_failure = matrix_failure = link = None
    for kind, left, right in relations:
        indices = {"relation": kind, "left_word": list(left), "right_word": list(right)}
        pl, pr = perm_word(left), perm_word(right)
        ml, mr = matrix_word(left), matrix_word(right)
        perm_failure = perm_failure or _perm_failure(f"{kind} relation fails on permutations", pl, pr, indices)
        matrix_failure = matrix_failure or _matrix_failure(f"{kind} relation fails on matrices", ml, mr, indices)
        if link is None and perm_to_matrix(pl) != ml:
            link = Counterexample("product of C_i permutations differs from the matrix product",
                                  indices, None, None)
        if perm_failure and matrix_failure:
            break
    return dual_path(check_name, params, timer,
                     {"matrix": matrix_failure, "permutation": perm_failure}, len(relations), link)


def verify_braid_relations(space, k: int, source: RSource = standard_source) -> VerificationReport:
    """C_i C_{i+1} C_i == C_{i+1} C_i C_{i+1} for i <= k-2 and C_i C_j == C_j C_i for |i-j| >= 2."""
    space = _space_of(space)
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    get_limits().check_braid(space.total_dim ** k)
    params = {"dims": list(space.dims), "k": k}
    return _run_words(space, k, _relation_pairs(k), "braid_relations", params, source)


def verify_involution(space, source: RSource = standard_source) -> VerificationReport:
    """C^2 == I on H (x) H."""
    space = _space_of(space)
    params = {"dims": list(space.dims)}
    return _run_words(space, 2, [("involution", (1, 1), ())], "involution", params, source)


def verify_symmetric_group(space, k: int, source: RSource = standard_source) -> VerificationReport:
    """Products of C_i along any two reduced words of the same permutation of S_k agree, and C_i^2 == I."""
    space = _space_of(space)
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    get_limits().check_braid(space.total_dim ** k)
    relations = [("involution", (i, i), ()) for i in range(1, k)]
    for w, words in reduced_words(k).items():
        relations.extend(("reduced_words", words[0], other) for other in words[1:])
    params = {"dims": list(space.dims), "k": k}
    return _run_words(space, k, relations, "symmetric_group", params, source)


def verify_flip_conjugation(space, source: RSource = standard_source) -> VerificationReport:
    """T Pi(R) T == Pi(tau-tilde(R)) on H (x) H."""
    space = _space_of(space)
    timer = Timer()
    r = r_family(max(space.dims), source)
    t = flip_operator(space)
    left = mat_mul(mat_mul(t, pi_of_family(space, r)), t)
    right = pi_of_family(space, extended_flip(r))
    failure = _matrix_failure("T Pi(R) T differs from Pi(tau-tilde(R))", left, right, {})
    return single_path("flip_conjugation", {"dims": list(space.dims)}, timer, failure,
                       space.total_dim ** 2)


def c_matches_chi(space) -> bool:
    """C agrees with the defining formula on every basis pair."""
    op = build_c(space)
    for n, i in op.space.basis():
        for m, j in op.space.basis():
            i2, j2 = chi(n, m, i, j)
            if op.image((n, i), (m, j)) != ((m, j2), (n, i2)):
                return False
    return True
