"""
rmatrix-lab R-Matrix Module
The arithmetic permutation chi_{n,m}, the universal R-matrix blocks R^{(n,m)}
and exact verification of the intertwiner, hexagon, triangularity,
Yang-Baxter and counit identities.

chi_{n,m}(i, j) = (i', j') is the unique pair with
    m(i - 1) + j = n(j' - 1) + i',   1 <= i' <= n, 1 <= j' <= m,
i.e. the two mixed-radix readings of N = m(i - 1) + j. R^{(n,m)} sends
e_i (x) e_j to e_{i'} (x) e_{j'}.

Each identity is decided twice: on grid permutations and on sparse matrices.
The verdicts must agree; a disagreement is reported as an internal-consistency
failure rather than as a failure of the identity.

Right hexagon. The permutation form of
    (id_n (x) phi_{m,l})(R^{(n,ml)}) = R^{(n,l)}_{13} R^{(n,m)}_{12}
is P' = Q' with
    P' = (id_n x phi_{m,l}^{-1}) o chi_{n,ml} o (id_n x phi_{m,l}),
    Q' = (id_n x theta_{l,m}) o (chi_{n,l} x id_m) o (id_n x theta_{m,l}) o (chi_{n,m} x id_l).
P' is read off the left-hand side exactly as P is for the left hexagon. For Q',
R_{12} sends (i, j, k) to (i1, j1, k) with (i1, j1) = chi_{n,m}(i, j); R_{13} then
acts on the first and third slots, which is chi_{n,l} conjugated by the swap of
the last two slots. Both composites are checked against the matrix-level
operators on every instance (see `verify_hexagon_right`).
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Dict, Optional, Tuple

from errors import DomainError
from exact import (
    GridPermutation, SparseSquareMatrix, compose_all, embed_legs, first_difference,
    flip, flip_map, grid_identity, grid_map, identity, mat_adjoint, mat_mul,
    mat_unit, matrix_to_perm, pair_index, perm_to_matrix, phi_map, product_map, unit_indices,
)
from limits import get_limits
from bialgebra import (
    MATRIX_SYSTEM, BlockFamily, delta, delta_op, extended_flip, phi, phi_op, unit_element,
)
from monoid import embed_first_leg, embed_second_leg
from report import Counterexample, Timer, VerificationReport, dual_path, single_path
from serialization import grid_map_to_json, matrix_to_json

logger = logging.getLogger(__name__)


# ================== chi and R ==================

def chi(n: int, m: int, i: int, j: int) -> Tuple[int, int]:
    """(i, j) -> (i', j') with m(i-1) + j = n(j'-1) + i'."""
    for d in (n, m):
        if not isinstance(d, int) or d < 1:
            raise DomainError(f"dimensions must be positive integers, got ({n}, {m})")
    if not (1 <= i <= n and 1 <= j <= m):
        raise DomainError(f"({i}, {j}) is not in F_{n} x F_{m}")
    N = pair_index(m, i, j)
    return (N - 1) % n + 1, (N - 1) // n + 1


def _check_dims(*dims: int):
    for d in dims:
        if not isinstance(d, int) or d < 1:
            raise DomainError(f"dimensions must be positive integers, got {dims}")


def _check_table(n: int, m: int, what: str):
    _check_dims(n, m)
    get_limits().check_dim(n * m, what)


@lru_cache(maxsize=4096)
def _chi_table(n: int, m: int) -> GridPermutation:
    return grid_map((n, m), lambda i, j: chi(n, m, i, j))


def chi_table(n: int, m: int) -> GridPermutation:
    """chi_{n,m} tabulated as a permutation of F_n x F_m."""
    _check_table(n, m, "chi table")
    return _chi_table(n, m)


def chi_via_phi(n: int, m: int) -> GridPermutation:
    """chi_{n,m} = theta_{m,n} o phi_{m,n}^{-1} o phi_{n,m}."""
    _check_table(n, m, "chi table")
    return compose_all(flip_map(m, n), phi_map(m, n).inverse(), phi_map(n, m))


@dataclass(frozen=True, eq=False)
class RMatrixBlock:
    """The (n, m) block of R: a permutation of F_n x F_m and its matrix in M_n (x) M_m."""
    n: int
    m: int
    perm: GridPermutation

    def __post_init__(self):
        if self.perm.shape != (self.n, self.m) or not self.perm.is_endo:
            raise DomainError(f"R block ({self.n},{self.m}) needs a permutation of F_{self.n} x F_{self.m}")

    @cached_property
    def matrix(self) -> SparseSquareMatrix:
        return perm_to_matrix(self.perm)

    @property
    def is_standard(self) -> bool:
        return self.perm == chi_table(self.n, self.m)


@lru_cache(maxsize=4096)
def _r_matrix(n: int, m: int) -> RMatrixBlock:
    return RMatrixBlock(n, m, _chi_table(n, m))


def r_matrix(n: int, m: int) -> RMatrixBlock:
    """R^{(n,m)} = sum over (i, j) of E_{chi_{n,m}(i,j), (i,j)}."""
    _check_table(n, m, "R block")
    return _r_matrix(n, m)


# ================== R sources ==================
# A source maps (n, m) to the block used for R^{(n,m)}. Every verification
# takes one, so the negative controls swap R without touching the checks.

RSource = Callable[[int, int], RMatrixBlock]


def standard_source(n: int, m: int) -> RMatrixBlock:
    return r_matrix(n, m)


@dataclass(frozen=True)
class IdentitySource:
    """Every block replaced by the identity."""

    def __call__(self, n: int, m: int) -> RMatrixBlock:
        _check_table(n, m, "R block")
        return RMatrixBlock(n, m, grid_identity((n, m)))


@dataclass(frozen=True)
class InvertedSource:
    """chi replaced by its inverse on the single block (n, m)."""
    n: int
    m: int

    def __call__(self, n: int, m: int) -> RMatrixBlock:
        if (n, m) == (self.n, self.m):
            return RMatrixBlock(n, m, chi_table(n, m).inverse())
        return r_matrix(n, m)


def r_family(window: int, source: RSource = standard_source) -> BlockFamily:
    """R = (R^{(n,m)}) as a lazily evaluated block family."""
    return BlockFamily(window, {}, lambda n, m: source(n, m).matrix)


# ================== Composite permutations ==================

def _id(d: int) -> GridPermutation:
    return grid_identity((d,))


def _r13_perm(source: RSource, n: int, m: int, l: int) -> GridPermutation:
    """R^{(n,l)} on slots 1 and 3 of F_n x F_m x F_l."""
    return compose_all(
        product_map(_id(n), flip_map(l, m)),
        product_map(source(n, l).perm, _id(m)),
        product_map(_id(n), flip_map(m, l)),
    )


def build_P(n: int, m: int, l: int, source: RSource = standard_source) -> GridPermutation:
    """(phi_{n,m}^{-1} x id_l) o chi_{nm,l} o (phi_{n,m} x id_l)."""
    return compose_all(
        product_map(phi_map(n, m).inverse(), _id(l)),
        source(n * m, l).perm,
        product_map(phi_map(n, m), _id(l)),
    )


def build_Q(n: int, m: int, l: int, source: RSource = standard_source) -> GridPermutation:
    """(id_n x theta_{l,m}) o (chi_{n,l} x id_m) o (id_n x theta_{m,l}) o (id_n x chi_{m,l})."""
    return compose_all(
        product_map(_id(n), flip_map(l, m)),
        product_map(source(n, l).perm, _id(m)),
        product_map(_id(n), flip_map(m, l)),
        product_map(_id(n), source(m, l).perm),
    )


def build_P_right(n: int, m: int, l: int, source: RSource = standard_source) -> GridPermutation:
    """(id_n x phi_{m,l}^{-1}) o chi_{n,ml} o (id_n x phi_{m,l})."""
    return compose_all(
        product_map(_id(n), phi_map(m, l).inverse()),
        source(n, m * l).perm,
        product_map(_id(n), phi_map(m, l)),
    )


def build_Q_right(n: int, m: int, l: int, source: RSource = standard_source) -> GridPermutation:
    """(id_n x theta_{l,m}) o (chi_{n,l} x id_m) o (id_n x theta_{m,l}) o (chi_{n,m} x id_l)."""
    return compose_all(
        product_map(_id(n), flip_map(l, m)),
        product_map(source(n, l).perm, _id(m)),
        product_map(_id(n), flip_map(m, l)),
        product_map(source(n, m).perm, _id(l)),
    )


def phi_coherence(n: int, m: int, l: int) -> bool:
    """phi_{nm,l} o (phi_{n,m} x id_l) == phi_{n,ml} o (id_n x phi_{m,l}) on F_n x F_m x F_l."""
    left = phi_map(n * m, l).compose(product_map(phi_map(n, m), _id(l)))
    right = phi_map(n, m * l).compose(product_map(_id(n), phi_map(m, l)))
    return left == right


def r_squared_is_identity(n: int, m: int) -> bool:
    block = r_matrix(n, m)
    return mat_mul(block.matrix, block.matrix) == identity(n * m)


# ================== Helpers ==================

def _perm_failure(description: str, p: GridPermutation, q: GridPermutation,
                  labels: Tuple[str, str]) -> Optional[Counterexample]:
    """First grid point where p and q differ."""
    for source in sorted(p.table):
        if p(source) != q(source):
            return Counterexample(description, {"point": list(source)},
                                  {labels[0]: list(p(source))}, {labels[1]: list(q(source))})
    return None


def _matrix_failure(description: str, left: SparseSquareMatrix, right: SparseSquareMatrix,
                    indices: Optional[Dict] = None) -> Optional[Counterexample]:
    diff = first_difference(left, right)
    if diff is None:
        return None
    (row, col), _, _ = diff
    return Counterexample(description, {**(indices or {}), "entry": [row, col]},
                          matrix_to_json(left), matrix_to_json(right))


def _link_failure(p: GridPermutation, x: SparseSquareMatrix, what: str) -> Optional[Counterexample]:
    """The matrix-level operator x must be the permutation matrix of p."""
    read_back = matrix_to_perm(x, p.shape)
    if read_back is None:
        return Counterexample(f"operator for {what} is not a permutation matrix",
                              {"operator": what}, grid_map_to_json(p), matrix_to_json(x))
    if read_back != p:
        return Counterexample(f"operator for {what} permutes the basis differently",
                              {"operator": what}, grid_map_to_json(p), grid_map_to_json(read_back))
    return None


# ================== Verification ==================

def verify_intertwiner(n: int, m: int, source: RSource = standard_source) -> VerificationReport:
    """R^{(n,m)} phi_{n,m}(x) R^{(n,m)*} == phi^op_{m,n}(x) for every unit x of M_{nm}."""
    _check_dims(n, m)
    get_limits().check_dim(n * m, "intertwiner")
    timer = Timer()
    block = source(n, m)
    r, r_star = block.matrix, mat_adjoint(block.matrix)

    matrix_failure = None
    count = 0
    for i, j in unit_indices(n * m):
        count += 1
        x = mat_unit(n * m, i, j)
        left = mat_mul(mat_mul(r, phi(n, m, x)), r_star)
        right = phi_op(m, n, x)
        if left != right:
            matrix_failure = Counterexample(
                "R phi(x) R* differs from phi^op(x)",
                {"unit": [n * m, i, j]}, matrix_to_json(left), matrix_to_json(right),
            )
            break

    # chi_{n,m} o phi_{n,m}^{-1} == theta_{m,n} o phi_{m,n}^{-1} on row and column labels
    perm_failure = _perm_failure(
        "chi o phi_{n,m}^{-1} differs from theta o phi_{m,n}^{-1}",
        block.perm.compose(phi_map(n, m).inverse()),
        flip_map(m, n).compose(phi_map(m, n).inverse()),
        ("chi_phi", "theta_phi"),
    )
    return dual_path("intertwiner", {"n": n, "m": m}, timer,
                     {"matrix": matrix_failure, "permutation": perm_failure}, count)


def verify_pq_equal(n: int, m: int, l: int) -> VerificationReport:
    """P == Q on F_n x F_m x F_l."""
    _check_dims(n, m, l)
    timer = Timer()
    failure = _perm_failure("P differs from Q", build_P(n, m, l), build_Q(n, m, l), ("P", "Q"))
    return single_path("p_equals_q", {"n": n, "m": m, "l": l}, timer, failure, n * m * l)


def verify_hexagon_left(n: int, m: int, l: int, source: RSource = standard_source) -> VerificationReport:
    """(phi_{n,m} (x) id_l)(R^{(nm,l)}) == R^{(n,l)}_{13} R^{(m,l)}_{23}."""
    _check_dims(n, m, l)
    get_limits().check_dim(n * m * l, "hexagon")
    timer = Timer()
    dims = (n, m, l)

    left = embed_first_leg(MATRIX_SYSTEM, n, m, l, source(n * m, l).matrix)
    right = mat_mul(embed_legs(dims, "13", source(n, l).matrix), embed_legs(dims, "23", source(m, l).matrix))
    p, q = build_P(n, m, l, source), build_Q(n, m, l, source)

    failures = {
        "matrix": _matrix_failure("(phi (x) id)(R) differs from R13 R23", left, right),
        "permutation": _perm_failure("P differs from Q", p, q, ("P", "Q")),
    }
    link = _link_failure(p, left, "P") or _link_failure(q, right, "Q")
    return dual_path("hexagon_left", {"n": n, "m": m, "l": l}, timer, failures, n * m * l, link)


def verify_hexagon_right(n: int, m: int, l: int, source: RSource = standard_source) -> VerificationReport:
    """(id_n (x) phi_{m,l})(R^{(n,ml)}) == R^{(n,l)}_{13} R^{(n,m)}_{12}."""
    _check_dims(n, m, l)
    get_limits().check_dim(n * m * l, "hexagon")
    timer = Timer()
    dims = (n, m, l)

    left = embed_second_leg(MATRIX_SYSTEM, n, m, l, source(n, m * l).matrix)
    right = mat_mul(embed_legs(dims, "13", source(n, l).matrix), embed_legs(dims, "12", source(n, m).matrix))
    p, q = build_P_right(n, m, l, source), build_Q_right(n, m, l, source)

    failures = {
        "matrix": _matrix_failure("(id (x) phi)(R) differs from R13 R12", left, right),
        "permutation": _perm_failure("P' differs from Q'", p, q, ("P_right", "Q_right")),
    }
    link = _link_failure(p, left, "P_right") or _link_failure(q, right, "Q_right")
    return dual_path("hexagon_right", {"n": n, "m": m, "l": l}, timer, failures, n * m * l, link)


def verify_triangularity(n: int, m: int, source: RSource = standard_source) -> VerificationReport:
    """R^{(n,m)} tau_{m,n}(R^{(m,n)}) == I_n (x) I_m, and chi theta chi theta == id."""
    _check_dims(n, m)
    get_limits().check_dim(n * m, "triangularity")
    timer = Timer()
    forward, backward = source(n, m), source(m, n)

    product = mat_mul(forward.matrix, flip(m, n, backward.matrix))
    composite = compose_all(forward.perm, flip_map(m, n), backward.perm, flip_map(n, m))

    failures = {
        "matrix": _matrix_failure("R tau(R) is not the identity", product, identity(n * m)),
        "permutation": _perm_failure("chi theta chi theta is not the identity",
                                     composite, grid_identity((n, m)), ("composite", "identity")),
    }
    link = _link_failure(composite, product, "chi theta chi theta")
    return dual_path("triangularity", {"n": n, "m": m}, timer, failures, n * m, link)


def verify_ybe(n: int, m: int, l: int, source: RSource = standard_source) -> VerificationReport:
    """R_12 R_13 R_23 == R_23 R_13 R_12 on M_n (x) M_m (x) M_l."""
    _check_dims(n, m, l)
    get_limits().check_dim(n * m * l, "Yang-Baxter")
    timer = Timer()
    dims = (n, m, l)

    r12 = embed_legs(dims, "12", source(n, m).matrix)
    r13 = embed_legs(dims, "13", source(n, l).matrix)
    r23 = embed_legs(dims, "23", source(m, l).matrix)
    left = mat_mul(mat_mul(r12, r13), r23)
    right = mat_mul(mat_mul(r23, r13), r12)

    p12 = product_map(source(n, m).perm, _id(l))
    p13 = _r13_perm(source, n, m, l)
    p23 = product_map(_id(n), source(m, l).perm)
    p_left = compose_all(p12, p13, p23)
    p_right = compose_all(p23, p13, p12)

    failures = {
        "matrix": _matrix_failure("R12 R13 R23 differs from R23 R13 R12", left, right),
        "permutation": _perm_failure("composites of R12, R13, R23 differ", p_left, p_right, ("left", "right")),
    }
    link = _link_failure(p_left, left, "R12 R13 R23") or _link_failure(p_right, right, "R23 R13 R12")
    return dual_path("ybe", {"n": n, "m": m, "l": l}, timer, failures, n * m * l, link)


def verify_counit_r(k_max: int, source: RSource = standard_source) -> VerificationReport:
    """(epsilon (x) id)(R) = id = (id (x) epsilon)(R): R^{(1,m)} = R^{(m,1)} = I_m for m <= k_max."""
    if k_max < 1:
        raise DomainError(f"k_max must be positive, got {k_max}")
    timer = Timer()
    failure = None
    for m in range(1, k_max + 1):
        for key in ((1, m), (m, 1)):
            got = source(*key).matrix
            failure = _matrix_failure(f"R^{key} is not the identity", got, identity(m), {"block": list(key)})
            if failure:
                break
        if failure:
            break
    return single_path("counit_r", {"k_max": k_max}, timer, failure, 2 * k_max)


def verify_unitarity(n: int, m: int, source: RSource = standard_source) -> VerificationReport:
    """R^{(n,m)} R^{(n,m)*} == I."""
    _check_dims(n, m)
    timer = Timer()
    r = source(n, m).matrix
    failure = _matrix_failure("R R* is not the identity", mat_mul(r, mat_adjoint(r)), identity(n * m))
    return single_path("unitarity", {"n": n, "m": m}, timer, failure, n * m)


def verify_phi_coherence(n: int, m: int, l: int) -> VerificationReport:
    _check_dims(n, m, l)
    timer = Timer()
    failure = None
    if not phi_coherence(n, m, l):
        left = phi_map(n * m, l).compose(product_map(phi_map(n, m), _id(l)))
        right = phi_map(n, m * l).compose(product_map(_id(n), phi_map(m, l)))
        failure = _perm_failure("phi bijections are not coherent", left, right, ("nm_l", "n_ml"))
    return single_path("phi_coherence", {"n": n, "m": m, "l": l}, timer, failure, n * m * l)


def verify_chi_dual_definition(n: int, m: int) -> VerificationReport:
    """The division-with-remainder table equals theta o phi^{-1} o phi."""
    _check_dims(n, m)
    timer = Timer()
    failure = _perm_failure("chi table differs from the phi composite",
                            chi_table(n, m), chi_via_phi(n, m), ("chi", "chi_via_phi"))
    return single_path("chi_dual_definition", {"n": n, "m": m}, timer, failure, n * m)


def verify_universal_r(n_max: int, source: RSource = standard_source) -> VerificationReport:
    """R Delta(x) R* == Delta^op(x) on whole block families, x a unit of M_a, a <= n_max."""
    if n_max < 1:
        raise DomainError(f"n_max must be positive, got {n_max}")
    get_limits().check_universal_r(n_max)
    timer = Timer()

    failure = None
    count = 0
    for a in range(1, n_max + 1):
        r = r_family(a, source)
        r_star = r.adjoint()
        for i, j in unit_indices(a):
            count += 1
            x = unit_element(a, i, j)
            diff = r.mul(delta(x)).mul(r_star).first_difference(delta_op(x))
            if diff:
                failure = Counterexample("R Delta(x) R* differs from Delta^op(x)",
                                         {"unit": [a, i, j], "block": list(diff[0])})
                break
        if failure:
            break
    return single_path("universal_r", {"n_max": n_max}, timer, failure, count)


def verify_global_triangularity(window: int, source: RSource = standard_source) -> VerificationReport:
    """R tau-tilde(R) == I on every block (n, m) with n, m <= window."""
    if window < 1:
        raise DomainError(f"window must be positive, got {window}")
    timer = Timer()
    r = r_family(window, source)
    ones = BlockFamily(window, {}, lambda n, m: identity(n * m))
    diff = r.mul(extended_flip(r)).first_difference(ones)
    failure = None
    if diff:
        failure = Counterexample("R tau-tilde(R) is not the identity", {"block": list(diff[0])})
    return single_path("global_triangularity", {"window": window}, timer, failure, window * window)
