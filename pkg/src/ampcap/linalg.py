"""Dense linear algebra primitives used throughout the package.

Everything operates on plain numpy arrays. Inputs are validated at the
operation boundary (finite entries, expected shape) and numerically
degenerate matrices raise :class:`RankDeficientError` instead of silently
producing garbage.
"""

import math
from dataclasses import dataclass

import numpy as np

# Condition number (largest over smallest singular value) above which a
# matrix is treated as rank deficient.
CONDITION_LIMIT = 1e12

# 2x2 rotation that plays the role of the imaginary unit under realification.
_J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


class RankDeficientError(np.linalg.LinAlgError):
    """Matrix is singular or too ill-conditioned to treat as full rank."""


def as_real_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a 2-D float64 array with finite entries."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def as_complex_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a 2-D complex128 array with finite entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def _require_square(A: np.ndarray) -> None:
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")


@dataclass(frozen=True)
class Partition:
    """Ordered block sizes splitting an N-dimensional space into K sub-spaces."""

    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes:
            raise ValueError("partition needs at least one block")
        if any(s < 1 for s in sizes):
            raise ValueError("partition sizes must be positive")
        object.__setattr__(self, "sizes", sizes)

    def __len__(self):
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> tuple:
        """Start index of each block; strictly increasing."""
        out, acc = [], 0
        for s in self.sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    def block_slice(self, i: int) -> slice:
        if not 0 <= i < len(self.sizes):
            raise IndexError(f"block index {i} out of range for {len(self.sizes)} blocks")
        start = self.offsets[i]
        return slice(start, start + self.sizes[i])


def realify(Hc) -> np.ndarray:
    """Expand an n x n complex matrix to its 2n x 2n real form.

    Each entry a+bi becomes the 2x2 block [[a, -b], [b, a]], so the real
    matrix acts on interleaved (re, im) coordinate vectors exactly like the
    complex matrix acts on complex vectors.
    """
    A = as_complex_matrix(Hc)
    _require_square(A)
    return np.kron(A.real, np.eye(2)) + np.kron(A.imag, _J2)


def svd(M) -> tuple:
    """Full SVD of a square real matrix.

    Returns ``(s, U, V)`` with singular values ``s`` sorted descending and
    ``M = U @ diag(s) @ V.T``. Non-convergence of the underlying
    factorization raises ``numpy.linalg.LinAlgError``.
    """
    A = as_real_matrix(M)
    _require_square(A)
    U, s, Vt = np.linalg.svd(A)
    return s, U, Vt.T


def singular_values(M) -> np.ndarray:
    """Singular values of ``M``, descending."""
    A = as_real_matrix(M)
    return np.linalg.svd(A, compute_uv=False)


def condition_number(M) -> float:
    """Ratio of extreme singular values; ``inf`` for a singular matrix."""
    s = np.linalg.svd(np.asarray(M), compute_uv=False)
    if s[-1] == 0.0:
        return math.inf
    return float(s[0] / s[-1])


def require_full_rank(M, limit: float = CONDITION_LIMIT) -> None:
    """Raise :class:`RankDeficientError` if ``M`` fails the condition test."""
    c = condition_number(M)
    if not c <= limit:
        raise RankDeficientError(
            f"matrix is rank deficient (condition number {c:.3e} exceeds {limit:.0e})"
        )


def cholesky_lower(S) -> np.ndarray:
    """Lower-triangular L with L @ L.T == S for symmetric positive-definite S."""
    A = as_real_matrix(S)
    _require_square(A)
    scale = float(np.abs(A).max()) if A.size else 0.0
    if not np.allclose(A, A.T, rtol=1e-10, atol=1e-13 * max(scale, 1.0)):
        raise ValueError("matrix must be symmetric")
    try:
        return np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "matrix is not positive definite; not a valid covariance"
        ) from exc


def principal_block(M, partition: Partition, i: int) -> np.ndarray:
    """The i-th main-diagonal block of ``M`` under ``partition`` (0-based)."""
    A = as_real_matrix(M)
    _require_square(A)
    if A.shape[0] != partition.total:
        raise ValueError(
            f"partition covers {partition.total} dimensions but matrix is {A.shape[0]}"
        )
    sl = partition.block_slice(i)
    return A[sl, sl].copy()


def log_det(M) -> float:
    """log |det M| in nats, computed through a stable factorization.

    Raises :class:`RankDeficientError` when the condition number estimate
    exceeds :data:`CONDITION_LIMIT`.
    """
    A = as_real_matrix(M)
    _require_square(A)
    require_full_rank(A)
    sign, logabs = np.linalg.slogdet(A)
    if sign == 0.0:
        raise RankDeficientError("matrix is singular")
    return float(logabs)


def pair_singular_values(values, rtol: float = 1e-8) -> np.ndarray:
    """Collapse singular values occurring in equal consecutive pairs.

    Realified complex matrices have singular values that match two by two;
    this returns one value per pair and rejects inputs whose consecutive
    values differ by more than ``rtol`` relative.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0 or v.size % 2 != 0:
        raise ValueError("expected a non-empty, even-length vector of singular values")
    a, b = v[0::2], v[1::2]
    scale = np.maximum(np.abs(a), np.abs(b))
    bad = np.abs(a - b) > rtol * np.where(scale > 0.0, scale, 1.0)
    if np.any(bad):
        raise ValueError("singular values do not pair up; not a realified matrix")
    return 0.5 * (a + b)
