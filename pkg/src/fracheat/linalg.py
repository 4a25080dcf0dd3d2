"""Dense real linear algebra on small matrices.

Matrices are plain two-dimensional ``float64`` numpy arrays.  The module-wide
vectorization convention is column stacking: ``vec(X)`` lists the columns of
``X`` one after another, so that ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``.
"""

import warnings

import numpy as np
import scipy.linalg

__all__ = [
    "SingularMatrixError",
    "as_matrix",
    "kron",
    "lu_factor",
    "lu_solve",
    "solve",
    "inv",
    "expm",
    "vec",
    "unvec",
    "KRON_MAX_ENTRIES",
]

#: Largest number of entries :func:`kron` will allocate.
KRON_MAX_ENTRIES = 16_000_000

#: Pivots smaller than this times the infinity norm count as zero.
PIVOT_RTOL = 1e-14


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when LU factorization meets a negligible pivot."""

    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2D float64 array."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(x).reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec`."""
    return np.asarray(v).reshape((rows, cols), order="F")


def kron(a, b, max_entries: int = KRON_MAX_ENTRIES) -> np.ndarray:
    """Kronecker product, ``kron(A, B)[i*p + k, j*q + l] = A[i, j] * B[k, l]``."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    size = a.shape[0] * b.shape[0] * a.shape[1] * b.shape[1]
    if size > max_entries:
        raise MemoryError(f"kron result would have {size} entries (cap {max_entries})")
    return np.kron(a, b)


def lu_factor(a):
    """LU factorization with partial pivoting.

    Returns the packed ``(lu, piv)`` pair understood by :func:`lu_solve`.
    Raises :class:`SingularMatrixError` if any pivot magnitude falls below
    ``1e-14 * ||A||_inf``.
    """
    a = as_matrix(a)
    n, m = a.shape
    if n != m or n == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {a.shape}")
    norm = np.linalg.norm(a, np.inf)
    with warnings.catch_warnings():
        # singularity is detected and reported below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if norm == 0.0 or pivots.min() < PIVOT_RTOL * norm:
        with np.errstate(all="ignore"):
            cond = np.linalg.cond(a, 1) if norm > 0 else np.inf
        raise SingularMatrixError(
            f"matrix is singular to working precision "
            f"(min pivot {pivots.min():.3e}, ||A||_inf {norm:.3e}, cond_1 ~ {cond:.3e})",
            cond=cond,
        )
    return lu, piv


def lu_solve(a, b) -> np.ndarray:
    """Solve ``A x = b`` for square ``A`` by partial-pivoting LU."""
    factors = lu_factor(a)
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != factors[0].shape[0]:
        raise ValueError(f"rhs has {b.shape[0]} rows, matrix has {factors[0].shape[0]}")
    return scipy.linalg.lu_solve(factors, b, check_finite=False)


solve = lu_solve


def inv(a) -> np.ndarray:
    a = as_matrix(a)
    return lu_solve(a, np.eye(a.shape[0]))


def expm(a, s: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(s * A)`` for small square ``A`` (n <= 16)."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("expm needs a square matrix")
    if a.shape[0] > 16:
        raise ValueError("expm is limited to n <= 16")
    return scipy.linalg.expm(s * a)
