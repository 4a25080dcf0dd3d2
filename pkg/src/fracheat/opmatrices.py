r"""Bernstein operational matrices for fractional integration and differentiation.

Convention: for an operator :math:`L` acting on the basis vector
:math:`\psi(t)`, the matrix :math:`A` satisfies :math:`L\psi \approx A\psi`, so
row ``i`` of ``A`` holds the L2-projection coefficients of :math:`L B_{i,M}`.
Hence for a coefficient vector ``c``, :math:`L[\psi^T c] \approx \psi^T A^T c`.

Construction is exact up to rounding: ``B_i`` is expanded in monomials via
``conv``, the power rule is applied to each monomial, moments against the
basis come from Beta integrals, and the Gram system turns moments into
coefficients.

The two-dimensional basis is :math:`\hat\psi(x, y) = \psi(x) \otimes \psi(y)`,
i.e. index ``(i, j) -> i * (M + 1) + j`` with ``i`` the x-index.
"""

import csv
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import linalg
from .bernstein import BernsteinBasis, monomial_moment
from .fractional import FracOrder
from .special import gamma, rgamma

__all__ = [
    "OperationalMatrixSet",
    "build_P_alpha",
    "build_D_beta",
    "build_2d_set",
    "axis_swap_permutation",
    "MAX_2D_SIZE",
]

MAX_2D_SIZE = 169


def _power_image_moments(basis, exponent_shift, coefficient):
    """Moments ``b[i, j] = <L B_i, B_j>`` for a power-rule operator ``L``.

    ``L t**k = coefficient(k) * t**(k + exponent_shift)``; terms with a zero
    coefficient are skipped.
    """
    M = basis.M
    b = np.zeros((M + 1, M + 1))
    for k in range(M + 1):
        ck = coefficient(k)
        if ck == 0.0:
            continue
        mom = np.array([monomial_moment(M, j, k + exponent_shift) for j in range(M + 1)])
        b += np.outer(basis.conv[:, k] * ck, mom)
    return b


def build_P_alpha(basis: BernsteinBasis, alpha) -> np.ndarray:
    r"""Fractional integration matrix: :math:`I^\alpha \psi(t) \approx P^\alpha \psi(t)`."""
    a = FracOrder.of(alpha).value
    if not 0 < a <= 1:
        raise ValueError(f"integration order must lie in (0, 1], got {a}")
    b = _power_image_moments(basis, a, lambda k: gamma(k + 1) / gamma(k + 1 + a))
    return basis.project(b.T).T


def build_D_beta(basis: BernsteinBasis, beta) -> np.ndarray:
    r"""Caputo derivative matrix: :math:`{}^C D^\beta \psi(t) \approx D_\beta \psi(t)`.

    Monomials of integer degree below ``n = ceil(beta)`` are annihilated.
    """
    order = FracOrder.of(beta)
    bv, n = order.value, order.n
    if not 0 < bv <= 2:
        raise ValueError(f"derivative order must lie in (0, 2], got {bv}")

    def coef(k):
        return 0.0 if k < n else gamma(k + 1) * rgamma(k + 1 - bv)

    b = _power_image_moments(basis, -bv, coef)
    return basis.project(b.T).T


def axis_swap_permutation(M: int) -> np.ndarray:
    """Permutation matrix ``Pi`` with ``Pi @ (a kron b) == b kron a`` for length ``M + 1`` vectors."""
    m = M + 1
    perm = np.zeros((m * m, m * m))
    for i in range(m):
        for j in range(m):
            perm[j * m + i, i * m + j] = 1.0
    return perm


@dataclass(frozen=True, eq=False)
class OperationalMatrixSet:
    """``P_alpha``, ``D_beta`` and their tensor liftings ``H_x``, ``H_y``."""

    alpha: FracOrder
    beta: FracOrder
    M: int
    P_alpha: np.ndarray
    D_beta: np.ndarray
    H_x: np.ndarray
    H_y: np.ndarray

    def dump_csv(self, directory) -> list:
        """Write each matrix to ``<directory>/<name>.csv``; returns the paths."""
        os.makedirs(directory, exist_ok=True)
        paths = []
        for name in ("P_alpha", "D_beta", "H_x", "H_y"):
            path = os.path.join(directory, f"{name}.csv")
            _write_matrix_csv(path, getattr(self, name))
            paths.append(path)
        return paths


def _write_matrix_csv(path, mat):
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in mat:
                writer.writerow([format(v, ".17g") for v in row])
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def build_2d_set(basis: BernsteinBasis, alpha, beta) -> OperationalMatrixSet:
    """Assemble the matrix set for one ``(alpha, beta, M)``."""
    m = basis.size
    if m * m > MAX_2D_SIZE:
        raise ValueError(f"tensor basis size {m * m} exceeds {MAX_2D_SIZE}")
    alpha, beta = FracOrder.of(alpha), FracOrder.of(beta)
    P = build_P_alpha(basis, alpha)
    D = build_D_beta(basis, beta)
    eye = np.eye(m)
    mats = [P, D, linalg.kron(D, eye), linalg.kron(eye, D)]
    for mat in mats:
        mat.setflags(write=False)
    return OperationalMatrixSet(alpha, beta, basis.M, *mats)
