r"""Bernstein polynomial basis on :math:`[0, 1]`.

The basis of degree :math:`M` is

.. math::

    B_{i,M}(t) = \binom{M}{i} t^i (1 - t)^{M - i}, \qquad i = 0, \dots, M.

Everything here is exact in the sense that no quadrature is used: the Gram
matrix and the monomial moments come from closed-form Beta integrals.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
import scipy.linalg

from . import linalg
from .special import beta

__all__ = [
    "BernsteinBasis",
    "MAX_DEGREE",
    "eval_basis",
    "monomial_moment",
    "moment_vector",
    "project",
]

MAX_DEGREE = 12


def monomial_moment(M: int, j: int, mu: float) -> float:
    r"""Return :math:`\int_0^1 t^\mu B_{j,M}(t)\,dt = \binom{M}{j} B(\mu+j+1, M-j+1)`."""
    if not 0 <= j <= M:
        raise ValueError(f"index j={j} outside 0..{M}")
    if not mu > -1:
        raise ValueError(f"moment exponent must exceed -1, got {mu!r}")
    return comb(M, j) * beta(mu + j + 1, M - j + 1)


def moment_vector(M: int, mu: float) -> np.ndarray:
    """Moments of ``t**mu`` against every basis member of degree ``M``."""
    return np.array([monomial_moment(M, j, mu) for j in range(M + 1)])


def _conversion_matrix(M):
    conv = np.zeros((M + 1, M + 1))
    for i in range(M + 1):
        for k in range(i, M + 1):
            conv[i, k] = (-1) ** (k - i) * comb(M, i) * comb(M - i, k - i)
    return conv


def _gram_matrix(M):
    gram = np.empty((M + 1, M + 1))
    for i in range(M + 1):
        for j in range(M + 1):
            gram[i, j] = comb(M, i) * comb(M, j) / ((2 * M + 1) * comb(2 * M, i + j))
    return gram


@dataclass(frozen=True, eq=False)
class BernsteinBasis:
    """Degree-``M`` Bernstein basis with its monomial and Gram matrices.

    ``conv[i, k]`` is the coefficient of ``t**k`` in ``B_{i,M}`` and
    ``gram[i, j]`` the L2 inner product of ``B_{i,M}`` and ``B_{j,M}``.
    Instances are cached per degree, see :meth:`of_degree`.
    """

    M: int
    conv: np.ndarray = field(init=False, repr=False)
    gram: np.ndarray = field(init=False, repr=False)
    _gram_lu: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.M) != self.M or not 0 <= self.M <= MAX_DEGREE:
            raise ValueError(f"degree must be an integer in 0..{MAX_DEGREE}, got {self.M!r}")
        conv = _conversion_matrix(self.M)
        gram = _gram_matrix(self.M)
        conv.setflags(write=False)
        gram.setflags(write=False)
        object.__setattr__(self, "conv", conv)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "_gram_lu", linalg.lu_factor(gram))

    @staticmethod
    @lru_cache(maxsize=None)
    def of_degree(M: int) -> "BernsteinBasis":
        return BernsteinBasis(M)

    @property
    def size(self) -> int:
        return self.M + 1

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t) -> np.ndarray:
        """Basis values at ``t``.

        A scalar ``t`` gives a vector of length ``M + 1``; an array of shape
        ``s`` gives shape ``s + (M + 1,)``.
        """
        t = np.asarray(t, dtype=np.float64)
        if np.any((t < 0) | (t > 1)) or np.any(np.isnan(t)):
            raise ValueError("Bernstein basis is evaluated on [0, 1] only")
        i = np.arange(self.M + 1)
        binom = np.array([comb(self.M, k) for k in i], dtype=np.float64)
        tt = t[..., None]
        return binom * tt**i * (1.0 - tt) ** (self.M - i)

    def eval_monomial(self, t) -> np.ndarray:
        """Basis values computed through the monomial conversion matrix."""
        t = np.asarray(t, dtype=np.float64)
        powers = t[..., None] ** np.arange(self.M + 1)
        return powers @ self.conv.T

    def project(self, moments) -> np.ndarray:
        """L2-optimal coefficients from the moment vector(s) ``<g, B_j>``.

        ``moments`` may be a vector or a matrix whose columns are moment
        vectors; the Gram system is solved for each column.
        """
        b = np.asarray(moments, dtype=np.float64)
        if b.shape[0] != self.size:
            raise ValueError(f"expected {self.size} moments, got {b.shape[0]}")
        return scipy.linalg.lu_solve(self._gram_lu, b, check_finite=False)

    def power_coefficients(self, mu: float) -> np.ndarray:
        """Projection coefficients of ``t**mu``."""
        return self.project(moment_vector(self.M, mu))

    def monomial_coefficients(self, k: int) -> np.ndarray:
        """Exact coefficients of ``t**k`` (integer ``k <= M``) in this basis."""
        if not 0 <= k <= self.M:
            raise ValueError(f"power {k} not representable at degree {self.M}")
        return np.array(
            [comb(i, k) / comb(self.M, k) for i in range(self.M + 1)], dtype=np.float64
        )


def eval_basis(basis: BernsteinBasis, t) -> np.ndarray:
    return basis.eval(t)


def project(basis: BernsteinBasis, moments) -> np.ndarray:
    return basis.project(moments)
