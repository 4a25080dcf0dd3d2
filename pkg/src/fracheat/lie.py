r"""The five-dimensional symmetry algebra of the fractional heat equation.

Basis (with structure parameters :math:`\alpha, \beta > 0`)::

    X1 = d/dt,  X2 = d/dx,  X3 = d/dy,  X4 = u d/du,
    X5 = alpha t d/dt + beta x d/dx + beta y d/dy

The only nonzero brackets are ``[X1, X5] = alpha X1``, ``[X2, X5] = beta X2``,
``[X3, X5] = beta X3`` and their antisymmetric counterparts.

Elements are coefficient vectors ``a`` with ``X = sum_i a[i] X_{i+1}``.
Public functions take 1-based generator indices.

Two linear actions on coefficient vectors appear:

* :func:`adjoint` is the matrix of ``Ad(exp(s X_i))`` (columns are images of
  basis elements), computed as ``expm(-s ad(X_i))``.
* :func:`reduction_action` is the action used by the eight-case reduction of
  :func:`classify`: the *transposed* adjoint matrix with the step measured in
  units of the structure constant of ``X_i``.  Under it a step along
  ``X_1, X_2, X_3`` shifts the ``X_5`` coefficient, which is what lets the
  reduction remove it.  Under the untransposed adjoint action the ``X_4`` and
  ``X_5`` coefficients are invariants.
"""

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import linalg

__all__ = [
    "DIM",
    "LieElement",
    "GroupWord",
    "CanonicalForm",
    "structure_constants",
    "commutator",
    "ad_matrix",
    "adjoint",
    "lie_series",
    "reduction_action",
    "step_matrix",
    "classify",
    "CASE_PATTERNS",
]

DIM = 5


def _check_params(alpha, beta):
    if not (alpha > 0 and beta > 0 and np.isfinite(alpha) and np.isfinite(beta)):
        raise ValueError(f"structure parameters must be positive, got {alpha!r}, {beta!r}")


def structure_constants(alpha: float, beta: float) -> np.ndarray:
    """Array ``C`` with ``[X_i, X_j] = sum_k C[i, j, k] X_k`` (0-based)."""
    _check_params(alpha, beta)
    C = np.zeros((DIM, DIM, DIM))
    for i, c in ((0, alpha), (1, beta), (2, beta)):
        C[i, 4, i] = c
        C[4, i, i] = -c
    return C


def _index(i):
    if int(i) != i or not 1 <= i <= DIM:
        raise ValueError(f"generator index must be in 1..{DIM}, got {i!r}")
    return int(i) - 1


@dataclass(frozen=True, eq=False)
class LieElement:
    a: np.ndarray
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        a = np.array(self.a, dtype=np.float64).reshape(-1)
        if a.shape != (DIM,) or not np.all(np.isfinite(a)):
            raise ValueError(f"expected {DIM} finite coefficients, got {self.a!r}")
        _check_params(self.alpha, self.beta)
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @classmethod
    def basis(cls, i, alpha=1.0, beta=1.0):
        a = np.zeros(DIM)
        a[_index(i)] = 1.0
        return cls(a, alpha, beta)

    def _same_algebra(self, other):
        if (self.alpha, self.beta) != (other.alpha, other.beta):
            raise ValueError(
                f"elements belong to different algebras: "
                f"{(self.alpha, self.beta)} vs {(other.alpha, other.beta)}"
            )

    def with_coeffs(self, a):
        return LieElement(a, self.alpha, self.beta)

    def __add__(self, other):
        self._same_algebra(other)
        return self.with_coeffs(self.a + other.a)

    def __sub__(self, other):
        self._same_algebra(other)
        return self.with_coeffs(self.a - other.a)

    def __rmul__(self, c):
        return self.with_coeffs(c * self.a)

    def __neg__(self):
        return self.with_coeffs(-self.a)

    def __repr__(self):
        coeffs = ", ".join(f"{v:.6g}" for v in self.a)
        return f"LieElement([{coeffs}], alpha={self.alpha}, beta={self.beta})"

    def __str__(self):
        parts = [f"{v:+.10g}*X{k + 1}" for k, v in enumerate(self.a) if v != 0]
        return " ".join(parts) if parts else "0"


def commutator(X: LieElement, Y: LieElement) -> LieElement:
    """Bilinear bracket ``[X, Y]``."""
    X._same_algebra(Y)
    C = structure_constants(X.alpha, X.beta)
    return X.with_coeffs(np.einsum("i,j,ijk->k", X.a, Y.a, C))


def ad_matrix(i: int, alpha: float, beta: float) -> np.ndarray:
    """Matrix of ``Y -> [X_i, Y]``; column ``j`` holds ``[X_i, X_j]``."""
    return structure_constants(alpha, beta)[_index(i)].T.copy()


def adjoint(i: int, s: float, alpha: float, beta: float) -> np.ndarray:
    """Matrix of ``Ad(exp(s X_i)) = exp(-s ad(X_i))``."""
    return linalg.expm(ad_matrix(i, alpha, beta), -s)


def lie_series(i: int, s: float, alpha: float, beta: float, terms: int = 20, C=None) -> np.ndarray:
    """Truncated series ``sum_k (-s)^k / k! ad(X_i)^k``.

    ``C`` overrides the structure constants (used to build negative controls).
    """
    ad = (C if C is not None else structure_constants(alpha, beta))[_index(i)].T
    out = np.eye(DIM)
    term = np.eye(DIM)
    for k in range(1, terms):
        term = term @ ad
        out = out + (-s) ** k / factorial(k) * term
    return out


def _step_unit(i, alpha, beta):
    return {1: alpha, 2: beta, 3: beta}.get(i, 1.0)


def reduction_action(i: int, s: float, alpha: float, beta: float) -> np.ndarray:
    """Coefficient-vector action of one reduction step along ``X_i``.

    Equals ``adjoint(i, s / c_i).T`` with ``c_1 = alpha``, ``c_2 = c_3 = beta``
    and ``c_4 = c_5 = 1``.  For ``i = 1, 2, 3`` this is the identity except for
    ``a5 -> a5 - s * a_i``.
    """
    i = _index(i) + 1
    return adjoint(i, s / _step_unit(i, alpha, beta), alpha, beta).T


def step_matrix(i: int, s: float) -> np.ndarray:
    """The parameter-free step matrices ``M_i^s`` used in the reduction.

    They coincide with :func:`reduction_action` for ``i = 1..4`` (any
    ``alpha``, ``beta``) and for ``i = 5`` when ``alpha = beta = 1``.
    """
    k = _index(i)
    M = np.eye(DIM)
    if k < 3:
        M[4, k] = -s
    elif k == 4:
        M[0, 0] = M[1, 1] = M[2, 2] = np.exp(s)
    return M


@dataclass(frozen=True)
class GroupWord:
    """Reduction steps ``(i, s)`` applied in order, then scaling by ``sign * scale``.

    ``scale`` is positive; orientation is carried separately by ``sign``.
    """

    steps: tuple = ()
    scale: float = 1.0
    sign: int = 1

    def __post_init__(self):
        if len(self.steps) > DIM:
            raise ValueError("a group word has at most five steps")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale!r}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")

    def matrix(self, alpha: float, beta: float) -> np.ndarray:
        out = np.eye(DIM)
        for i, s in self.steps:
            out = reduction_action(i, s, alpha, beta) @ out
        return self.sign * self.scale * out

    def apply(self, X: LieElement) -> LieElement:
        return X.with_coeffs(self.matrix(X.alpha, X.beta) @ X.a)

    def __str__(self):
        steps = ", ".join(f"s{i}={s:.10g}" for i, s in self.steps) or "identity"
        return f"[{steps}] then scale {self.sign * self.scale:.10g}"


@dataclass(frozen=True)
class CanonicalForm:
    case_id: int
    representative: LieElement
    word: GroupWord = field(default_factory=GroupWord)


# (a1 != 0, a2 != 0, a3 != 0) -> case id
CASE_PATTERNS = {
    (True, False, False): 1,
    (False, False, True): 2,
    (False, True, False): 3,
    (False, False, False): 4,
    (False, True, True): 5,
    (True, False, True): 6,
    (True, True, False): 7,
    (True, True, True): 8,
}


def classify(X: LieElement, eps: float = 1e-12) -> CanonicalForm:
    """Reduce ``X`` to its representative in the one-dimensional optimal system.

    The case is a function of which of ``a1, a2, a3`` exceed ``eps`` in
    magnitude.  Coefficients below ``eps`` are treated as zero in the
    representative; the leading coefficient (``a1`` in cases 1, 6-8, ``a3``
    in case 2, ``a2`` in cases 3 and 5) is normalized to 1.
    """
    a = X.a
    if np.all(np.abs(a) <= eps):
        raise ValueError("cannot classify the zero element")
    nz = tuple(bool(abs(v) > eps) for v in a[:3])
    case = CASE_PATTERNS[nz]
    a1, a2, a3, _, a5 = a

    if case == 4:
        return CanonicalForm(4, X.with_coeffs(np.where(np.abs(a) > eps, a, 0.0)), GroupWord())

    # (generator, numerator sign) per step; the step is sign * a5 / a_generator
    plan, lead_idx = {
        1: (((1, 1),), 0),
        2: (((3, 1),), 2),
        3: (((2, 1),), 1),
        5: (((2, 1), (3, -1)), 1),
        6: (((1, 1), (3, -1)), 0),
        7: (((1, 1), (2, -1)), 0),
        8: (((1, 1), (2, -1)), 0),
    }[case]
    steps = [(i, sgn * a5 / a[i - 1]) for i, sgn in plan]
    lead = a[lead_idx]
    word = GroupWord(tuple(steps), 1.0 / abs(lead), 1 if lead > 0 else -1)
    rep = word.apply(X).a.copy()
    rep[:3][~np.array(nz)] = 0.0
    rep[lead_idx] = 1.0
    if case in (1, 2, 3):
        rep[4] = 0.0
    return CanonicalForm(case, X.with_coeffs(rep), word)
