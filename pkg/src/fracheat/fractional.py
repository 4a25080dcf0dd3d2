r"""Riemann-Liouville and Caputo calculus on power functions.

Two independent routes are provided.  The analytic route applies the power
rules

.. math::

    D^\alpha t^\mu = \frac{\Gamma(\mu+1)}{\Gamma(\mu+1-\alpha)} t^{\mu-\alpha},
    \qquad
    I^a t^\mu = \frac{\Gamma(\mu+1)}{\Gamma(\mu+1+a)} t^{\mu+a},

term by term to :class:`PolySum3` sums.  The quadrature route evaluates the
defining integrals directly for an arbitrary callable and is used to check
the analytic route and everything built on it.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import integrate_unit, one_minus_power, richardson_derivative
from .special import gamma, rgamma

__all__ = [
    "FracOrder",
    "PolySum3",
    "rl_derivative_power",
    "caputo_derivative_power",
    "rl_integral_power",
    "fractional_integral_quad",
    "rl_derivative_quad",
    "caputo_derivative_quad",
    "caputo_direct_quad",
    "apply_caputo_polysum",
    "apply_rl_integral_polysum",
    "AXES",
]

AXES = ("t", "x", "y")


@dataclass(frozen=True)
class FracOrder:
    """Positive derivative order with its ceiling ``n`` (``n - 1 < value <= n``)."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"order must be positive and finite, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @property
    def n(self) -> int:
        return math.ceil(self.value)

    @property
    def is_integer(self) -> bool:
        return self.value == self.n

    @classmethod
    def of(cls, order) -> "FracOrder":
        return order if isinstance(order, FracOrder) else cls(order)

    def __float__(self):
        return self.value


def _fmt(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class PolySum3:
    """Finite sum of terms ``c * t**p * x**q * y**r``.

    Terms are stored as ``(c, p, q, r)`` tuples, merged on equal exponent
    triples and stripped of zero coefficients; first-occurrence order is kept.
    """

    terms: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for term in self.terms:
            c, p, q, r = (float(v) for v in term)
            if not all(math.isfinite(v) for v in (c, p, q, r)):
                raise ValueError(f"non-finite term {term!r}")
            if min(p, q, r) <= -1:
                raise ValueError(f"exponents must exceed -1, got {term!r}")
            key = (p, q, r)
            merged[key] = merged.get(key, 0.0) + c
        canon = tuple((c, *k) for k, c in merged.items() if c != 0.0)
        object.__setattr__(self, "terms", canon)

    @classmethod
    def parse(cls, text: str) -> "PolySum3":
        """Parse ``"c,p,q,r;c,p,q,r;..."``; an empty string is the zero sum."""
        text = text.strip()
        if not text:
            return cls(())
        terms = []
        for chunk in text.split(";"):
            parts = [s.strip() for s in chunk.split(",")]
            if len(parts) != 4 or not all(parts):
                raise ValueError(f"term {chunk!r} is not of the form c,p,q,r")
            terms.append(tuple(float(s) for s in parts))
        return cls(tuple(terms))

    def serialize(self) -> str:
        return ";".join(",".join(_fmt(v) for v in term) for term in self.terms)

    def __str__(self):
        return self.serialize()

    def __bool__(self):
        return bool(self.terms)

    def __call__(self, t, x, y):
        t, x, y = np.broadcast_arrays(*(np.asarray(v, dtype=np.float64) for v in (t, x, y)))
        out = np.zeros(t.shape)
        for c, p, q, r in self.terms:
            out = out + c * t**p * x**q * y**r
        return out if out.ndim else float(out)

    def __add__(self, other: "PolySum3") -> "PolySum3":
        return PolySum3(self.terms + other.terms)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor: float) -> "PolySum3":
        return PolySum3(tuple((c * factor, p, q, r) for c, p, q, r in self.terms))

    def swap_xy(self) -> "PolySum3":
        return PolySum3(tuple((c, p, r, q) for c, p, q, r in self.terms))

    @property
    def is_nonnegative(self) -> bool:
        return all(min(p, q, r) >= 0 for _, p, q, r in self.terms)


def rl_derivative_power(mu: float, order) -> tuple:
    """Riemann-Liouville derivative of ``t**mu`` as ``(coef, new_exponent)``.

    The coefficient vanishes when ``mu + 1 - alpha`` is a pole of gamma.
    """
    if not mu > -1:
        raise ValueError(f"power must exceed -1, got {mu!r}")
    a = FracOrder.of(order).value
    return gamma(mu + 1) * rgamma(mu + 1 - a), mu - a


def caputo_derivative_power(mu: float, order) -> tuple:
    """Caputo derivative of ``t**mu`` (``mu >= 0``) as ``(coef, new_exponent)``.

    Integer powers below the ceiling ``n`` are annihilated.  Non-integer
    powers need ``mu > n - 1`` for the n-th derivative to be integrable.
    """
    order = FracOrder.of(order)
    if not mu >= 0:
        raise ValueError(f"power must be nonnegative, got {mu!r}")
    a, n = order.value, order.n
    if mu == math.floor(mu) and mu < n:
        return 0.0, mu - a
    if mu <= n - 1:
        raise ValueError(f"Caputo derivative of order {a} undefined for t**{mu}")
    return gamma(mu + 1) * rgamma(mu + 1 - a), mu - a


def rl_integral_power(mu: float, a: float) -> tuple:
    """Riemann-Liouville integral of order ``a`` of ``t**mu``."""
    if not mu > -1:
        raise ValueError(f"power must exceed -1, got {mu!r}")
    if not a > 0:
        raise ValueError(f"integration order must be positive, got {a!r}")
    return gamma(mu + 1) / gamma(mu + 1 + a), mu + a


# ---------------------------------------------------------------- quadrature


def fractional_integral_quad(g: Callable, a: float, t, rtol: float = 1e-14):
    r"""Riemann-Liouville integral :math:`I^a g(t)` by quadrature, ``t > 0``.

    With :math:`s = t(1 - w^{1/a})` the kernel :math:`(t-s)^{a-1}` is absorbed
    and :math:`I^a g(t) = t^a/\Gamma(a+1) \int_0^1 g(s(w))\,dw`.  ``g`` must
    accept numpy arrays; ``t`` may be an array (one shared rule).
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(t <= 0):
        raise ValueError("fractional integral is evaluated for t > 0 only")
    e = 1.0 / a

    def integrand(w, r):
        return g(t[..., None] * one_minus_power(w, r, e))

    val, _ = integrate_unit(integrand, rtol=rtol)
    out = t**a * rgamma(a + 1) * val
    return out if out.ndim else float(out)


def rl_derivative_quad(g: Callable, order, t: float, tol: float = 1e-9) -> float:
    r"""Riemann-Liouville derivative of ``g`` at ``0 < t <= 1`` from its definition.

    Computes :math:`\frac{d^n}{dt^n} I^{n-\alpha} g(t)`; the inner integral by
    graded Gauss-Legendre quadrature, the outer derivative by Richardson
    extrapolated central differences.  ``g`` must accept arrays and be defined
    slightly beyond ``t``.
    """
    order = FracOrder.of(order)
    if not 0 < t <= 1:
        raise ValueError(f"t must lie in (0, 1], got {t!r}")
    n = order.n
    if order.is_integer:
        return richardson_derivative(g, t, n, tol)
    a = n - order.value
    return richardson_derivative(lambda s: fractional_integral_quad(g, a, s), t, n, tol)


def caputo_derivative_quad(
    g: Callable, g_derivs_at_0: Sequence[float], order, t: float, tol: float = 1e-9
) -> float:
    """Caputo derivative through the Riemann-Liouville one.

    Subtracts ``sum_k g^(k)(0) t^(k - alpha) / Gamma(k - alpha + 1)`` over
    ``k < n`` from :func:`rl_derivative_quad`; ``g_derivs_at_0`` holds
    ``g(0), g'(0), ...`` (at least ``n`` values).
    """
    order = FracOrder.of(order)
    n, a = order.n, order.value
    if len(g_derivs_at_0) < n:
        raise ValueError(f"need {n} derivative values at 0, got {len(g_derivs_at_0)}")
    correction = sum(
        g_derivs_at_0[k] * t ** (k - a) * rgamma(k - a + 1) for k in range(n)
    )
    return rl_derivative_quad(g, order, t, tol) - correction


def caputo_direct_quad(g_n: Callable, order, t, rtol: float = 1e-14):
    """Caputo derivative from its own definition, given the n-th derivative ``g_n``."""
    order = FracOrder.of(order)
    if order.is_integer:
        out = np.asarray(g_n(np.asarray(t, dtype=np.float64)), dtype=np.float64)
        return out if out.ndim else float(out)
    return fractional_integral_quad(g_n, order.n - order.value, t, rtol)


# ---------------------------------------------------------------- poly sums


def apply_caputo_polysum(f: PolySum3, axis: str, order) -> PolySum3:
    """Term-wise Caputo derivative of ``f`` along ``axis`` in {"t", "x", "y"}."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    k = AXES.index(axis)
    out = []
    for term in f.terms:
        c, exps = term[0], list(term[1:])
        coef, new = caputo_derivative_power(exps[k], order)
        if coef == 0.0:
            continue
        exps[k] = new
        out.append((c * coef, *exps))
    return PolySum3(tuple(out))


def apply_rl_integral_polysum(f: PolySum3, axis: str, a: float) -> PolySum3:
    """Term-wise Riemann-Liouville integral of order ``a`` along ``axis``."""
    k = AXES.index(axis)
    out = []
    for term in f.terms:
        c, exps = term[0], list(term[1:])
        coef, new = rl_integral_power(exps[k], a)
        exps[k] = new
        out.append((c * coef, *exps))
    return PolySum3(tuple(out))
