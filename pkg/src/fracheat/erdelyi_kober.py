r"""Erdelyi-Kober operators in two similarity variables.

For ``order > 0``

.. math::

    (\mathcal K^{\tau,\delta}_{\gamma_1,\gamma_2}\omega)(z_1, z_2)
      = \frac{1}{\Gamma(\delta)} \int_1^\infty (\theta - 1)^{\delta - 1}
        \theta^{-(\tau+\delta)}\,
        \omega(z_1 \theta^{1/\gamma_1}, z_2 \theta^{1/\gamma_2})\,d\theta,

and :math:`\mathcal K^{\tau,0}\omega = \omega`.  The differential companion
applies Euler-type factors

.. math::

    (\mathcal P\omega) = \prod_{j=0}^{n-1}\Big(c + j - \tfrac{1}{\gamma_1} z_1\partial_{z_1}
        - \tfrac{1}{\gamma_2} z_2\partial_{z_2}\Big)\,\mathcal K^{\tau,\delta}\omega,

where ``c`` defaults to ``tau``.  ``gamma = inf`` switches a variable off
(its scaling and derivative terms vanish).

With the similarity variables :math:`\xi_i = x_i t^{-\beta/\alpha}`, the
Riemann-Liouville derivatives of :math:`u = \omega(\xi_1, \xi_2)` become

.. math::

    D^\alpha_t u = t^{-\alpha}\prod_{j=0}^{n-1}\Big(1-\alpha+j-\tfrac{\beta}{\alpha}
        (\xi_1\partial_{\xi_1}+\xi_2\partial_{\xi_2})\Big)
        \mathcal K^{1,n-\alpha}_{\alpha/\beta,\alpha/\beta}\omega,

    D^\beta_x u = x^{-\beta}\prod_{j=0}^{n-1}\Big(1-\beta+j+\xi_1\partial_{\xi_1}\Big)
        \mathcal K^{1,n-\beta}_{-1,\infty}\omega,

which :func:`verify_time_identity` and :func:`verify_space_identity` check
against the power rule.
"""

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .fractional import rl_derivative_power
from .quadrature import (
    ConvergenceError,
    integrate_unit,
    one_minus_power,
    richardson_combine,
    richardson_stencil,
)
from .special import rgamma

__all__ = [
    "EKParams",
    "SimilarityPoint",
    "IdentityCheck",
    "similarity_vars",
    "ek_K",
    "ek_P",
    "euler_factor_polynomial",
    "verify_time_identity",
    "verify_space_identity",
]

INF = math.inf


def _default_n(order):
    if order == math.floor(order):
        return int(order)
    return math.floor(order) + 1


@dataclass(frozen=True)
class EKParams:
    """Parameters ``(tau, order, gamma1, gamma2)`` and the factor count ``n``.

    ``n`` defaults to ``floor(order) + 1`` for non-integer orders and to
    ``order`` itself for integers.  When the operator comes from a derivative
    of order ``a`` (so ``order = ceil(a) - a``), pass ``n = ceil(a)``.
    """

    tau: float
    order: float
    gamma1: float
    gamma2: float
    n: Optional[int] = None

    def __post_init__(self):
        if not self.order >= 0:
            raise ValueError(f"order must be nonnegative, got {self.order!r}")
        for g in (self.gamma1, self.gamma2):
            if g == 0 or math.isnan(g):
                raise ValueError(f"gamma must be nonzero (or inf), got {g!r}")
        if self.n is None:
            object.__setattr__(self, "n", _default_n(self.order))
        elif int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n!r}")

    @property
    def inv_gamma1(self) -> float:
        return 0.0 if math.isinf(self.gamma1) else 1.0 / self.gamma1

    @property
    def inv_gamma2(self) -> float:
        return 0.0 if math.isinf(self.gamma2) else 1.0 / self.gamma2


class SimilarityPoint(NamedTuple):
    xi1: float
    xi2: float


class IdentityCheck(NamedTuple):
    lhs: float
    rhs: float
    abs_diff: float

    def passed(self, tol: float) -> bool:
        return self.abs_diff <= tol


def similarity_vars(t, x, y, alpha, beta) -> SimilarityPoint:
    """``(x t^(-beta/alpha), y t^(-beta/alpha))`` for ``t > 0``."""
    if not t > 0:
        raise ValueError(f"similarity variables need t > 0, got {t!r}")
    s = t ** (-beta / alpha)
    return SimilarityPoint(x * s, y * s)


def ek_K(params: EKParams, omega: Callable, z1, z2, tol: float = 1e-10):
    """Erdelyi-Kober integral operator applied to ``omega`` at ``(z1, z2)``.

    ``omega`` must accept numpy arrays.  ``z1``, ``z2`` may be arrays; they
    share one quadrature rule.  After ``theta = 1/(1 - v)`` and
    ``v = w**(1/order)`` the integral becomes

        1/Gamma(order + 1) * int_0^1 (1 - v)**(tau - 1) omega(z1 (1-v)**(-1/gamma1), ...) dw

    which is evaluated by graded Gauss-Legendre quadrature.  Raises
    :class:`ConvergenceError` when refinements disagree by more than ``tol``
    or when the integrand does not decay (a non-integrable ``omega``).
    Integrands behaving like ``(1 - v)**c`` with ``c`` close to -1 converge
    slowly and may raise as well.
    """
    z1, z2 = np.broadcast_arrays(np.asarray(z1, dtype=np.float64), np.asarray(z2, dtype=np.float64))
    if params.order == 0:
        out = np.asarray(omega(z1, z2), dtype=np.float64)
        return out if out.ndim else float(out)
    e = 1.0 / params.order
    g1, g2 = params.inv_gamma1, params.inv_gamma2
    tau = params.tau
    # clipping 1 - v at e**floor keeps the scaled arguments finite; the
    # clipped region is integrated separately and must carry negligible mass
    floor = -700.0 / max(1.0, abs(g1), abs(g2), abs(tau - 1.0))

    def integrand(w, r):
        one_minus_v = one_minus_power(w, r, e)
        with np.errstate(divide="ignore"):
            raw = np.log(one_minus_v)
        clipped = raw < floor
        log_rest = np.maximum(raw, floor)
        arg1 = z1[..., None] * np.exp(-g1 * log_rest)
        arg2 = z2[..., None] * np.exp(-g2 * log_rest)
        vals = np.exp((tau - 1.0) * log_rest) * omega(arg1, arg2)
        finite = np.isfinite(vals)
        # overflow can only happen on the clipped tail; it flags divergence there
        tail = np.where(clipped, np.where(finite, vals, np.inf), 0.0)
        return np.stack([np.where(finite, vals, 0.0), tail])

    with np.errstate(over="ignore", invalid="ignore"):
        try:
            both, err = integrate_unit(integrand, rtol=1e-14, atol=0.1 * tol)
        except ConvergenceError as exc:
            raise ConvergenceError(
                "Erdelyi-Kober integrand overflows; omega may not decay fast enough",
                exc.estimate,
                np.inf,
            ) from None
    val, tail = both[0], np.max(np.abs(both[1]))
    if not np.all(np.isfinite(val)) or err > tol or tail > 0.1 * tol:
        raise ConvergenceError(
            f"Erdelyi-Kober integral did not converge (error estimate {max(err, tail):.3e}); "
            "omega may not decay fast enough",
            val,
            max(err, tail),
        )
    out = rgamma(params.order + 1) * val
    return out if out.ndim else float(out)


def euler_factor_polynomial(c: float, n: int) -> np.ndarray:
    """Coefficients ``p_k`` of ``prod_{j<n} (c + j - E) = sum_k p_k E**k``."""
    poly = np.array([1.0])
    for j in range(n):
        poly = np.convolve(poly, [c + j, -1.0])
    return poly


def ek_P(
    params: EKParams,
    omega: Callable,
    z1: float,
    z2: float,
    tol: float = 1e-8,
    h: float = 1e-2,
    factor_tau: Optional[float] = None,
) -> float:
    """Erdelyi-Kober differential operator at one point ``(z1, z2)``.

    ``E = (1/gamma1) z1 d/dz1 + (1/gamma2) z2 d/dz2`` is the derivative along
    ``lam -> (z1 e^(lam/gamma1), z2 e^(lam/gamma2))`` at ``lam = 0``; its powers
    are taken by Richardson-extrapolated central differences of step ``h``
    applied to the quadrature-evaluated ``K``.  The constant of the first
    factor is ``factor_tau`` (default ``params.tau``).
    """
    n = params.n
    if n < 1:
        raise ValueError("the differential operator needs n >= 1")
    if n > 2:
        raise NotImplementedError("Euler factors implemented for n <= 2")
    c = params.tau if factor_tau is None else factor_tau
    poly = euler_factor_polynomial(c, n)
    g1, g2 = params.inv_gamma1, params.inv_gamma2
    if g1 == 0.0 and g2 == 0.0:
        return poly[0] * float(ek_K(params, omega, z1, z2, tol))
    lam = richardson_stencil(0.0, h)
    vals = ek_K(params, omega, z1 * np.exp(g1 * lam), z2 * np.exp(g2 * lam), tol * 1e-3)
    out = poly[0] * vals[2]
    for k in range(1, n + 1):
        out += poly[k] * richardson_combine(vals, h, k, tol)
    return float(out)


def _check_unit(name, v):
    if not 0 < v <= 1:
        raise ValueError(f"{name} must lie in (0, 1], got {v!r}")


def _monomial(p, q):
    def omega(z1, z2):
        return z1**p * z2**q

    return omega


def verify_time_identity(p, q, alpha, beta, t, x, y, tol=1e-6, h=1e-2, literal=False) -> IdentityCheck:
    """Time derivative of ``u = xi1**p * xi2**q`` two ways.

    ``lhs`` applies the power rule to ``u = x^p y^q t^mu`` with
    ``mu = -(p + q) beta / alpha``; ``rhs`` is ``t^-alpha`` times the
    Erdelyi-Kober differential operator with ``tau = 1``,
    ``order = n - alpha``, ``gamma1 = gamma2 = alpha / beta`` and first factor
    constant ``1 - alpha``.  ``literal=True`` uses the first-factor constant
    ``tau = 1`` instead; it disagrees with the power rule and serves as a
    negative control.
    """
    for name, v in (("t", t), ("x", x), ("y", y)):
        _check_unit(name, v)
    if p < 0 or q < 0:
        raise ValueError("monomial exponents must be nonnegative")
    if not 0 < alpha <= 1 or not beta > 0:
        raise ValueError(f"need 0 < alpha <= 1 and beta > 0, got {alpha}, {beta}")
    mu = -(p + q) * beta / alpha
    if not mu > -1:
        raise ValueError(f"need (p + q) beta / alpha < 1, got {-mu}")
    coef, expo = rl_derivative_power(mu, alpha)
    lhs = x**p * y**q * coef * t**expo
    n = math.ceil(alpha)
    gam = alpha / beta
    params = EKParams(1.0, n - alpha, gam, gam, n=n)
    xi = similarity_vars(t, x, y, alpha, beta)
    c = None if literal else 1.0 - alpha
    rhs = t ** (-alpha) * ek_P(params, _monomial(p, q), xi.xi1, xi.xi2, tol=tol * 1e-2, h=h,
                               factor_tau=c)
    return IdentityCheck(lhs, rhs, abs(lhs - rhs))


def verify_space_identity(p, q, alpha, beta, t, x, y, tol=1e-6, h=1e-2, literal=False) -> IdentityCheck:
    """x-derivative of ``u = xi1**p * xi2**q`` two ways.

    ``lhs`` is the power rule for the Riemann-Liouville derivative of order
    ``beta`` of ``x^p`` at fixed ``(t, y)``; ``rhs`` is ``x^-beta`` times the
    Erdelyi-Kober differential operator with ``tau = 1``,
    ``order = n - beta``, ``gamma1 = -1``, ``gamma2 = inf`` and first factor
    constant ``1 - beta``.  ``literal=True`` uses ``gamma1 = 1`` and first
    factor constant ``tau = 1`` (a negative control).
    """
    for name, v in (("t", t), ("x", x), ("y", y)):
        _check_unit(name, v)
    if p < 0 or q < 0:
        raise ValueError("monomial exponents must be nonnegative")
    if not 0 < beta <= 2 or not alpha > 0:
        raise ValueError(f"need alpha > 0 and 0 < beta <= 2, got {alpha}, {beta}")
    c = t ** (-beta / alpha)
    coef, expo = rl_derivative_power(p, beta)
    lhs = c**p * (y * c) ** q * coef * x**expo
    n = math.ceil(beta)
    params = EKParams(1.0, n - beta, 1.0 if literal else -1.0, INF, n=n)
    xi = similarity_vars(t, x, y, alpha, beta)
    c = None if literal else 1.0 - beta
    rhs = x ** (-beta) * ek_P(params, _monomial(p, q), xi.xi1, xi.xi2, tol=tol * 1e-2, h=h,
                              factor_tau=c)
    return IdentityCheck(lhs, rhs, abs(lhs - rhs))
