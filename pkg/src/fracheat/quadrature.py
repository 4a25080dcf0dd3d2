"""Composite Gauss-Legendre quadrature on the unit interval.

Panels are graded geometrically toward both endpoints so that algebraic
endpoint singularities (``w**c`` or ``(1 - w)**c`` with ``c > -1``) are
resolved.  Integrands receive both ``w`` and ``r = 1 - w`` so that they can
form quantities near either endpoint without cancellation.
"""

from functools import lru_cache

import numpy as np

__all__ = [
    "ConvergenceError",
    "graded_rule",
    "integrate_unit",
    "one_minus_power",
    "richardson_derivative",
]

GL_POINTS = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_POINTS)


class ConvergenceError(ArithmeticError):
    """Successive refinements disagree by more than the requested tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@lru_cache(maxsize=64)
def graded_rule(depth: int, sub: int = 1):
    """Nodes ``u`` in ``(0, 1/2)`` and weights for ``int_0^{1/2} F(u) du``.

    Panel edges are ``0, 2**-(depth+1), ..., 1/8, 1/4, 1/2``; every panel is
    split into ``sub`` equal pieces carrying a 16-point Gauss-Legendre rule.
    """
    edges = np.concatenate(([0.0], 0.5 ** np.arange(depth + 1, 0, -1)))
    lo, hi = edges[:-1], edges[1:]
    frac = np.arange(sub + 1) / sub
    sub_lo = (lo[:, None] + (hi - lo)[:, None] * frac[None, :-1]).ravel()
    sub_hi = (lo[:, None] + (hi - lo)[:, None] * frac[None, 1:]).ravel()
    half = 0.5 * (sub_hi - sub_lo)
    mid = 0.5 * (sub_hi + sub_lo)
    u = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    w = (half[:, None] * _GL_W[None, :]).ravel()
    u.setflags(write=False)
    w.setflags(write=False)
    return u, w


def _apply(func, depth, sub):
    u, wt = graded_rule(depth, sub)
    left = np.asarray(func(u, 1.0 - u))
    right = np.asarray(func(1.0 - u, u))
    return left @ wt + right @ wt


def integrate_unit(func, rtol=1e-14, atol=0.0, depth=16, max_depth=1024, raise_on_fail=False):
    """Integrate ``func(w, r)`` over ``w`` in ``[0, 1]`` with ``r = 1 - w``.

    ``func`` is evaluated on whole node arrays; it may return an array with
    extra leading axes (several integrals sharing one rule).  The panel depth
    doubles until two consecutive estimates agree to
    ``max(atol, rtol * |I|)`` in every component.

    Returns ``(estimate, error_estimate)``.
    """
    prev = _apply(func, depth, 1)
    level = 1
    while True:
        depth *= 2
        sub = min(1 + level, 4)
        cur = _apply(func, depth, sub)
        err = np.max(np.abs(cur - prev)) if np.size(cur) else 0.0
        scale = np.max(np.abs(cur)) if np.size(cur) else 0.0
        if not np.all(np.isfinite(cur)):
            raise ConvergenceError("integrand produced non-finite values", cur, np.inf)
        if err <= max(atol, rtol * scale):
            return cur, err
        if depth >= max_depth:
            if raise_on_fail:
                raise ConvergenceError(
                    f"quadrature did not converge (error estimate {err:.3e})", cur, err
                )
            return cur, err
        prev = cur
        level += 1


def one_minus_power(w, r, e):
    """``1 - w**e`` for ``w`` in (0, 1), accurate near both ends.

    ``r`` must equal ``1 - w`` exactly as produced by the quadrature rule.
    """
    w = np.asarray(w)
    r = np.asarray(r)
    with np.errstate(divide="ignore"):
        lw = np.where(r < 0.5, np.log1p(-r), np.log(w))
    return -np.expm1(e * lw)


def default_step(t):
    h = max(1e-4, 1e-3 * t)
    # widest stencil point t - 2h must stay positive
    return min(h, t / 5.0)


def _central(vals, h, n):
    fm2, fm1, f0, fp1, fp2 = vals
    if n == 1:
        return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    if n == 2:
        return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    raise NotImplementedError("finite differences implemented for n <= 2")


def richardson_stencil(t, h):
    """The 15 abscissae used by :func:`richardson_combine` (steps h, h/2, h/4)."""
    offsets = np.arange(-2, 3)
    return np.concatenate([t + offsets * (h / 2**k) for k in range(3)])


def richardson_combine(vals, h, n, tol):
    """n-th derivative from values on :func:`richardson_stencil`.

    Five-point central differences at steps ``h, h/2, h/4`` combined by two
    Richardson levels; raises :class:`ConvergenceError` if the last two
    levels disagree by more than ``tol * max(1, |D|)``.
    """
    vals = np.asarray(vals, dtype=np.float64).reshape(3, 5)
    d = [_central(vals[k], h / 2**k, n) for k in range(3)]
    r1 = (16 * d[1] - d[0]) / 15
    r1b = (16 * d[2] - d[1]) / 15
    r2 = (64 * r1b - r1) / 63
    err = abs(r2 - r1b)
    if err > tol * max(1.0, abs(r2)):
        raise ConvergenceError(
            f"finite-difference refinements disagree by {err:.3e} (tol {tol:.1e}); "
            f"step {h:.3e} may be too large",
            r2,
            err,
        )
    return float(r2)


def richardson_derivative(F, t, n, tol, h=None):
    """n-th derivative of a vectorized ``F`` at ``t``."""
    h = default_step(t) if h is None else h
    return richardson_combine(F(richardson_stencil(t, h)), h, n, tol)
