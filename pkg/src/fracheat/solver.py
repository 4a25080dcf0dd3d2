r"""Spectral solver for the 2D space-time fractional heat equation.

Solves

.. math::

    D^\alpha_t u = D^\beta_x u + D^\beta_y u + f(t, x, y), \qquad (t, x, y) \in [0, 1]^3,

with zero initial data.  The Caputo time derivative is expanded as
:math:`\psi^T(t) K \hat\psi(x, y)`; integrating in time gives
:math:`u \approx \psi^T P^{\alpha T} K \hat\psi`, and equating coefficients
yields the matrix equation

.. math::

    K - P^{\alpha T} K (H^{(\beta,x)} + H^{(\beta,y)}) = F,

which is vectorized (column stacking) into
:math:`(I - H^T \otimes P^{\alpha T})\,\mathrm{vec}(K) = \mathrm{vec}(F)` and
solved densely.
"""

import csv
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import linalg
from .bernstein import MAX_DEGREE, BernsteinBasis, moment_vector
from .fractional import AXES, FracOrder, PolySum3
from .opmatrices import OperationalMatrixSet, build_2d_set

__all__ = [
    "ProblemSpec",
    "SpectralSolution",
    "project_f",
    "solve",
    "evaluate",
    "error_grid",
    "solution_grid",
    "side_condition_report",
    "write_csv",
    "example_source",
    "example_exact",
]


def example_source() -> PolySum3:
    """Source term ``2 t x^3 y^3 - 6 t^2 x y^3 - 6 t^2 x^3 y``."""
    return PolySum3(((2, 1, 3, 3), (-6, 2, 1, 3), (-6, 2, 3, 1)))


def example_exact() -> PolySum3:
    """Exact solution ``t^2 x^3 y^3`` for ``alpha = 1``, ``beta = 2``."""
    return PolySum3(((1, 2, 3, 3),))


@dataclass(frozen=True)
class ProblemSpec:
    alpha: FracOrder
    beta: FracOrder
    M: int
    f: PolySum3

    def __post_init__(self):
        object.__setattr__(self, "alpha", FracOrder.of(self.alpha))
        object.__setattr__(self, "beta", FracOrder.of(self.beta))
        if not 0 < self.alpha.value <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha.value}")
        if not 0 < self.beta.value <= 2:
            raise ValueError(f"beta must lie in (0, 2], got {self.beta.value}")
        if int(self.M) != self.M or not 1 <= self.M <= MAX_DEGREE:
            raise ValueError(f"M must be an integer in 1..{MAX_DEGREE}, got {self.M!r}")
        if not isinstance(self.f, PolySum3):
            raise TypeError("f must be a PolySum3")
        if not self.f.is_nonnegative:
            raise ValueError("source term exponents must be nonnegative")


@dataclass(frozen=True, eq=False)
class SpectralSolution:
    alpha: FracOrder
    beta: FracOrder
    M: int
    K: np.ndarray
    U_coeffs: np.ndarray
    F: np.ndarray
    basis: BernsteinBasis
    ops: OperationalMatrixSet
    residual: float

    def __call__(self, t, x, y):
        return evaluate(self, t, x, y)


def project_f(spec: ProblemSpec, basis: BernsteinBasis) -> np.ndarray:
    r"""Coefficients ``F`` with :math:`f \approx \psi^T(t) F \hat\psi(x, y)`.

    For each term the three one-dimensional moment vectors are projected
    separately, which equals :math:`G^{-1} B (G \otimes G)^{-1}` for the full
    moment tensor ``B``.
    """
    M = basis.M
    F = np.zeros((M + 1, (M + 1) ** 2))
    for c, p, q, r in spec.f.terms:
        ct = basis.project(moment_vector(M, p))
        cx = basis.project(moment_vector(M, q))
        cy = basis.project(moment_vector(M, r))
        F += c * np.outer(ct, np.kron(cx, cy))
    return F


def _system_matrix(ops: OperationalMatrixSet) -> np.ndarray:
    H = ops.H_x + ops.H_y
    n = ops.P_alpha.shape[0] * H.shape[0]
    return np.eye(n) - linalg.kron(H.T, ops.P_alpha.T)


def matrix_residual(K, F, ops: OperationalMatrixSet) -> float:
    """Max-norm of ``K - P^T K (H_x + H_y) - F``."""
    R = K - ops.P_alpha.T @ K @ (ops.H_x + ops.H_y) - F
    return float(np.max(np.abs(R))) if R.size else 0.0


def solve(spec: ProblemSpec) -> SpectralSolution:
    """Assemble and solve the coefficient equation for ``spec``.

    Raises :class:`fracheat.linalg.SingularMatrixError` (carrying a condition
    estimate) when the vectorized system is singular.
    """
    basis = BernsteinBasis.of_degree(spec.M)
    ops = build_2d_set(basis, spec.alpha, spec.beta)
    F = project_f(spec, basis)
    m = basis.size
    A = _system_matrix(ops)
    K = linalg.unvec(linalg.lu_solve(A, linalg.vec(F)), m, m * m)
    U = ops.P_alpha.T @ K
    for arr in (K, U, F):
        arr.setflags(write=False)
    return SpectralSolution(
        spec.alpha, spec.beta, spec.M, K, U, F, basis, ops, matrix_residual(K, F, ops)
    )


def _check_cube(*coords):
    for c in coords:
        c = np.asarray(c)
        if np.any(np.isnan(c)) or np.any((c < 0) | (c > 1)):
            raise ValueError("evaluation points must lie in the unit cube")


def evaluate(sol: SpectralSolution, t, x, y):
    r""":math:`u(t, x, y) = \psi(t)^T U \hat\psi(x, y)`, vectorized over broadcastable inputs."""
    _check_cube(t, x, y)
    t, x, y = np.broadcast_arrays(*(np.asarray(v, dtype=np.float64) for v in (t, x, y)))
    bt = sol.basis.eval(t)
    bx = sol.basis.eval(x)
    by = sol.basis.eval(y)
    m = sol.basis.size
    bxy = (bx[..., :, None] * by[..., None, :]).reshape(bx.shape[:-1] + (m * m,))
    out = np.einsum("...i,ij,...j->...", bt, sol.U_coeffs, bxy)
    return out if out.ndim else float(out)


def _slice_axes(slice_axis):
    if slice_axis not in AXES:
        raise ValueError(f"slice axis must be one of {AXES}, got {slice_axis!r}")
    return [a for a in AXES if a != slice_axis]


def _slice_points(slice_axis, value, n):
    if not 0 <= value <= 1:
        raise ValueError(f"slice value must lie in [0, 1], got {value}")
    if n < 2:
        raise ValueError("grid needs at least two points per axis")
    free = _slice_axes(slice_axis)
    g = np.linspace(0.0, 1.0, n)
    c1, c2 = np.meshgrid(g, g, indexing="ij")
    pts = {slice_axis: np.full(c1.shape, float(value)), free[0]: c1, free[1]: c2}
    return c1.ravel(), c2.ravel(), pts


def solution_grid(sol: SpectralSolution, slice_axis: str, value: float, n: int = 11) -> np.ndarray:
    """``(n*n, 3)`` table ``coord1, coord2, u`` on a slice, row-major over the grid."""
    c1, c2, pts = _slice_points(slice_axis, value, n)
    u = evaluate(sol, pts["t"], pts["x"], pts["y"]).ravel()
    return np.column_stack([c1, c2, u])


def error_grid(
    sol: SpectralSolution, exact: PolySum3, slice_axis: str, value: float, n: int = 11
) -> np.ndarray:
    """``(n*n, 3)`` table ``coord1, coord2, |u_num - u_exact|`` on a slice.

    The free coordinates are the two remaining axes in ``t, x, y`` order.
    """
    c1, c2, pts = _slice_points(slice_axis, value, n)
    num = evaluate(sol, pts["t"], pts["x"], pts["y"]).ravel()
    ref = np.asarray(exact(pts["t"], pts["x"], pts["y"])).ravel()
    return np.column_stack([c1, c2, np.abs(num - ref)])


def volume_grid(sol: SpectralSolution, n: int = 11) -> np.ndarray:
    """``(n**3, 4)`` table ``t, x, y, u`` over the uniform grid on the cube."""
    g = np.linspace(0.0, 1.0, n)
    t, x, y = np.meshgrid(g, g, g, indexing="ij")
    u = evaluate(sol, t, x, y)
    return np.column_stack([t.ravel(), x.ravel(), y.ravel(), np.ravel(u)])


def _basis_derivative_at(basis, t):
    k = np.arange(1, basis.M + 1)
    return basis.conv[:, 1:] @ (k * np.asarray(t, dtype=np.float64) ** (k - 1))


def side_condition_report(sol: SpectralSolution, n: int = 11) -> dict:
    """Max violation of each zero side condition on an ``n x n`` grid.

    Only ``u(0, x, y) = 0`` is built into the scheme; the remaining four are
    checked after the fact and reported, not enforced.
    """
    g = np.linspace(0.0, 1.0, n)
    a, b = np.meshgrid(g, g, indexing="ij")
    m = sol.basis.size
    U3 = sol.U_coeffs.reshape(m, m, m)
    dx0 = _basis_derivative_at(sol.basis, 0.0)
    bt, bx, by = sol.basis.eval(a), sol.basis.eval(b), sol.basis.eval(b)
    u_x0 = np.einsum("...i,ijk,j,...k->...", bt, U3, dx0, by)
    u_y0 = np.einsum("...i,ijk,...j,k->...", bt, U3, bx, dx0)
    return {
        "u(0,x,y)": float(np.max(np.abs(evaluate(sol, 0.0, a, b)))),
        "u(t,0,y)": float(np.max(np.abs(evaluate(sol, a, 0.0, b)))),
        "u(t,x,0)": float(np.max(np.abs(evaluate(sol, a, b, 0.0)))),
        "u_x(t,0,y)": float(np.max(np.abs(u_x0))),
        "u_y(t,x,0)": float(np.max(np.abs(u_y0))),
    }


def write_csv(path, header, rows) -> None:
    """Write rows atomically (temp file + rename) with 17 significant digits."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([format(float(v), ".17g") for v in row])
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
