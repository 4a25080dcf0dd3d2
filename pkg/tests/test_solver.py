import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracheat import solver
from fracheat.bernstein import BernsteinBasis
from fracheat.fractional import PolySum3
from fracheat.linalg import SingularMatrixError

EXAMPLE = solver.example_source()
EXACT = solver.example_exact()


@pytest.fixture(scope="module")
def example_solution():
    return solver.solve(solver.ProblemSpec(1.0, 2.0, 4, EXAMPLE))


def test_problem_spec_validation():
    for kwargs in ({"alpha": 1.2}, {"alpha": 0.0}, {"beta": 2.5}, {"M": 0}, {"M": 13}, {"M": 2.5}):
        args = {"alpha": 1.0, "beta": 2.0, "M": 4, "f": EXAMPLE} | kwargs
        with pytest.raises(ValueError):
            solver.ProblemSpec(**args)
    with pytest.raises(ValueError):
        solver.ProblemSpec(1.0, 2.0, 4, PolySum3(((1, 0.5, -0.5, 0),)))
    with pytest.raises(TypeError):
        solver.ProblemSpec(1.0, 2.0, 4, "2,1,3,3")


def test_project_f_reconstructs_example():
    basis = BernsteinBasis.of_degree(4)
    F = solver.project_f(solver.ProblemSpec(1, 2, 4, EXAMPLE), basis)
    g = np.linspace(0, 1, 11)
    t, x, y = np.meshgrid(g, g, g, indexing="ij")
    bxy = np.einsum("...i,...j->...ij", basis.eval(x), basis.eval(y)).reshape(t.shape + (25,))
    recon = np.einsum("...i,ij,...j->...", basis.eval(t), F, bxy)
    assert np.max(np.abs(recon - EXAMPLE(t, x, y))) <= 1e-10


def test_project_f_constant_is_all_ones():
    basis = BernsteinBasis.of_degree(3)
    F = solver.project_f(solver.ProblemSpec(0.5, 1.5, 3, PolySum3(((1, 0, 0, 0),))), basis)
    assert np.allclose(F, 1.0, atol=1e-10)


def test_zero_source_gives_zero():
    sol = solver.solve(solver.ProblemSpec(0.7, 1.3, 3, PolySum3()))
    assert not np.any(sol.K)
    assert sol(0.4, 0.5, 0.6) == 0.0


def test_example_values(example_solution):
    assert example_solution(0.5, 1.0, 1.0) == pytest.approx(0.25, abs=1e-10)
    assert example_solution(1.0, 0.5, 0.5) == pytest.approx(0.015625, abs=1e-10)
    assert example_solution.residual <= 1e-10


def test_error_grid_example(example_solution):
    table = solver.error_grid(example_solution, EXACT, "t", 0.5, 11)
    assert table.shape == (121, 3)
    assert table[:, 2].max() <= 1e-8


def test_error_grid_against_itself_is_zero():
    sol = solver.solve(solver.ProblemSpec(0.8, 1.6, 3, EXAMPLE))
    m = sol.basis.size
    conv = sol.basis.conv
    mono = np.einsum("ia,jb,kc,ijk->abc", conv, conv, conv, sol.U_coeffs.reshape(m, m, m))
    as_poly = PolySum3(tuple((mono[a, b, c], a, b, c) for a, b, c in np.ndindex(mono.shape)))
    table = solver.error_grid(sol, as_poly, "x", 0.3, 5)
    assert table[:, 2].max() <= 1e-11


def test_xy_symmetry_of_slices(example_solution):
    gx = solver.error_grid(example_solution, EXACT, "x", 0.5, 11)
    gy = solver.error_grid(example_solution, EXACT, "y", 0.5, 11)
    assert np.allclose(gx[:, 2], gy[:, 2], atol=1e-13)
    assert gx[:, 2].max() == pytest.approx(gy[:, 2].max(), abs=1e-13)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 1.0), st.floats(0.3, 2.0), st.integers(2, 4))
def test_residual_and_symmetry(alpha, beta, M):
    f = PolySum3(((1, 1, 2, 0), (1, 1, 0, 2), (0.5, 0, 1, 1)))
    sol = solver.solve(solver.ProblemSpec(alpha, beta, M, f))
    assert sol.residual <= 1e-10
    t, x, y = 0.4, 0.3, 0.8
    assert sol(t, x, y) == pytest.approx(sol(t, y, x), abs=1e-9)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.2, 1.0), st.floats(0.3, 2.0))
def test_linearity(alpha, beta):
    f1 = PolySum3(((1, 1, 2, 0),))
    f2 = PolySum3(((-2, 0, 1, 3),))
    s1, s2, s12 = (solver.solve(solver.ProblemSpec(alpha, beta, 3, f)) for f in (f1, f2, f1 + f2))
    g = np.linspace(0, 1, 5)
    assert np.allclose(s1(g, g, g[::-1]) + s2(g, g, g[::-1]), s12(g, g, g[::-1]), atol=1e-9)


def test_initial_condition_exact_when_images_in_span(example_solution):
    report = solver.side_condition_report(example_solution)
    assert set(report) == {"u(0,x,y)", "u(t,0,y)", "u(t,x,0)", "u_x(t,0,y)", "u_y(t,x,0)"}
    assert all(v <= 1e-9 for v in report.values())


def test_evaluate_domain(example_solution):
    with pytest.raises(ValueError):
        example_solution(1.1, 0.5, 0.5)
    with pytest.raises(ValueError):
        solver.error_grid(example_solution, EXACT, "z", 0.5)


def test_singular_system_is_reported(monkeypatch):
    def singular(ops):
        return np.zeros((ops.P_alpha.shape[0] * ops.H_x.shape[0],) * 2)

    monkeypatch.setattr(solver, "_system_matrix", singular)
    with pytest.raises(SingularMatrixError):
        solver.solve(solver.ProblemSpec(0.5, 1.5, 2, EXAMPLE))


def test_write_csv_atomic(tmp_path):
    path = tmp_path / "out.csv"
    solver.write_csv(path, ["a", "b"], [[0.1, 1 / 3]])
    assert path.read_text() == "a,b\n0.10000000000000001,0.33333333333333331\n"
    assert list(tmp_path.iterdir()) == [path]
