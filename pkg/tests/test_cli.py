import csv

import numpy as np
import pytest

from fracheat.cli import main


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_solve_example(tmp_path, capsys):
    out = tmp_path / "u.csv"
    assert main(["solve", "--alpha", "1", "--beta", "2", "--M", "4",
                 "--f", "2,1,3,3;-6,2,1,3;-6,2,3,1", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == ["t", "x", "y", "u"]
    assert data.shape == (11**3, 4)
    t, x, y, u = data.T
    assert np.max(np.abs(u - t**2 * x**3 * y**3)) <= 1e-8
    err = capsys.readouterr().err
    assert "residual_max=" in err and "wall_time=" in err


def test_solve_zero_source(tmp_path):
    out = tmp_path / "u.csv"
    assert main(["solve", "--f", "", "--grid-n", "3", "--out", str(out)]) == 0
    _, data = read_csv(out)
    assert not np.any(data[:, 3])


def test_solve_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["solve", "--alpha", "0.9", "--grid-n", "4", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_dump_matrices(tmp_path):
    assert main(["solve", "--M", "2", "--grid-n", "2", "--out", str(tmp_path / "u.csv"),
                 "--dump-matrices", str(tmp_path / "mats")]) == 0
    assert sorted(p.name for p in (tmp_path / "mats").iterdir()) == [
        "D_beta.csv", "H_x.csv", "H_y.csv", "P_alpha.csv"]


def test_error_slices(tmp_path, capsys):
    maxima = {}
    for axis in ("t", "x", "y"):
        out = tmp_path / f"e_{axis}.csv"
        assert main(["error", "--slice", f"{axis}=0.5", "--out", str(out)]) == 0
        header, data = read_csv(out)
        assert header == ["coord1", "coord2", "value"]
        maxima[axis] = data[:, 2].max()
    assert maxima["t"] <= 1e-8
    assert maxima["x"] == pytest.approx(maxima["y"], abs=1e-13)
    assert "max_error=" in capsys.readouterr().err


def test_error_to_stdout(capsys):
    assert main(["error", "--grid-n", "2", "--slice", "x=1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "coord1,coord2,value" and len(lines) == 5


def test_classify(capsys):
    assert main(["classify", "1", "0", "0", "2", "3"]) == 0
    out = capsys.readouterr().out
    assert "case: 1" in out and "s1=3" in out
    assert main(["classify", "0", "0", "0", "0", "0"]) == 2


@pytest.mark.parametrize("argv", [
    ["solve", "--alpha", "1.5"],
    ["solve", "--beta", "0"],
    ["solve", "--M", "20"],
    ["solve", "--f", "1,2,3"],
    ["error", "--exact", "x"],
])
def test_validation_exit_code(argv, capsys):
    assert main(argv) == 2
    assert "fracheat:" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["error", "--slice", "z=0.5"])
    assert info.value.code == 2


def test_singular_exit_code(monkeypatch):
    from fracheat import solver

    monkeypatch.setattr(solver, "_system_matrix", lambda ops: np.zeros((27, 27)))
    assert main(["solve", "--M", "2", "--grid-n", "2"]) == 3


def test_verify_adjoint(tmp_path):
    out = tmp_path / "adj.csv"
    assert main(["verify", "adjoint", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 105 and all(r["pass"] == "pass" for r in rows)
    assert main(["verify", "adjoint", "--corrupt", "--out", str(out)]) == 1


def test_verify_reduction(tmp_path):
    out = tmp_path / "red.csv"
    assert main(["verify", "reduction", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert rows and all(float(r["diff"]) <= 1e-6 for r in rows)
    assert main(["verify", "reduction", "--corrupt", "--out", str(out)]) == 1
