import io
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from fuzzycg import bench
from fuzzycg.cli import main
from fuzzycg.fixtures import FIXTURES
from fuzzycg.linalg import LinearSystem
from fuzzycg.report import REPORT_SCHEMA, emit_report
from fuzzycg.solver import solve
from fuzzycg.sysfile import save_system
from fuzzycg.tsk import TSKModel


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


# ----- run_fixture --------------------------------------------------------------


def test_run_fixture_fcg_example_1():
    report, verdict = bench.run_fixture(1, "fcg")
    assert verdict.passed and verdict.max_error < 1e-6
    assert verdict.reported_iterations == 3


def test_run_fixture_jacobi_example_2():
    report, verdict = bench.run_fixture(2, "jacobi")
    assert verdict.passed and verdict.max_error <= 5e-5


def test_run_fixture_3_compares_against_published_vector():
    # the published vector is off by ~0.4 in two components; see test_baselines
    _, verdict = bench.run_fixture(3, "svd")
    assert verdict.tolerance == 5e-5
    assert verdict.max_error == pytest.approx(0.4, abs=0.01)
    assert not verdict.passed


@pytest.mark.parametrize("fid", [3, 4])
def test_fcg_and_svd_agree(fid):
    a, _ = bench.run_fixture(fid, "fcg")
    b, _ = bench.run_fixture(fid, "svd")
    np.testing.assert_allclose(a.solution, b.solution, atol=1e-6, rtol=0)


def test_run_fixture_usage_errors():
    with pytest.raises(KeyError):
        bench.run_fixture(5, "fcg")
    with pytest.raises(ValueError):
        bench.run_fixture(1, "newton")


# ----- scaling study -----------------------------------------------------------------


def test_scaling_study_slope():
    res = bench.scaling_study([16, 32, 64, 128], trials=5)
    assert 1.9 <= res.slope <= 2.1
    ratios = np.array(res.flops_per_iteration[1:]) / np.array(res.flops_per_iteration[:-1])
    assert np.all(np.abs(ratios - 4.0) <= 0.4)


def test_scaling_study_small():
    res = bench.scaling_study([2, 4], trials=1)
    assert np.isfinite(res.slope) and res.sizes == [2, 4]
    assert set(res.to_dict()) == {"sizes", "flops_per_iteration", "iterations", "slope", "intercept", "total_flops"}


def test_scaling_study_concurrent_matches_serial():
    a = bench.scaling_study([8, 16], trials=3, seed=7)
    b = bench.scaling_study([8, 16], trials=3, seed=7, workers=4)
    assert a == b


@pytest.mark.parametrize("sizes", [[16], [32, 16], [16, 16]])
def test_scaling_study_rejects_bad_sizes(sizes):
    with pytest.raises(ValueError):
        bench.scaling_study(sizes, trials=1)


def test_flops_per_iteration_is_counted_exactly():
    # one CG pass on an n x n system: 3 products of 2n^2 - n flops plus 12n + 1 vector flops
    n = 10
    rng = np.random.default_rng(3)
    report = solve(bench.random_shifted_system(n, rng))
    for rec in report.trace:
        assert rec.flops == 3 * (2 * n * n - n) + 15 * n + 1


# ----- emit_report ------------------------------------------------------------------


def test_json_report_shape():
    report = solve(FIXTURES[1].system)
    data = json.loads(emit_report(report, "json"))
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["converged"] is True and len(data["solution"]) == 4
    assert data["iterations"] == report.iterations == len(data["trace"])
    assert data["flops"] == {"add": report.flops.additions, "mul": report.flops.multiplications}
    for rec, item in zip(report.trace, data["trace"]):
        assert item == {"k": rec.k, "E": rec.E, "d_norm": rec.d_norm, "alpha": rec.alpha, "beta": rec.beta, "v": rec.v}
    np.testing.assert_array_equal(data["solution"], report.solution)
    assert data["residual_norm"] == report.residual_norm


def test_json_report_for_already_converged_start():
    from fuzzycg.solver import SolverOptions

    report = solve(FIXTURES[1].system, SolverOptions(x0=[1.0, 2.0, 3.0, 0.0]))
    data = json.loads(emit_report(report, "json"))
    assert data["iterations"] == 0 and data["trace"] == []


def test_text_report():
    report = solve(FIXTURES[4].system)
    text = emit_report(report, "text")
    assert "converged     : True" in text
    assert len(text.splitlines()) == 1 + report.iterations + 8
    with pytest.raises(ValueError):
        emit_report(report, "yaml")


@pytest.mark.parametrize("solver", bench.SOLVERS)
def test_json_schema_for_all_combinations(solver, fixture):
    if solver in ("jacobi", "gs") and fixture.system.m != fixture.system.n:
        pytest.skip("stationary methods need square systems")
    report, _ = bench.run_fixture(fixture.id, solver)
    jsonschema.validate(json.loads(emit_report(report, "json")), REPORT_SCHEMA)


# ----- CLI -------------------------------------------------------------------------

EXPECTED_FIXTURE_EXIT = {
    (fid, solver): (2 if solver in ("jacobi", "gs") and fid in (3, 4) else 1 if fid == 3 else 0)
    for fid in FIXTURES
    for solver in bench.SOLVERS
}


@pytest.mark.parametrize("fid, solver", sorted(EXPECTED_FIXTURE_EXIT))
def test_fixture_command_exit_codes(fid, solver):
    code, out = run(["fixture", "--id", str(fid), "--solver", solver, "--json"])
    assert code == EXPECTED_FIXTURE_EXIT[(fid, solver)]
    if code != 2:
        data = json.loads(out)
        jsonschema.validate(data, REPORT_SCHEMA)
        assert data["verdict"]["passed"] is (code == 0)


def test_fixture_command_text():
    code, out = run(["fixture", "--id", "1", "--solver", "gs"])
    assert code == 0
    assert "fixture 1 [gs]: PASS" in out and "published: 7" in out


def test_usage_errors():
    assert run(["fixture", "--id", "9", "--solver", "fcg"])[0] == 2
    assert run(["fixture", "--id", "1", "--solver", "newton"])[0] == 2
    assert run([])[0] == 2
    assert run(["bench", "--sizes", "16"])[0] == 2
    assert run(["bench", "--sizes", "a,b"])[0] == 2


def test_solve_command(tmp_path):
    path = tmp_path / "ex4.txt"
    save_system(path, FIXTURES[4].system)
    code, out = run(["solve", "--input", str(path), "--json"])
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    np.testing.assert_allclose(data["solution"], [1, 2, 3], atol=1e-6)

    code, out = run(["solve", "--input", str(path), "--solver", "svd"])
    assert code == 0 and "solver        : svd" in out


def test_solve_command_non_convergence(tmp_path):
    rng = np.random.default_rng(5)
    Q1, _ = np.linalg.qr(rng.normal(size=(10, 10)))
    Q2, _ = np.linalg.qr(rng.normal(size=(10, 10)))
    A = Q1 @ np.diag(np.logspace(0, 3, 10)) @ Q2.T
    path = tmp_path / "hard.txt"
    save_system(path, LinearSystem(A, rng.normal(size=10)))
    code, out = run(["solve", "--input", str(path), "--epsilon", "1e-15", "--max-restarts", "1", "--json"])
    assert code == 1
    assert json.loads(out)["converged"] is False


def test_solve_command_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n1 0\n0 1\n3\n")
    assert run(["solve", "--input", str(bad)])[0] == 2
    assert "line 4" in capsys.readouterr().err
    assert run(["solve", "--input", str(tmp_path / "missing.txt")])[0] == 2

    rect = tmp_path / "rect.txt"
    save_system(rect, FIXTURES[3].system)
    assert run(["solve", "--input", str(rect), "--solver", "jacobi"])[0] == 2
    assert run(["solve", "--input", str(rect), "--epsilon", "-1"])[0] == 2


def test_solve_command_with_fuzzy_model(tmp_path):
    sys_path = tmp_path / "ex1.txt"
    save_system(sys_path, FIXTURES[1].system)
    model = TSKModel(np.array([[1.0, 2.0, 3.0, 0.0], [0.0, 0.0, 0.0, 0.0]]), np.full((2, 4), 2.0), [0.0, 1.0])
    model_path = tmp_path / "model.json"
    model_path.write_text(model.to_json())

    code, out = run(["solve", "--input", str(sys_path), "--fuzzy-model", str(model_path), "--json"])
    assert code == 0
    data = json.loads(out)
    np.testing.assert_allclose(data["solution"], [1, 2, 3, 0], atol=1e-6)
    assert any(item["v"] < 1.0 for item in data["trace"])

    assert run(["solve", "--input", str(sys_path), "--fuzzy-model", str(model_path), "--solver", "gs"])[0] == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(TSKModel([[0.0]], [[1.0]], [0.0]).to_json())
    assert run(["solve", "--input", str(sys_path), "--fuzzy-model", str(wrong)])[0] == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run(["solve", "--input", str(sys_path), "--fuzzy-model", str(garbage)])[0] == 2


def test_bench_command():
    code, out = run(["bench", "--sizes", "4,8", "--trials", "2", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["sizes"] == [4, 8] and np.isfinite(data["slope"])
    code, out = run(["bench", "--sizes", "4,8", "--trials", "1"])
    assert code == 0 and "log-log slope" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fuzzycg", "fixture", "--id", "4", "--solver", "fcg", "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["converged"] is True
