import json

import numpy as np
import pytest
from click.testing import CliRunner

from cfm.cli import EXIT_ERROR, EXIT_MISSING, main
from cfm.models import ModelKind
from cfm.schemas import dense_problem, load_bundle
from cfm.testgen import certify


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def problem_dir(tmp_path):
    rng = np.random.default_rng(7)
    A = rng.standard_normal((10, 24)) / np.sqrt(10)
    x = np.zeros(24)
    x[[2, 11, 17]] = [1.5, -1.0, 0.7]
    y = A @ x
    delta = 0.05 * float(np.max(np.abs(A.T @ y)))
    problem = dense_problem(ModelKind.DANTZIG, A, y, delta=delta, x_ref=x.tolist())
    (tmp_path / "problem.json").write_text(problem.model_dump_json(by_alias=True))
    config = {"problem": "problem.json", "mu": 0.5, "solver": {"max_iters": 40, "tol": 0.0}}
    (tmp_path / "run.json").write_text(json.dumps(config))
    return tmp_path


def test_missing_config_reports_the_path(runner, tmp_path):
    missing = tmp_path / "nope.json"
    result = runner.invoke(main, ["solve", "--config", str(missing)])
    assert result.exit_code == EXIT_MISSING
    payload = json.loads(result.stdout)
    assert payload["schema"] == "cfm/1"
    assert payload["error"]["code"] == "file_not_found"
    assert payload["error"]["detail"]["path"] == str(missing)


def test_unknown_figure_is_a_usage_error(runner):
    result = runner.invoke(main, ["reproduce", "fig99"])
    assert result.exit_code == 2


def test_solve_writes_a_reproducible_trace(runner, problem_dir):
    first = problem_dir / "out1"
    result = runner.invoke(main, ["solve", "--config", str(problem_dir / "run.json"), "--out", str(first)])
    assert result.exit_code == 0, result.output
    summary = json.loads(result.stdout)
    assert summary["kind"] == "dantzig"
    assert summary["iterations"] == 40
    assert summary["mu"] == 0.5
    assert summary["err"] is not None

    trace = (first / "trace.csv").read_text().splitlines()
    assert trace[0] == "iter,phi,L,theta,backtracks,fwd,adj,prox,err"
    assert len(trace) == summary["iterations"] + 2
    assert (first / "x.cfm").is_file()
    assert json.loads((first / "summary.json").read_text())["iterations"] == 40

    second = problem_dir / "out2"
    result = runner.invoke(main, ["solve", "--config", str(problem_dir / "run.json"), "--out", str(second)])
    assert result.exit_code == 0, result.output
    assert (second / "trace.csv").read_bytes() == (first / "trace.csv").read_bytes()


def test_flags_override_the_config(runner, problem_dir):
    out = problem_dir / "out"
    args = ["solve", "--config", str(problem_dir / "run.json"), "--out", str(out), "--variant", "GRA", "--mu", "0.25"]
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    summary = json.loads(result.stdout)
    assert summary["variant"] == "GRA"
    assert summary["mu"] == 0.25


def test_bench_writes_one_trace_per_variant(runner, problem_dir):
    out = problem_dir / "bench"
    result = runner.invoke(main, ["bench", "--config", str(problem_dir / "run.json"), "--out", str(out)])
    assert result.exit_code == 0, result.output
    summary = json.loads(result.stdout)
    assert len(summary["runs"]) == 6
    assert (out / "trace_AT_backtracking.csv").is_file()
    header = (out / "comparison.csv").read_text().splitlines()[0].split(",")
    assert header[0] == "ops" and len(header) == 7


def test_package_errors_exit_with_code_one(runner, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"problem": "problem.json", "metrics": ["beauty"]}))
    result = runner.invoke(main, ["solve", "--config", str(config)])
    assert result.exit_code == EXIT_ERROR
    assert json.loads(result.stdout)["error"]["code"] == "config_error"


def test_testgen_writes_a_certified_bundle(runner, tmp_path):
    config = tmp_path / "gen.yaml"
    config.write_text("testgen:\n  kind: dantzig\n  m: 10\n  n: 20\n  s: 2\n  delta: 1000000.0\n")
    out = tmp_path / "bundles"
    result = runner.invoke(main, ["testgen", "--config", str(config), "--seed", "4", "--mu", "0.1", "--out", str(out)])
    assert result.exit_code == 0, result.output
    path = result.stdout.strip()
    assert path.endswith("dantzig_4.json")
    instance = load_bundle(path)
    assert certify(instance) == instance.report
    assert instance.smoothed.mu == 0.1
