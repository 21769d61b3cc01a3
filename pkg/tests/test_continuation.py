import csv
import io

import numpy as np
import pytest

from cfm.continuation import (
    CenterUpdate,
    ContinuationMode,
    ContinuationOptions,
    InnerResult,
    continue_standard,
    run,
    run_continuation,
    solve_reweighted,
)
from cfm.core.errors import ParameterError
from cfm.models import ModelKind, ModelSpec
from cfm.operators import make_dense
from cfm.prox import soft_threshold
from cfm.solvers import SolverOptions, StepPolicy
from cfm.testgen import generate

from .helpers import desk_spec

TARGET = np.array([3.0, -1.0, 0.5, 2.0])


class ClosedForm:
    """argmin 1/2 ||x - a||^2 + mu/2 ||x - Y||^2, recording every call"""

    def __init__(self, a=TARGET):
        self.a = a
        self.calls = []

    def __call__(self, Y, mu, z_warm, tol):
        self.calls.append((Y.copy(), mu, z_warm, tol))
        x = (self.a + mu * Y) / (1.0 + mu)
        return InnerResult(x=x, z=x - self.a, f_value=0.5 * float(np.sum((x - self.a) ** 2)), iterations=1, fwd=2, adj=3)


def errors(result):
    return [float(np.linalg.norm(X - TARGET)) for X in result.iterates]


def test_accelerated_centres_extrapolate():
    opts = ContinuationOptions(mode=ContinuationMode.ACCELERATED, max_outer=5, outer_tol=0.0)
    result = run_continuation(ClosedForm(), np.zeros(4), opts, 1.0)
    X = result.iterates
    np.testing.assert_array_equal(result.centers[0], np.zeros(4))
    np.testing.assert_allclose(result.centers[1], X[0])
    np.testing.assert_allclose(result.centers[2], X[1] + 0.25 * (X[1] - X[0]))
    np.testing.assert_allclose(result.centers[3], X[2] + 0.4 * (X[2] - X[1]))


def test_accelerated_converges_on_closed_form_inner():
    opts = ContinuationOptions(mode=ContinuationMode.ACCELERATED, max_outer=60, outer_tol=0.0)
    result = run_continuation(ClosedForm(), np.zeros(4), opts, 1.0)
    assert errors(result)[-1] < 1e-6


def test_standard_errors_shrink_monotonically():
    opts = ContinuationOptions(max_outer=30, outer_tol=0.0)
    result = run_continuation(ClosedForm(), np.zeros(4), opts, 1.0)
    errs = errors(result)
    assert all(b <= a for a, b in zip(errs, errs[1:]))
    # each recentred step halves the error at mu = 1
    assert errs[1] == pytest.approx(0.5 * errs[0])
    for Y, X in zip(result.centers[1:], result.iterates):
        np.testing.assert_array_equal(Y, X)


def test_fixed_centre_keeps_the_first_centre():
    opts = ContinuationOptions(center=CenterUpdate.FIXED, max_outer=4, outer_tol=0.0)
    result = run_continuation(ClosedForm(), np.ones(4), opts, 1.0)
    for Y in result.centers:
        np.testing.assert_array_equal(Y, np.ones(4))


def test_outer_tolerance_stops_early():
    opts = ContinuationOptions(max_outer=200, outer_tol=1e-6)
    result = run_continuation(ClosedForm(), np.zeros(4), opts, 1.0)
    assert result.converged
    assert len(result.trace.rows) < 200
    np.testing.assert_allclose(result.x, TARGET, atol=1e-5)


def test_inner_tolerance_schedule_and_warm_start():
    inner = ClosedForm()
    opts = ContinuationOptions(inner_tol0=1e-2, tol_factor=2.0, final_tol=1e-4, max_outer=10, outer_tol=0.0)
    run_continuation(inner, np.zeros(4), opts, 1.0)
    tols = [call[3] for call in inner.calls]
    assert tols[:3] == pytest.approx([1e-2, 5e-3, 2.5e-3])
    assert tols[-1] == pytest.approx(1e-4)
    assert opts.inner_tol(50) == 1e-4
    assert inner.calls[0][2] is None
    assert inner.calls[1][2] is not None

    cold = ClosedForm()
    run_continuation(cold, np.zeros(4), opts.model_copy(update={"warm_start": False}), 1.0)
    assert all(call[2] is None for call in cold.calls)


def test_outer_trace_columns():
    opts = ContinuationOptions(mu_factor=0.5, max_outer=4, outer_tol=0.0)
    result = run_continuation(ClosedForm(), np.zeros(4), opts, 2.0, x_ref=TARGET)
    trace = result.trace
    assert trace.column("j") == [0, 1, 2, 3]
    assert trace.column("mu") == pytest.approx([2.0, 1.0, 0.5, 0.25])
    assert trace.column("fwd") == [2, 4, 6, 8]
    assert trace.column("adj") == [3, 6, 9, 12]
    assert trace.column("err")[-1] == pytest.approx(errors(result)[-1] / np.linalg.norm(TARGET))
    X, Y, mu = result.iterates[0], result.centers[0], 2.0
    expected = 0.5 * np.sum((X - TARGET) ** 2) + 0.5 * mu * np.sum((X - Y) ** 2)
    assert trace.rows[0].h_value == pytest.approx(expected)
    lines = trace.to_csv().splitlines()
    assert lines[0] == "j,mu,inner_iters,fwd,adj,h_value,err"
    assert len(lines) == 5


def test_inner_errors_name_the_outer_step():
    def inner(Y, mu, z_warm, tol):
        if mu < 0.3:
            raise ParameterError("inner solve refused")
        return InnerResult(x=Y + 1.0, z=None, f_value=0.0)

    opts = ContinuationOptions(mu_factor=0.5, max_outer=10, outer_tol=0.0)
    with pytest.raises(ParameterError) as info:
        run_continuation(inner, np.zeros(2), opts, 1.0)
    assert info.value.detail["outer_step"] == 2


def test_continuation_options_validation():
    with pytest.raises(ValueError):
        ContinuationOptions(mu_factor=1.5)
    with pytest.raises(ValueError):
        ContinuationOptions(tol_factor=1.0)


def test_run_dispatches_on_mode():
    spec = desk_spec(ModelKind.LASSO)
    solver = SolverOptions(max_iters=50)
    opts = ContinuationOptions(mode=ContinuationMode.ACCELERATED, mu0=0.5, max_outer=3, outer_tol=0.0)
    result = run(spec, opts, solver)
    assert result.trace.mode == "accelerated"
    assert len(result.iterates) == 3
    assert len(result.inner_traces) == 3
    # operator counts accumulate over the outer steps
    fwd = result.trace.column("fwd")
    assert fwd == sorted(fwd) and fwd[0] > 0


def test_reweighted_rounds():
    spec = desk_spec(ModelKind.LASSO)
    opts = ContinuationOptions(mu0=0.5, max_outer=2, outer_tol=0.0)
    results = solve_reweighted(spec, 2, 0.1, opts, SolverOptions(max_iters=100))
    assert len(results) == 3
    assert all(r.x.shape == (spec.n,) for r in results)
    # each round starts from the previous solution
    np.testing.assert_array_equal(results[1].centers[0], results[0].x)


@pytest.mark.slow
def test_standard_continuation_approaches_the_lasso_solution():
    instance = generate("lasso", 20, 60, 4, seed=0)
    spec = ModelSpec(kind=ModelKind.LASSO, A=make_dense(instance.A), y=instance.b, eps=instance.eps)
    opts = ContinuationOptions(mu0=0.05, max_outer=15, outer_tol=0.0, inner_tol0=1e-9, final_tol=1e-10)
    result = continue_standard(spec, opts, SolverOptions(max_iters=5000), x_ref=instance.x_star)
    errs = result.trace.column("err")
    assert all(b <= a + 1e-4 for a, b in zip(errs, errs[1:]))
    assert errs[-1] < errs[0]


class L1Prox:
    """argmin ||x||_1 + mu/2 ||x - Y||^2, whose minimizer over all steps is 0"""

    def __call__(self, Y, mu, z_warm, tol):
        x = soft_threshold(Y, 1.0 / mu)
        return InnerResult(x=x, z=None, f_value=float(np.sum(np.abs(x))), iterations=1)


def first_step_at_optimum(result):
    return next(j for j, X in enumerate(result.iterates) if np.max(np.abs(X)) <= 1e-12)


def test_accelerated_reaches_the_l1_optimum_in_fewer_outer_steps():
    Y0 = np.array([10.0, -6.0, 3.0])
    standard = run_continuation(L1Prox(), Y0, ContinuationOptions(max_outer=12, outer_tol=0.0), 1.0)
    accelerated = run_continuation(
        L1Prox(), Y0, ContinuationOptions(mode=ContinuationMode.ACCELERATED, max_outer=12, outer_tol=0.0), 1.0
    )
    # standard moves each coordinate by 1/mu per step; momentum shortens the walk from 10 steps to 7
    assert first_step_at_optimum(standard) == 9
    assert first_step_at_optimum(accelerated) == 6
    assert all(np.max(np.abs(X)) <= 1e-12 for X in accelerated.iterates[6:])
    assert sum(standard.trace.column("inner_iters")[:10]) > sum(accelerated.trace.column("inner_iters")[:7])


def svd_deltas(result):
    counts = [0] + result.trace.column("svd_calls")
    return [b - a for a, b in zip(counts, counts[1:])]


def test_svd_count_with_fixed_untraced_steps():
    spec = desk_spec(ModelKind.NUCLEAR_LASSO)
    opts = ContinuationOptions(mode=ContinuationMode.ACCELERATED, mu0=0.5, max_outer=3, outer_tol=0.0)
    solver = SolverOptions(step=StepPolicy.FIXED, trace_objective=False, max_iters=40, tol=0.0)
    result = run(spec, opts, solver)
    # one SVD per iteration, one for the starting row and one for the returned x
    assert svd_deltas(result) == [n + 2 for n in result.trace.column("inner_iters")]


def test_svd_count_with_backtracking():
    spec = desk_spec(ModelKind.NUCLEAR_LASSO)
    opts = ContinuationOptions(mu0=0.5, max_outer=2, outer_tol=0.0)
    result = run(spec, opts, SolverOptions(max_iters=30, tol=0.0))
    expected = []
    for trace in result.inner_traces:
        passes = trace.last.iter + sum(trace.column("backtracks"))
        # two for the initial L estimate, two per pass (at y and at the candidate)
        expected.append(2 + 1 + 2 * passes + 1)
    assert svd_deltas(result) == expected


def test_lasso_reports_no_svds():
    opts = ContinuationOptions(mu0=0.5, max_outer=2, outer_tol=0.0)
    result = run(desk_spec(ModelKind.LASSO), opts, SolverOptions(max_iters=20))
    assert result.trace.column("svd_calls") == [0, 0]


def test_outer_trace_csv_without_reference():
    opts = ContinuationOptions(max_outer=2, outer_tol=0.0)
    trace = run_continuation(ClosedForm(), np.zeros(4), opts, 1.0).trace
    rows = list(csv.reader(io.StringIO(trace.to_csv())))
    assert rows[0] == ["j", "mu", "inner_iters", "fwd", "adj", "h_value", "err"]
    assert [r[0] for r in rows[1:]] == ["0", "1"]
    assert all(r[-1] == "" for r in rows[1:])
    assert float(rows[1][5]) == trace.rows[0].h_value
