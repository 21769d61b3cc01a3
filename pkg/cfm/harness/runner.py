"""
Solve runner
Loads a problem, runs one smoothed solve or a continuation, writes the
solution, the traces and summary.json
"""
import logging
import time
from typing import Optional, Tuple

import numpy as np

from ..continuation import ContinuationResult, run
from ..core.errors import ConfigError
from ..core.metrics import relative_error
from ..models import ModelSpec, build, conic_model, default_mu, feasibility, primal_objective
from ..models.spec import IMAGE_KINDS
from ..operators.io import load_matrix
from ..schemas import ProblemFile, RunConfig, Summary
from ..schemas.summary import OpCounts
from ..smoothing import gap_report
from ..solvers import SolverResult, solve
from .metrics import compute_psnr
from .writers import ensure_dir, write_json, write_solution

logger = logging.getLogger(__name__)


def load_problem(config: RunConfig) -> Tuple[ModelSpec, Optional[np.ndarray]]:
    """ModelSpec and reference solution named by a run config"""
    if config.problem is None:
        raise ConfigError("run configuration names no problem file")
    path = config.resolve(config.problem)
    problem = ProblemFile.load(path)
    spec = problem.to_spec(base_dir=path.parent)
    if config.mu is not None:
        spec = spec.model_copy(update={"mu": config.mu})
    if config.x_ref is not None:
        x_ref = load_matrix(config.resolve(config.x_ref)).reshape(-1)
    else:
        x_ref = problem.reference()
    return spec, x_ref


def smoothing_mu(spec: ModelSpec) -> float:
    return spec.mu if spec.mu is not None else default_mu(spec)


def solve_once(spec: ModelSpec, config: RunConfig, x_ref: Optional[np.ndarray]) -> Tuple[SolverResult, float]:
    mu = smoothing_mu(spec)
    cd = build(spec, mu=mu)
    return solve(cd, config.solver, x_ref=x_ref), mu


def solve_continued(spec: ModelSpec, config: RunConfig, x_ref: Optional[np.ndarray]) -> Tuple[ContinuationResult, float]:
    copts = config.continuation
    if copts.mu0 is None:
        copts = copts.model_copy(update={"mu0": smoothing_mu(spec)})
    return run(spec, copts, config.solver, x_ref), copts.mu0


def cmd_solve(config: RunConfig) -> Summary:
    """Solve the configured problem and write x, traces and summary.json under config.out"""
    started = time.perf_counter()
    spec, x_ref = load_problem(config)
    out = ensure_dir(config.out)
    files = {}

    if config.continuation is None:
        result, mu = solve_once(spec, config, x_ref)
        result.trace.to_csv(out / "trace.csv")
        result.trace.to_json(out / "trace.json")
        files.update(trace=str(out / "trace.csv"), trace_json=str(out / "trace.json"))
        x, z = result.x, result.z
        last = result.trace.last
        iterations, outer_steps, converged, phi = result.iterations, 0, result.converged, last.phi
        ops = OpCounts(fwd=last.fwd, adj=last.adj)
    else:
        result, mu = solve_continued(spec, config, x_ref)
        result.trace.to_csv(out / "outer.csv")
        files["outer"] = str(out / "outer.csv")
        for j, trace in enumerate(result.inner_traces):
            trace.to_csv(out / f"inner_{j:03d}.csv")
        x, z = result.x, result.z
        rows = result.trace.rows
        iterations = sum(r.inner_iters for r in rows)
        outer_steps, converged = len(rows), result.converged
        phi = result.inner_traces[-1].last.phi if result.inner_traces else None
        ops = OpCounts(fwd=rows[-1].fwd, adj=rows[-1].adj)

    files.update(write_solution(out, x))
    summary = Summary(
        kind=spec.kind.value,
        name=spec.name,
        variant=config.solver.variant.value,
        continuation=None if config.continuation is None else config.continuation.mode.value,
        mu=mu,
        iterations=iterations,
        outer_steps=outer_steps,
        converged=converged,
        phi=phi,
        ops=ops,
        files=files,
    )
    evaluate(summary, spec, config, x, z, x_ref)
    summary.wall_time = time.perf_counter() - started
    write_json(out / "summary.json", summary)
    logger.info("%s solved in %.3fs, %d iterations", spec.name, summary.wall_time, iterations)
    return summary


def evaluate(summary: Summary, spec: ModelSpec, config: RunConfig, x: np.ndarray, z: Optional[np.ndarray], x_ref: Optional[np.ndarray]) -> None:
    """Fill the configured metrics into the summary"""
    metrics = set(config.metrics)
    if "objective" in metrics:
        summary.objective = primal_objective(spec, x)
    if "feasibility" in metrics:
        feas = feasibility(spec, x)
        summary.feasibility_residual = feas.residual
        summary.feasibility_bound = feas.bound
        summary.feasibility_violation = feas.violation
    if "err" in metrics:
        summary.err = relative_error(x, x_ref)
    if "gap" in metrics and z is not None:
        summary.gap = gap_report(conic_model(spec), x, z).gap
    if "psnr" in metrics and x_ref is not None and spec.kind in IMAGE_KINDS:
        shape = spec.A.in_space.shape
        summary.psnr = compute_psnr(x.reshape(shape, order="F"), x_ref.reshape(shape, order="F"))
