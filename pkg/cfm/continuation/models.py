"""
Continuation over model specs
Each outer step smooths the model at (mu_j, Y_j) and runs a first-order solve
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..models import ModelSpec, build, default_mu, reweight
from ..solvers import SolverOptions, solve
from .loop import ContinuationResult, InnerResult, InnerSolve, run_continuation
from .options import ContinuationMode, ContinuationOptions

logger = logging.getLogger(__name__)


def make_inner(spec: ModelSpec, solver_opts: Optional[SolverOptions] = None, x_ref: Optional[np.ndarray] = None) -> InnerSolve:
    """Inner solve for argmin f(x) + mu/2 ||x - Y||^2 subject to the model constraints"""
    base = solver_opts or SolverOptions()

    def inner(Y: np.ndarray, mu: float, z_warm: Optional[np.ndarray], tol: float) -> InnerResult:
        cd = build(spec, mu=mu, x0=Y)
        result = solve(cd, base.model_copy(update={"tol": tol}), z0=z_warm, x_ref=x_ref)
        last = result.trace.last
        with cd.op.paused():
            f_value = cd.model.primal_value(result.x)
        return InnerResult(
            x=result.x,
            z=result.z,
            f_value=f_value,
            iterations=result.iterations,
            fwd=last.fwd,
            adj=last.adj,
            svd_calls=cd.svd_calls,
            trace=result.trace,
        )

    return inner


def _starting_point(spec: ModelSpec, opts: ContinuationOptions) -> Tuple[np.ndarray, float]:
    Y0 = spec.A.in_space.zeros() if spec.x0 is None else np.array(spec.x0, dtype=np.float64)
    mu0 = opts.mu0 or spec.mu or default_mu(spec)
    return Y0, mu0


def continue_standard(
    spec: ModelSpec,
    opts: Optional[ContinuationOptions] = None,
    solver_opts: Optional[SolverOptions] = None,
    x_ref: Optional[np.ndarray] = None,
) -> ContinuationResult:
    opts = (opts or ContinuationOptions()).model_copy(update={"mode": ContinuationMode.STANDARD})
    Y0, mu0 = _starting_point(spec, opts)
    return run_continuation(make_inner(spec, solver_opts), Y0, opts, mu0, x_ref)


def continue_accelerated(
    spec: ModelSpec,
    opts: Optional[ContinuationOptions] = None,
    solver_opts: Optional[SolverOptions] = None,
    x_ref: Optional[np.ndarray] = None,
) -> ContinuationResult:
    opts = (opts or ContinuationOptions()).model_copy(update={"mode": ContinuationMode.ACCELERATED})
    Y0, mu0 = _starting_point(spec, opts)
    return run_continuation(make_inner(spec, solver_opts), Y0, opts, mu0, x_ref)


def run(
    spec: ModelSpec,
    opts: Optional[ContinuationOptions] = None,
    solver_opts: Optional[SolverOptions] = None,
    x_ref: Optional[np.ndarray] = None,
) -> ContinuationResult:
    """Dispatch on opts.mode"""
    opts = opts or ContinuationOptions()
    if opts.mode == ContinuationMode.ACCELERATED:
        return continue_accelerated(spec, opts, solver_opts, x_ref)
    return continue_standard(spec, opts, solver_opts, x_ref)


def solve_reweighted(
    spec: ModelSpec,
    rounds: int,
    eps_w: float,
    opts: Optional[ContinuationOptions] = None,
    solver_opts: Optional[SolverOptions] = None,
    x_ref: Optional[np.ndarray] = None,
) -> List[ContinuationResult]:
    """Full continuation solve, then `rounds` reweighted re-solves warm-started at the last x"""
    results = [run(spec, opts, solver_opts, x_ref)]
    for r in range(rounds):
        spec = reweight(spec, results[-1].x, eps_w).model_copy(update={"x0": results[-1].x})
        logger.info("reweighting round %d of %d", r + 1, rounds)
        results.append(run(spec, opts, solver_opts, x_ref))
    return results
