"""
First-order solver loop
One loop runs all six variants (GRA, N83, TS, AT, LLM, N07) with fixed steps
or backtracking, theta/L coupling and optional restarts
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..core.config import settings
from ..core.errors import DivergenceError, NumericalError, ParameterError
from ..core.metrics import relative_error
from .options import BacktrackMode, SolverOptions, Variant
from .steps import WeightedGradientAccumulator, backtrack_check, estimate_L0, theta_update
from .trace import Trace, TraceRow, fmt_float

logger = logging.getLogger(__name__)


@dataclass
class SolverResult:
    """Final point of a solve

    z is in natural dual coordinates, w in the solver's (scaled) coordinates.
    """

    z: np.ndarray
    x: Optional[np.ndarray]
    trace: Trace
    w: np.ndarray
    iterations: int
    converged: bool
    L: float
    restarts: List[int] = field(default_factory=list)

    @property
    def phi(self) -> Optional[float]:
        return self.trace.last.phi

    def __iter__(self):
        return iter((self.z, self.x, self.trace))


def initial_L(problem, opts: SolverOptions, z0: np.ndarray) -> float:
    """L for fixed steps, or the starting estimate for backtracking"""
    if opts.L is not None:
        return float(opts.L)
    if not opts.backtracking:
        if hasattr(problem, "lipschitz_bound"):
            return float(problem.lipschitz_bound())
        raise ParameterError("fixed step needs L or a problem with a Lipschitz bound")
    rng = np.random.default_rng(opts.seed)
    step = rng.standard_normal(z0.size)
    step *= 1e-2 * max(1.0, float(np.linalg.norm(z0))) / max(float(np.linalg.norm(step)), 1e-300)
    L0 = estimate_L0(problem, z0, z0 + step)
    return L0 if L0 > 0 else 1.0


def counts(problem):
    return problem.op_counts() if hasattr(problem, "op_counts") else (0, 0)


class Monitor:
    """Trace bookkeeping, divergence guard and stopping rule"""

    def __init__(self, problem, opts: SolverOptions, x_ref: Optional[np.ndarray]):
        self.problem = problem
        self.opts = opts
        self.x_ref = x_ref
        self.trace = Trace(variant=opts.variant.value)
        self.scale = None
        self.prox_calls = 0
        self.last_phi = None

    def record(self, k: int, phi: Optional[float], L: float, theta: float, backtracks: int, x: Optional[np.ndarray]) -> None:
        """Append a trace row; phi=None means the objective was not evaluated"""
        fwd, adj = counts(self.problem)
        self.trace.append(
            TraceRow(
                iter=k,
                phi=phi,
                L=L,
                theta=theta,
                backtracks=backtracks,
                fwd=fwd,
                adj=adj,
                prox=self.prox_calls,
                err=relative_error(x, self.x_ref),
            )
        )
        if phi is None:
            return
        if self.scale is None:
            self.scale = max(1.0, abs(phi)) if math.isfinite(phi) else 1.0
        elif math.isnan(phi) or phi > settings.DIVERGENCE_FACTOR * self.scale:
            raise DivergenceError(
                f"{self.opts.variant.value} diverged at iteration {k}: phi={phi:.6g}",
                trace=self.trace,
                detail={"iteration": k, "phi": phi, "scale": self.scale},
            )

    def converged(self, z_old: np.ndarray, z_new: np.ndarray, phi: Optional[float]) -> bool:
        change = float(np.linalg.norm(z_new - z_old)) / max(1.0, float(np.linalg.norm(z_new)))
        done = change <= self.opts.tol
        if self.opts.obj_tol is not None and self.last_phi is not None and phi is not None and math.isfinite(phi):
            done = done or abs(phi - self.last_phi) <= self.opts.obj_tol * max(1.0, abs(phi))
        self.last_phi = phi
        return done


def solve(problem, opts: Optional[SolverOptions] = None, z0: Optional[np.ndarray] = None, x_ref: Optional[np.ndarray] = None) -> SolverResult:
    """Minimize g + h with the selected first-order variant

    Args:
        problem: CompositeDual or another CompositeProblem
        opts: solver options (defaults from settings)
        z0: starting dual point in natural coordinates (zeros by default)
        x_ref: reference primal solution for the err column

    Returns:
        SolverResult with the last iterate, x(z) and the full trace
    """
    opts = opts or SolverOptions()
    if opts.variant == Variant.AT and opts.cached and hasattr(problem, "gbar"):
        from .cached import solve_at_cached

        return solve_at_cached(problem, opts, z0, x_ref)

    variant = opts.variant
    h = problem.h
    z = problem.zeros() if z0 is None else problem.from_z(np.array(z0, dtype=np.float64))
    monitor = Monitor(problem, opts, x_ref)

    L_prev = initial_L(problem, opts, z)
    g_z, _, x_z = problem.value_grad(z)
    monitor.record(0, g_z + h(z), L_prev, 1.0, 0, x_z)

    zbar = z.copy()
    anchor = z.copy()
    acc = WeightedGradientAccumulator(z.size) if variant in (Variant.TS, Variant.N07) else None
    theta_prev = math.inf
    since_restart = 0
    converged = False
    k = 0
    logger.info("%s solve: n=%d, L0=%.4g, %s steps", variant.value, z.size, L_prev, opts.step.value)

    for k in range(1, opts.max_iters + 1):
        if opts.restart and since_restart == opts.restart:
            theta_prev = math.inf
            zbar = z.copy()
            anchor = z.copy()
            if acc is not None:
                acc.reset()
            since_restart = 0
            monitor.trace.restarts.append(k)
        L = opts.alpha * L_prev if opts.backtracking else L_prev
        backtracks = 0
        while True:
            theta = 1.0 if variant == Variant.GRA else theta_update(theta_prev, L_prev, L)
            y = (1.0 - theta) * z + theta * zbar
            g_y, grad_y, x_y = problem.value_grad(y)
            t = 1.0 / L
            if variant == Variant.GRA:
                z_new = h.project(y, grad_y, t)
                zbar_new = z_new
                monitor.prox_calls += 1
            elif variant == Variant.N83:
                z_new = h.project(y, grad_y, t)
                zbar_new = z + (z_new - z) / theta
                monitor.prox_calls += 1
            elif variant in (Variant.AT, Variant.LLM):
                zbar_new = h.project(zbar, grad_y, t / theta)
                monitor.prox_calls += 1
                if variant == Variant.AT:
                    z_new = (1.0 - theta) * z + theta * zbar_new
                else:
                    z_new = h.project(y, grad_y, t)
                    monitor.prox_calls += 1
            else:
                c = theta * theta * L
                zbar_new = h.prox(anchor - acc.peek(grad_y, L, theta), 1.0 / c)
                monitor.prox_calls += 1
                if variant == Variant.TS:
                    z_new = (1.0 - theta) * z + theta * zbar_new
                else:
                    z_new = h.project(y, grad_y, t)
                    monitor.prox_calls += 1

            if not opts.backtracking:
                g_new = x_new = None
                break
            if opts.backtrack_mode == BacktrackMode.STANDARD:
                g_new, grad_new, x_new = problem.value(z_new), None, None
            else:
                g_new, grad_new, x_new = problem.value_grad(z_new)
            check = backtrack_check(
                y, z_new, L, g_y, grad_y, g_new, grad_new,
                mode=opts.backtrack_mode, gamma=opts.gamma, beta=opts.beta,
            )
            if check.passed:
                break
            logger.debug("iter %d: backtrack L %.4g -> %.4g (%s)", k, L, check.L_next, check.mode.value)
            L = check.L_next
            backtracks += 1
            if backtracks > opts.max_backtracks or not math.isfinite(L):
                raise NumericalError(
                    f"backtracking failed at iteration {k}",
                    {"iteration": k, "L": L, "backtracks": backtracks},
                )

        if acc is not None:
            acc.commit(grad_y, L, theta)
        z_old = z
        z, zbar = z_new, zbar_new
        theta_prev, L_prev = theta, L
        since_restart += 1

        if g_new is not None:
            phi = g_new + h(z)
        elif opts.trace_objective:
            phi = bookkeeping_phi(problem, z)
        else:
            phi = None
        if x_new is None and monitor.x_ref is not None:
            x_new = bookkeeping_primal(problem, z)
        monitor.record(k, phi, L, theta, backtracks, x_new)
        if monitor.converged(z_old, z, phi):
            converged = True
            break

    return finish(problem, opts, z, monitor, k, converged, L_prev)


def bookkeeping_phi(problem, w: np.ndarray) -> float:
    """phi(w) without touching the operator counters"""
    op = getattr(problem, "op", None)
    if op is None:
        fwd, adj = counts(problem)
        value = problem.value(w) + problem.h(w)
        if hasattr(problem, "forward_count"):
            problem.forward_count, problem.adjoint_count = fwd, adj
        return value
    with op.paused():
        return problem.value(w) + problem.h(w)


def bookkeeping_primal(problem, w: np.ndarray) -> Optional[np.ndarray]:
    """x(w) without touching the operator counters"""
    if not hasattr(problem, "primal_minimizer"):
        return None
    op = getattr(problem, "op", None)
    if op is None:
        return problem.primal_minimizer(w)
    with op.paused():
        return problem.primal_minimizer(w)


def finish(problem, opts: SolverOptions, w: np.ndarray, monitor: Monitor, k: int, converged: bool, L: float) -> SolverResult:
    x = bookkeeping_primal(problem, w)
    to_z = getattr(problem, "to_z", None)
    z = to_z(w) if to_z else w
    logger.info(
        "%s %s after %d iterations: phi=%s, L=%.4g",
        opts.variant.value,
        "converged" if converged else "stopped",
        k,
        fmt_float(monitor.trace.last.phi) or "untraced",
        L,
    )
    return SolverResult(
        z=z,
        x=x,
        trace=monitor.trace,
        w=w,
        iterations=k,
        converged=converged,
        L=L,
        restarts=list(monitor.trace.restarts),
    )
