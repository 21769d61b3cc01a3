"""
AT with cached operator images
Keeps z_A = A^T z and zbar_A = A^T zbar alongside the iterates so that every
pass of the backtracking loop costs one forward and one adjoint application
"""
import logging
import math
from typing import Optional

import numpy as np

from ..core.errors import NumericalError, ParameterError
from .core import Monitor, SolverResult, bookkeeping_primal, finish, initial_L
from .options import SolverOptions, Variant
from .steps import backtrack_check, theta_update

logger = logging.getLogger(__name__)


def solve_at_cached(cd, opts: Optional[SolverOptions] = None, z0: Optional[np.ndarray] = None, x_ref: Optional[np.ndarray] = None) -> SolverResult:
    """AT variant over g(z) = gbar(A^T z) + <b, z>

    Produces the same iterates as the plain AT loop. Trace row 0 includes the
    setup cost (A^T z0 and the initial L estimate).
    """
    opts = opts or SolverOptions()
    if not hasattr(cd, "gbar"):
        raise ParameterError("cached AT needs a problem of the form gbar(A^T z) + <b, z>")
    if opts.variant != Variant.AT:
        opts = opts.model_copy(update={"variant": Variant.AT})
    op, h = cd.op, cd.h
    z = cd.zeros() if z0 is None else cd.from_z(np.array(z0, dtype=np.float64))
    monitor = Monitor(cd, opts, x_ref)

    L_prev = initial_L(cd, opts, z)
    zA = op.adjoint(z)
    gbar_z, x_z = cd.gbar(zA)
    monitor.record(0, gbar_z + cd.linear_value(z) + h(z), L_prev, 1.0, 0, x_z)

    zbar, zbarA = z.copy(), zA.copy()
    theta_prev = math.inf
    since_restart = 0
    converged = False
    k = 0
    logger.info("AT (cached) solve: n=%d, L0=%.4g, %s steps", z.size, L_prev, opts.step.value)

    for k in range(1, opts.max_iters + 1):
        if opts.restart and since_restart == opts.restart:
            theta_prev = math.inf
            zbar, zbarA = z.copy(), zA.copy()
            since_restart = 0
            monitor.trace.restarts.append(k)
        L = opts.alpha * L_prev if opts.backtracking else L_prev
        backtracks = 0
        while True:
            theta = theta_update(theta_prev, L_prev, L)
            y = (1.0 - theta) * z + theta * zbar
            yA = (1.0 - theta) * zA + theta * zbarA
            gbar_y, x_y = cd.gbar(yA)
            grad_y = op.forward(x_y) + cd.offset
            g_y = gbar_y + cd.linear_value(y)

            t = 1.0 / L
            zbar_new = h.project(zbar, grad_y, t / theta)
            monitor.prox_calls += 1
            zbarA_new = op.adjoint(zbar_new)
            z_new = (1.0 - theta) * z + theta * zbar_new
            zA_new = (1.0 - theta) * zA + theta * zbarA_new

            if not opts.backtracking and not opts.trace_objective:
                g_new = x_new = None
                break
            gbar_new, x_new = cd.gbar(zA_new)
            g_new = gbar_new + cd.linear_value(z_new)
            if not opts.backtracking:
                break
            # <z - y, grad g(z) - grad g(y)> computed in the small space
            curvature = float(np.dot(zA_new - yA, x_new - x_y))
            check = backtrack_check(
                y, z_new, L, g_y, grad_y, g_new,
                mode=opts.backtrack_mode, gamma=opts.gamma, beta=opts.beta, curvature=curvature,
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

        z_old = z
        z, zA, zbar, zbarA = z_new, zA_new, zbar_new, zbarA_new
        theta_prev, L_prev = theta, L
        since_restart += 1
        phi = None if g_new is None else g_new + h(z)
        if x_new is None and monitor.x_ref is not None:
            x_new = bookkeeping_primal(cd, z)
        monitor.record(k, phi, L, theta, backtracks, x_new)
        if monitor.converged(z_old, z, phi):
            converged = True
            break

    return finish(cd, opts, z, monitor, k, converged, L_prev)
