"""Operator norm estimation by power iteration"""
import logging
from typing import Optional

import numpy as np

from ..core.config import settings
from ..core.errors import ParameterError
from .linop import LinOp

logger = logging.getLogger(__name__)


def estimate_norm(op: LinOp, iters: Optional[int] = None, tol: Optional[float] = None, seed: Optional[int] = None) -> float:
    """Estimate ||A|| by power iteration on A^T A

    Args:
        op: operator to measure (counters are not touched)
        iters: maximum number of iterations
        tol: relative change in the estimate that stops the iteration
        seed: seed of the random start vector

    Returns:
        The spectral norm estimate; 0.0 for the zero operator
    """
    iters = settings.NORM_ITERS if iters is None else iters
    if iters < 0:
        raise ParameterError("power iteration count must be non-negative", {"iters": iters})
    tol = settings.NORM_TOL if tol is None else tol
    rng = np.random.default_rng(settings.SEED if seed is None else seed)
    x = op.in_space.random(rng)
    x /= np.linalg.norm(x)
    estimate = 0.0
    with op.paused():
        for k in range(iters):
            y = op.forward(x)
            w = op.adjoint(y)
            lam = float(np.linalg.norm(w))
            if lam == 0.0:
                logger.debug("%s: power iteration hit the null space, norm is 0", op.name)
                return 0.0
            x = w / lam
            new = np.sqrt(lam)
            if abs(new - estimate) <= tol * new:
                estimate = new
                logger.debug("%s: norm %.12g after %d iterations", op.name, estimate, k + 1)
                break
            estimate = new
        else:
            logger.debug("%s: norm %.12g, iteration cap %d reached", op.name, estimate, iters)
        # Rayleigh quotient of the final iterate
        estimate = max(estimate, float(np.linalg.norm(op.forward(x))))
    return estimate
