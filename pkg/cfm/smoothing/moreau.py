"""Moreau envelope value and gradient from an inner solve"""
from typing import Callable, Tuple

import numpy as np

from ..core.errors import ParameterError

InnerSolve = Callable[[np.ndarray], Tuple[np.ndarray, float]]


def moreau_value_grad(inner_solve: InnerSolve, Y: np.ndarray, mu: float) -> Tuple[float, np.ndarray]:
    """h(Y) = min_x f(x) + mu/2 ||x - Y||^2 and its gradient mu (Y - X_Y)

    Args:
        inner_solve: maps Y to (X_Y, f(X_Y)); failures propagate
        Y: prox center
        mu: envelope parameter

    Returns:
        (h(Y), gradient)
    """
    if not mu > 0:
        raise ParameterError("mu must be positive", {"mu": mu})
    Y = np.asarray(Y, dtype=np.float64)
    X, f_value = inner_solve(Y)
    diff = Y - X
    return float(f_value) + 0.5 * mu * float(np.dot(diff, diff)), mu * diff
