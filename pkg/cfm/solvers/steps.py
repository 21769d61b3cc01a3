"""
Step-size machinery shared by all variants
theta/L coupling, backtracking tests, initial Lipschitz estimates and the
weighted gradient sum of N07/TS
"""
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from ..core.errors import ParameterError
from .options import BacktrackMode


def theta_update(theta: float, L: float, L_next: float) -> float:
    """theta_{k+1} = 2 / (1 + sqrt(1 + 4 L_{k+1} / (theta_k^2 L_k)))

    theta = inf (the value before the first iteration or after a restart)
    gives 1.
    """
    if math.isinf(theta):
        return 1.0
    return 2.0 / (1.0 + math.sqrt(1.0 + 4.0 * L_next / (theta * theta * L)))


@dataclass
class BacktrackResult:
    passed: bool
    L_hat: float  # smallest L that passes the test that was used
    L_next: float  # L to retry with (unchanged when passed)
    mode: BacktrackMode


def backtrack_check(
    y: np.ndarray,
    z_next: np.ndarray,
    L: float,
    g_y: float,
    grad_y: np.ndarray,
    g_z: float,
    grad_z: Optional[np.ndarray] = None,
    mode: BacktrackMode = BacktrackMode.HYBRID,
    gamma: float = 1e-6,
    beta: float = 0.5,
    curvature: Optional[float] = None,
) -> BacktrackResult:
    """Test a candidate step and propose the next L on failure

    standard: g(z) <= g(y) + <grad g(y), z - y> + L/2 ||z - y||^2
    stable:   |<y - z, grad g(z) - grad g(y)>| <= L/2 ||z - y||^2
    hybrid:   standard when g(y) - g(z) >= gamma |g(z)|, stable otherwise

    curvature may be given instead of grad_z as <z - y, grad g(z) - grad g(y)>.
    """
    d = z_next - y
    dd = float(np.dot(d, d))
    mode = BacktrackMode(mode)
    used = mode
    if mode == BacktrackMode.HYBRID:
        used = BacktrackMode.STANDARD if g_y - g_z >= gamma * abs(g_z) else BacktrackMode.STABLE
    if dd == 0.0:
        return BacktrackResult(True, 0.0, L, used)
    if used == BacktrackMode.STANDARD:
        L_hat = 2.0 * (g_z - g_y - float(np.dot(grad_y, d))) / dd
    else:
        if curvature is None:
            if grad_z is None:
                raise ParameterError("the stable test needs the gradient at the new point")
            curvature = float(np.dot(d, grad_z - grad_y))
        L_hat = 2.0 * abs(curvature) / dd
    if not math.isfinite(L_hat):
        L_hat = math.inf
    if L >= L_hat:
        return BacktrackResult(True, L_hat, L, used)
    return BacktrackResult(False, L_hat, max(L / beta, L_hat), used)


def estimate_L0(problem, z0: np.ndarray, z1: np.ndarray) -> float:
    """||grad g(z0) - grad g(z1)|| / ||z0 - z1||"""
    dz = float(np.linalg.norm(np.asarray(z0) - np.asarray(z1)))
    if dz == 0.0:
        raise ParameterError("estimate_L0 needs two distinct points")
    _, g0, _ = problem.value_grad(z0)
    _, g1, _ = problem.value_grad(z1)
    return float(np.linalg.norm(g0 - g1)) / dz


class WeightedGradientAccumulator:
    """Running sum S_k = sum_i grad g(y_i) / (L_i theta_i)

    peek() gives the tentative sum for a backtracking trial without changing
    state; commit() makes it permanent once the step is accepted.
    """

    def __init__(self, size: int):
        self.total = np.zeros(size)

    def reset(self) -> None:
        self.total[:] = 0.0

    def peek(self, grad: np.ndarray, L: float, theta: float) -> np.ndarray:
        return self.total + grad / (L * theta)

    def commit(self, grad: np.ndarray, L: float, theta: float) -> np.ndarray:
        self.total += grad / (L * theta)
        return self.total

    def weighted(self, L: float, theta: float) -> np.ndarray:
        """theta^2 L S_k, the linear term of the z-bar subproblem"""
        return theta * theta * L * self.total


def accumulate_weighted_gradient(history: Iterable[Tuple[np.ndarray, float, float]]) -> np.ndarray:
    """theta_k^2 L_k sum_i (L_i theta_i)^-1 grad g(y_i) over (grad, L, theta) triples"""
    acc = None
    L = theta = None
    for grad, L, theta in history:
        grad = np.asarray(grad, dtype=np.float64)
        if acc is None:
            acc = WeightedGradientAccumulator(grad.size)
        acc.commit(grad, L, theta)
    if acc is None:
        raise ParameterError("empty gradient history")
    return acc.weighted(L, theta)
