"""
Smoothed conic duals in composite form
phi(z) = g_s(z) + h(z), where g_s is smooth with gradient A x(z) + b and h is
prox-capable. Per-block step ratios are realised through z_i = s_i * w_i.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ModelError, ParameterError
from ..operators import compose, diagonal, estimate_norm
from ..prox import (
    BlockSeparable,
    BoxLinf,
    ComplexBoxLinf,
    LinearFn,
    NonnegIndicator,
    NonnegLinear,
    NonsmoothFn,
    Rescaled,
    ScaledL1,
    ScaledL2,
    ScaledNuclear,
    Zero,
)
from .conic import ConeBlock, ConicModel

logger = logging.getLogger(__name__)


def block_fn(block: ConeBlock) -> NonsmoothFn:
    """Nonsmooth dual term contributed by one cone block"""
    kind = block.kind
    if kind == "nonneg":
        return NonnegIndicator() if block.linear is None else NonnegLinear(block.linear)
    if kind == "zero":
        return Zero() if block.linear is None else LinearFn(block.linear)
    if block.linear is not None:
        raise ModelError(f"linear dual terms are only supported on nonneg/zero blocks, not {kind!r}")
    if block.radius is not None:
        if kind == "linf":
            return ScaledL1(block.radius)
        if kind == "l2":
            return ScaledL2(block.radius)
        if kind == "operator":
            return ScaledNuclear(block.radius, block.shape)
    else:
        if kind == "l1":
            return BoxLinf(block.weight)
        if kind == "l1_complex":
            return ComplexBoxLinf(block.weight)
    raise ModelError(
        f"cone without implemented split: {kind!r} with {'radius' if block.radius is not None else 'weight'}",
        {"kind": kind},
    )


class CompositeDual:
    """Smoothed dual of a ConicModel at (mu, x0), in scaled coordinates w"""

    def __init__(self, model: ConicModel, mu: float, x0: np.ndarray, scales: Sequence[float]):
        self.model = model
        self.mu = float(mu)
        self.x0 = np.asarray(x0, dtype=np.float64)
        self.x_space = model.x_space
        self.z_space = model.z_space
        self.block_scales = [float(s) for s in scales]
        self.scales = np.concatenate([np.full(b.size, s) for b, s in zip(model.blocks, self.block_scales)])
        fns = [block_fn(b) for b in model.blocks]
        if all(s == 1.0 for s in self.block_scales):
            self.op = model.op
            self.offset = model.offset
        else:
            self.op = compose(diagonal(self.scales), model.op)
            self.op.name = f"S*{model.op.name}"
            self.offset = self.scales * model.offset
            fns = [fn if s == 1.0 else Rescaled(fn, s) for fn, s in zip(fns, self.block_scales)]
        self.h = fns[0] if len(fns) == 1 else BlockSeparable(model.sizes, fns)
        self.objective = model.objective
        self._x0_sq = 0.5 * self.mu * float(np.dot(self.x0, self.x0))
        self._op_norm = None

    @property
    def size(self) -> int:
        return self.z_space.size

    def __repr__(self) -> str:
        return f"CompositeDual({self.model.name}, mu={self.mu:g}, h={self.h})"

    # scaled <-> natural dual coordinates
    def to_z(self, w: np.ndarray) -> np.ndarray:
        return self.scales * w

    def from_z(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z) / self.scales

    def zeros(self) -> np.ndarray:
        return np.zeros(self.size)

    # smooth part in terms of u = A^T w
    def gbar(self, u: np.ndarray) -> Tuple[float, np.ndarray]:
        """Value of g_s without the linear term, and x(w), from u = A^T w"""
        x, env = self.objective.prox_env(self.x0 + u / self.mu, self.mu)
        return env - self._x0_sq, x

    def linear_value(self, w: np.ndarray) -> float:
        return float(np.dot(self.offset, w))

    def primal_minimizer(self, w: np.ndarray) -> np.ndarray:
        """x(w): minimizer of f(x) + mu/2 ||x - x0||^2 - <A x + b, w>"""
        return self.objective.prox(self.x0 + self.op.adjoint(w) / self.mu, self.mu)

    def value(self, w: np.ndarray) -> float:
        return self.gbar(self.op.adjoint(w))[0] + self.linear_value(w)

    def value_grad(self, w: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
        """g_s(w), its gradient A x(w) + b, and x(w)"""
        g, x = self.gbar(self.op.adjoint(w))
        return g + self.linear_value(w), self.op.forward(x) + self.offset, x

    def phi(self, w: np.ndarray) -> float:
        """Composite objective g_s + h"""
        return self.value(w) + self.h(w)

    def op_counts(self) -> Tuple[int, int]:
        return self.op.forward_count, self.op.adjoint_count

    @property
    def svd_calls(self) -> int:
        """SVDs spent evaluating x(w) for a nuclear objective"""
        return self.objective.svd_calls

    def lipschitz_bound(self) -> float:
        """||A||^2 / mu, with ||A|| from power iteration"""
        if self._op_norm is None:
            self._op_norm = estimate_norm(self.op)
        return self._op_norm ** 2 / self.mu


def smooth(
    model: ConicModel,
    mu: float,
    x0: Optional[np.ndarray] = None,
    ratios: Optional[Sequence[float]] = None,
) -> CompositeDual:
    """Install d(x) = ||x - x0||^2 / 2 with weight mu and split the dual

    Args:
        model: conic model
        mu: smoothing parameter, > 0
        x0: prox center (zeros by default)
        ratios: optional step ratio per cone block; block i is stepped with
            ratio_i times the common step

    Returns:
        The composite dual g_s + h
    """
    if not mu > 0:
        raise ParameterError("smoothing parameter mu must be positive", {"mu": mu})
    x0 = model.x_space.zeros() if x0 is None else model.x_space.check(x0, "x0")
    if ratios is None:
        scales = [1.0] * len(model.blocks)
    else:
        if len(ratios) != len(model.blocks):
            raise ParameterError("one step ratio per cone block", {"blocks": len(model.blocks), "ratios": len(ratios)})
        if any(r <= 0 for r in ratios):
            raise ParameterError("step ratios must be positive", {"ratios": list(ratios)})
        scales = [float(np.sqrt(r)) for r in ratios]
    cd = CompositeDual(model, mu, x0, scales)
    logger.debug("smoothed %s at mu=%g, h=%s", model.name, mu, cd.h)
    return cd


def primal_minimizer(cd: CompositeDual, w: np.ndarray) -> np.ndarray:
    return cd.primal_minimizer(w)


def dual_value_grad(cd: CompositeDual, w: np.ndarray) -> Tuple[float, np.ndarray]:
    g, grad, _ = cd.value_grad(w)
    return g, grad
