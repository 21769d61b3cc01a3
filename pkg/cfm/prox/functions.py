"""
Nonsmooth functions with generalized projections
Each NonsmoothFn evaluates h(z) (possibly +inf) and solves
argmin_z h(z) + ||z - z0||^2 / (2t) + <g, z>
"""
from typing import Optional, Sequence, Tuple

import numpy as np

from ..core.errors import DimensionError, ParameterError
from . import operators as ops

FEAS_TOL = 1e-12


def _complex(v: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(v).view(np.complex128)


def _real(z: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(z, dtype=np.complex128).view(np.float64)


class NonsmoothFn:
    """Prox-capable function on flat float64 elements"""

    name = "h"

    def __call__(self, z: np.ndarray) -> float:
        raise NotImplementedError

    def prox(self, v: np.ndarray, t: float) -> np.ndarray:
        """argmin_z h(z) + ||z - v||^2 / (2t)"""
        raise NotImplementedError

    def project(self, z0: np.ndarray, g: np.ndarray, t: float) -> np.ndarray:
        """Generalized projection; equals prox(z0 - t g, t)"""
        if t <= 0:
            raise ParameterError("step size must be positive", {"t": t})
        return self.prox(np.asarray(z0) - t * np.asarray(g), t)

    def __repr__(self) -> str:
        return self.name


def _check_scale(value: float, what: str) -> float:
    value = float(value)
    if value < 0:
        raise ParameterError(f"{what} must be non-negative", {what: value})
    return value


class Zero(NonsmoothFn):
    name = "zero"

    def __call__(self, z):
        return 0.0

    def prox(self, v, t):
        return np.array(v, dtype=np.float64)


class LinearFn(NonsmoothFn):
    """h(z) = <c, z>"""

    name = "linear"

    def __init__(self, c: np.ndarray):
        self.c = np.asarray(c, dtype=np.float64)

    def __call__(self, z):
        return float(np.dot(self.c, z))

    def prox(self, v, t):
        return np.asarray(v) - t * self.c


class ScaledL1(NonsmoothFn):
    """h(z) = delta * sum_i w_i |z_i|"""

    name = "scaled_l1"

    def __init__(self, delta: float, weights: Optional[np.ndarray] = None):
        self.delta = _check_scale(delta, "delta")
        self.weights = None if weights is None else np.asarray(weights, dtype=np.float64)
        if self.weights is not None and np.any(self.weights < 0):
            raise ParameterError("l1 weights must be non-negative")

    def _tau(self):
        return self.delta if self.weights is None else self.delta * self.weights

    def __call__(self, z):
        return float(np.sum(self._tau() * np.abs(z)))

    def prox(self, v, t):
        return ops.soft_threshold(v, t * self._tau())


class ScaledL2(NonsmoothFn):
    """h(z) = eps * ||z||_2"""

    name = "scaled_l2"

    def __init__(self, eps: float):
        self.eps = _check_scale(eps, "eps")

    def __call__(self, z):
        return self.eps * float(np.linalg.norm(z))

    def prox(self, v, t):
        return ops.shrink_l2(v, t * self.eps)


class ScaledNuclear(NonsmoothFn):
    """h(Z) = delta * ||Z||_* on column-major n1 x n2 matrices"""

    name = "scaled_nuclear"

    def __init__(self, delta: float, shape: Tuple[int, int]):
        self.delta = _check_scale(delta, "delta")
        self.shape = tuple(shape)

    def _mat(self, z):
        return np.asarray(z).reshape(self.shape, order="F")

    def __call__(self, z):
        return self.delta * ops.nuclear_norm(self._mat(z))

    def prox(self, v, t):
        return ops.svt(self._mat(v), t * self.delta).reshape(-1, order="F")


class NonnegIndicator(NonsmoothFn):
    name = "nonneg"

    def __call__(self, z):
        return 0.0 if np.all(np.asarray(z) >= -FEAS_TOL) else np.inf

    def prox(self, v, t):
        return ops.pos(v)


class NonnegLinear(NonsmoothFn):
    """Indicator of the nonnegative orthant plus <c, z>"""

    name = "nonneg_linear"

    def __init__(self, c: np.ndarray):
        self.c = np.asarray(c, dtype=np.float64)

    def __call__(self, z):
        if np.any(np.asarray(z) < -FEAS_TOL):
            return np.inf
        return float(np.dot(self.c, z))

    def prox(self, v, t):
        return ops.pos(np.asarray(v) - t * self.c)


class BoxLinf(NonsmoothFn):
    """Indicator of {z : ||z||_inf <= bound}"""

    name = "box_linf"

    def __init__(self, bound: float):
        self.bound = _check_scale(bound, "bound")

    def __call__(self, z):
        limit = self.bound * (1 + FEAS_TOL) + FEAS_TOL
        return 0.0 if np.all(np.abs(z) <= limit) else np.inf

    def prox(self, v, t):
        return ops.trunc(v, self.bound)


class ComplexBoxLinf(NonsmoothFn):
    """Indicator of {z complex : max_k |z_k| <= bound} on interleaved storage"""

    name = "complex_box_linf"

    def __init__(self, bound: float):
        self.bound = _check_scale(bound, "bound")

    def __call__(self, z):
        limit = self.bound * (1 + FEAS_TOL) + FEAS_TOL
        return 0.0 if np.all(np.abs(_complex(z)) <= limit) else np.inf

    def prox(self, v, t):
        return _real(ops.ctrunc(_complex(v), self.bound))


class Rescaled(NonsmoothFn):
    """w -> h(s * w), used for per-block step ratios"""

    def __init__(self, fn: NonsmoothFn, s: float):
        if s <= 0:
            raise ParameterError("rescaling factor must be positive", {"s": s})
        self.fn = fn
        self.s = float(s)
        self.name = f"{fn.name}(s={self.s:g})"

    def __call__(self, w):
        return self.fn(self.s * np.asarray(w))

    def prox(self, v, t):
        return self.fn.prox(self.s * np.asarray(v), t * self.s ** 2) / self.s


class BlockSeparable(NonsmoothFn):
    """Sum of functions acting on consecutive slices of the flat element"""

    name = "block_separable"

    def __init__(self, sizes: Sequence[int], fns: Sequence[NonsmoothFn]):
        if len(sizes) != len(fns):
            raise DimensionError("one function per block is required", len(sizes), len(fns))
        self.sizes = [int(s) for s in sizes]
        self.fns = list(fns)
        self.bounds = np.cumsum([0] + self.sizes)
        self.name = " + ".join(fn.name for fn in self.fns)

    def _slices(self, z):
        return [z[a:b] for a, b in zip(self.bounds[:-1], self.bounds[1:])]

    def __call__(self, z):
        return float(sum(fn(part) for fn, part in zip(self.fns, self._slices(np.asarray(z)))))

    def prox(self, v, t):
        v = np.asarray(v, dtype=np.float64)
        return np.concatenate([fn.prox(part, t) for fn, part in zip(self.fns, self._slices(v))])


def prox_scaled_l1(delta: float, weights: Optional[np.ndarray] = None) -> NonsmoothFn:
    return ScaledL1(delta, weights)


def prox_scaled_l2(eps: float) -> NonsmoothFn:
    return ScaledL2(eps)


def prox_scaled_nuclear(delta: float, shape: Tuple[int, int]) -> NonsmoothFn:
    return ScaledNuclear(delta, shape)


def prox_nonneg_indicator() -> NonsmoothFn:
    return NonnegIndicator()


def prox_box_linf(bound: float) -> NonsmoothFn:
    return BoxLinf(bound)
