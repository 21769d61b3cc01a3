"""
Composite problems the solvers understand
CompositeDual from the smoothing package is the main one; Quadratic is a
self-contained smooth test problem
"""
from typing import Optional, Protocol, Tuple

import numpy as np

from ..prox import NonsmoothFn, Zero


class CompositeProblem(Protocol):
    """phi = g + h with g smooth"""

    h: NonsmoothFn

    @property
    def size(self) -> int: ...

    def value(self, w: np.ndarray) -> float: ...

    def value_grad(self, w: np.ndarray) -> Tuple[float, np.ndarray, Optional[np.ndarray]]: ...


class Quadratic:
    """g(z) = 1/2 (z - c)^T Q (z - c) plus an optional nonsmooth h

    Q is either a symmetric matrix or the diagonal of one. Each value_grad
    call is counted as one forward and one adjoint application.
    """

    def __init__(self, Q, c, h: Optional[NonsmoothFn] = None):
        Q = np.asarray(Q, dtype=np.float64)
        self.c = np.asarray(c, dtype=np.float64)
        self._mul = (lambda v: Q * v) if Q.ndim == 1 else (lambda v: Q @ v)
        self._eigs = Q if Q.ndim == 1 else np.linalg.eigvalsh(Q)
        self.h = h or Zero()
        self.forward_count = 0
        self.adjoint_count = 0

    @property
    def size(self) -> int:
        return self.c.size

    def zeros(self) -> np.ndarray:
        return np.zeros(self.size)

    def to_z(self, w):
        return np.asarray(w)

    def from_z(self, z):
        return np.asarray(z, dtype=np.float64)

    def value(self, z):
        self.adjoint_count += 1
        d = z - self.c
        return 0.5 * float(np.dot(d, self._mul(d)))

    def value_grad(self, z):
        self.forward_count += 1
        self.adjoint_count += 1
        d = z - self.c
        grad = self._mul(d)
        return 0.5 * float(np.dot(d, grad)), grad, None

    def phi(self, z):
        return self.value(z) + self.h(z)

    def primal_minimizer(self, z):
        return None

    def op_counts(self):
        return self.forward_count, self.adjoint_count

    def lipschitz_bound(self) -> float:
        return float(np.max(self._eigs))

    def strong_convexity(self) -> float:
        return float(np.min(self._eigs))
