"""
Conic models in standard form
minimize f(x) subject to blocks (A_i x + b_i) lying in norm-epigraph,
orthant or zero cones
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..core.errors import DimensionError, ModelError, ParameterError
from ..operators import LinOp, Space, stack
from ..prox import operators as proxops

CONE_KINDS = ("linf", "l1", "l1_complex", "l2", "operator", "nonneg", "zero")
OBJECTIVE_KINDS = ("l1", "nuclear", "linear", "zero")


def _cplx(v: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(v).view(np.complex128)


def cone_norm(kind: str, u: np.ndarray, shape: Optional[Tuple[int, int]] = None) -> float:
    """Norm whose epigraph is the cone (primal side)"""
    if kind == "linf":
        return float(np.max(np.abs(u))) if u.size else 0.0
    if kind == "l1":
        return float(np.sum(np.abs(u)))
    if kind == "l1_complex":
        return float(np.sum(np.abs(_cplx(u))))
    if kind == "l2":
        return float(np.linalg.norm(u))
    if kind == "operator":
        return proxops.operator_norm(u.reshape(shape, order="F"))
    raise ModelError(f"cone {kind!r} has no norm", {"kind": kind})


def dual_norm(kind: str, z: np.ndarray, shape: Optional[Tuple[int, int]] = None) -> float:
    """Dual norm of cone_norm"""
    if kind == "linf":
        return float(np.sum(np.abs(z)))
    if kind == "l1":
        return float(np.max(np.abs(z))) if z.size else 0.0
    if kind == "l1_complex":
        return float(np.max(np.abs(_cplx(z)))) if z.size else 0.0
    if kind == "l2":
        return float(np.linalg.norm(z))
    if kind == "operator":
        return proxops.nuclear_norm(z.reshape(shape, order="F"))
    raise ModelError(f"cone {kind!r} has no dual norm", {"kind": kind})


@dataclass
class ConeBlock:
    """One block of the constraint map

    For norm cones exactly one of radius (constraint ||A_i x + b_i|| <= radius)
    or weight (objective term weight * ||A_i x + b_i||) is set. nonneg and zero
    blocks take neither; linear adds <linear, z_i> to the dual's nonsmooth part.
    """

    kind: str
    op: LinOp
    offset: Optional[np.ndarray] = None
    radius: Optional[float] = None
    weight: Optional[float] = None
    linear: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in CONE_KINDS:
            raise ModelError(f"unknown cone kind {self.kind!r}", {"allowed": list(CONE_KINDS)})
        size = self.op.out_space.size
        self.offset = np.zeros(size) if self.offset is None else np.asarray(self.offset, dtype=np.float64).reshape(-1)
        if self.offset.size != size:
            raise DimensionError(f"offset of block {self.name or self.kind} has wrong length", size, self.offset.size)
        if self.linear is not None:
            self.linear = np.asarray(self.linear, dtype=np.float64).reshape(-1)
            if self.linear.size != size:
                raise DimensionError("linear term has wrong length", size, self.linear.size)
        norm_cone = self.kind not in ("nonneg", "zero")
        if norm_cone and (self.radius is None) == (self.weight is None):
            raise ModelError(f"norm cone block {self.name or self.kind} needs exactly one of radius/weight")
        if not norm_cone and (self.radius is not None or self.weight is not None):
            raise ModelError(f"{self.kind} block takes no radius or weight")
        for value, what in ((self.radius, "radius"), (self.weight, "weight")):
            if value is not None and value < 0:
                raise ParameterError(f"{what} must be non-negative", {what: value})

    @property
    def size(self) -> int:
        return self.op.out_space.size

    @property
    def shape(self):
        return self.op.out_space.shape if self.kind == "operator" else None

    def residual(self, x: np.ndarray) -> np.ndarray:
        """A_i x + b_i, including the constant carried by the linear term"""
        r = self.op.forward(x) + self.offset
        return r if self.linear is None else r + self.linear


@dataclass
class PrimalObjective:
    """Simple objective f with a closed-form prox

    l1: sum_i w_i |x_i| (w = 1 unless weights are given); nuclear: ||X||_*;
    linear: <c, x>; zero: 0.
    """

    kind: str = "l1"
    weights: Optional[np.ndarray] = None
    c: Optional[np.ndarray] = None
    shape: Optional[Tuple[int, int]] = None
    svd_calls: int = field(default=0, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in OBJECTIVE_KINDS:
            raise ModelError(f"unknown objective {self.kind!r}", {"allowed": list(OBJECTIVE_KINDS)})
        if self.kind == "nuclear" and self.shape is None:
            raise ModelError("nuclear objective needs a matrix shape")
        if self.kind == "linear" and self.c is None:
            raise ModelError("linear objective needs a cost vector")
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=np.float64)
            if np.any(self.weights <= 0):
                raise ParameterError("objective weights must be positive")

    def _w(self):
        return 1.0 if self.weights is None else self.weights

    def _mat(self, x):
        return np.asarray(x).reshape(self.shape, order="F")

    def value(self, x: np.ndarray) -> float:
        if self.kind == "l1":
            return float(np.sum(self._w() * np.abs(x)))
        if self.kind == "nuclear":
            return proxops.nuclear_norm(self._mat(x))
        if self.kind == "linear":
            return float(np.dot(self.c, x))
        return 0.0

    def prox_env(self, v: np.ndarray, mu: float) -> Tuple[np.ndarray, float]:
        """argmin_x f(x) + mu/2 ||x - v||^2 and the conjugate envelope at v

        The envelope is mu/2 ||v||^2 - min_x (f(x) + mu/2 ||x - v||^2),
        evaluated without cancellation. A nuclear objective costs one SVD.
        """
        if self.kind == "l1":
            x = proxops.soft_threshold(v, self._w() / mu)
            return x, 0.5 * mu * float(np.dot(x, x))
        if self.kind == "nuclear":
            self.svd_calls += 1
            X, s = proxops.svt_values(self._mat(v), 1.0 / mu)
            return X.reshape(-1, order="F"), 0.5 * mu * float(np.dot(s, s))
        if self.kind == "linear":
            x = v - self.c / mu
        else:
            x = np.array(v, dtype=np.float64)
        return x, 0.5 * mu * float(np.dot(x, x))

    def prox(self, v: np.ndarray, mu: float) -> np.ndarray:
        return self.prox_env(v, mu)[0]

    def conj_env(self, v: np.ndarray, mu: float) -> float:
        return self.prox_env(v, mu)[1]

    def dual_violation(self, u: np.ndarray) -> float:
        """How far u = A^T z is from the domain of the conjugate f*"""
        if self.kind == "l1":
            return max(0.0, float(np.max(np.abs(u) / self._w())) - 1.0) if u.size else 0.0
        if self.kind == "nuclear":
            return max(0.0, proxops.operator_norm(self._mat(u)) - 1.0)
        if self.kind == "linear":
            return float(np.max(np.abs(u - self.c))) if u.size else 0.0
        return float(np.max(np.abs(u))) if u.size else 0.0


@dataclass
class ConicModel:
    """f plus a product of cone blocks over the primal space x_space"""

    x_space: Space
    objective: PrimalObjective
    blocks: List[ConeBlock] = field(default_factory=list)
    name: str = "model"

    def __post_init__(self):
        if not self.blocks:
            raise ModelError("a conic model needs at least one cone block")
        for block in self.blocks:
            if block.op.in_space.size != self.x_space.size:
                raise DimensionError(
                    f"block {block.name or block.kind} acts on {block.op.in_space.size} entries",
                    self.x_space.size,
                    block.op.in_space.size,
                )
        self._op = self.blocks[0].op if len(self.blocks) == 1 else stack([b.op for b in self.blocks])

    @property
    def op(self) -> LinOp:
        """The reduced operator: all blocks stacked"""
        return self._op

    @property
    def z_space(self) -> Space:
        return self._op.out_space

    @property
    def offset(self) -> np.ndarray:
        return np.concatenate([b.offset for b in self.blocks])

    @property
    def sizes(self) -> List[int]:
        return [b.size for b in self.blocks]

    def split_dual(self, z: np.ndarray) -> List[np.ndarray]:
        bounds = np.cumsum([0] + self.sizes)
        return [z[a:b] for a, b in zip(bounds[:-1], bounds[1:])]

    def primal_value(self, x: np.ndarray) -> float:
        """f(x) plus weighted norm terms"""
        value = self.objective.value(x)
        with self._op.paused():
            for block in self.blocks:
                if block.weight is not None:
                    value += block.weight * cone_norm(block.kind, block.residual(x), block.shape)
        return value
