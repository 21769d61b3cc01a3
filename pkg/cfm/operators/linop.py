"""
Linear operators with adjoints
Every model touches A, W and D only through LinOp; applications are counted
"""
import threading
from contextlib import contextmanager
from typing import Callable, Iterator, Sequence

import numpy as np

from ..core.errors import DimensionError
from .space import Space

FlatMap = Callable[[np.ndarray], np.ndarray]

FORWARD = "forward"
ADJOINT = "adjoint"


class LinOp:
    """Dimensioned linear map with forward and adjoint application

    The maps act on flat float64 elements of in_space/out_space. Counters are
    bumped once per application under a lock, so one operator can be shared
    by solves running in different threads.
    """

    def __init__(
        self,
        in_space: Space,
        out_space: Space,
        forward: FlatMap,
        adjoint: FlatMap,
        name: str = "op",
        parts: Sequence["LinOp"] = (),
    ):
        self.in_space = in_space
        self.out_space = out_space
        self._forward = forward
        self._adjoint = adjoint
        self.name = name
        self.parts = tuple(parts)
        self.forward_count = 0
        self.adjoint_count = 0
        self._lock = threading.Lock()
        self._paused = 0

    def __repr__(self) -> str:
        return f"LinOp({self.name}: {self.in_space.describe()} -> {self.out_space.describe()})"

    @property
    def shape(self):
        return (self.out_space.size, self.in_space.size)

    def _bump(self, direction: str) -> None:
        with self._lock:
            if self._paused:
                return
            if direction == FORWARD:
                self.forward_count += 1
            else:
                self.adjoint_count += 1

    def apply(self, x: np.ndarray, direction: str = FORWARD) -> np.ndarray:
        """Apply the operator or its adjoint to a flat element"""
        if direction == FORWARD:
            src, dst, fn = self.in_space, self.out_space, self._forward
        elif direction == ADJOINT:
            src, dst, fn = self.out_space, self.in_space, self._adjoint
        else:
            raise ValueError(f"unknown direction {direction!r}")
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != src.size:
            raise DimensionError(
                f"{self.name} {direction}: input has {x.size} entries, expected {src.size} ({src.describe()})",
                {"expected": src.size, "space": src.describe()},
                {"got": x.size, "shape": list(x.shape)},
            )
        out = np.asarray(fn(x), dtype=np.float64).reshape(-1)
        if out.shape[0] != dst.size:
            raise DimensionError(
                f"{self.name} {direction}: produced {out.size} entries, expected {dst.size}",
                dst.size,
                out.size,
            )
        self._bump(direction)
        return out

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.apply(x, FORWARD)

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        return self.apply(y, ADJOINT)

    def reset_counts(self) -> None:
        with self._lock:
            self.forward_count = 0
            self.adjoint_count = 0

    def _set_paused(self, delta: int) -> None:
        with self._lock:
            self._paused += delta
        for part in self.parts:
            part._set_paused(delta)

    @contextmanager
    def paused(self) -> Iterator["LinOp"]:
        """Suspend counting on this operator and everything it is built from"""
        self._set_paused(1)
        try:
            yield self
        finally:
            self._set_paused(-1)


def identity(space: Space) -> LinOp:
    return LinOp(space, space, lambda x: x.copy(), lambda y: y.copy(), name="identity")


def adjoint(op: LinOp) -> LinOp:
    """Adjoint as an operator; applications are counted on the wrapped op"""
    return LinOp(
        op.out_space,
        op.in_space,
        lambda y: op.apply(y, ADJOINT),
        lambda x: op.apply(x, FORWARD),
        name=f"{op.name}^T",
        parts=(op,),
    )


def diagonal(d: np.ndarray, space: Space = None) -> LinOp:
    """Real diagonal scaling of a real space"""
    d = np.asarray(d, dtype=np.float64).reshape(-1)
    space = space or Space.real(d.size)
    if space.size != d.size:
        raise DimensionError("diagonal length does not match space", space.size, d.size)
    return LinOp(space, space, lambda x: d * x, lambda y: d * y, name="diag")


def compose(*ops: LinOp) -> LinOp:
    """compose(A, B, C) applies C, then B, then A"""
    if not ops:
        raise ValueError("compose needs at least one operator")
    for outer, inner_op in zip(ops[:-1], ops[1:]):
        if inner_op.out_space.size != outer.in_space.size:
            raise DimensionError(
                f"cannot compose {outer.name} after {inner_op.name}",
                outer.in_space.size,
                inner_op.out_space.size,
            )

    def fwd(x):
        for op in reversed(ops):
            x = op.apply(x, FORWARD)
        return x

    def adj(y):
        for op in ops:
            y = op.apply(y, ADJOINT)
        return y

    return LinOp(ops[-1].in_space, ops[0].out_space, fwd, adj, name="*".join(op.name for op in ops), parts=ops)


def scale(op: LinOp, c: float) -> LinOp:
    c = float(c)
    return LinOp(
        op.in_space,
        op.out_space,
        lambda x: c * op.apply(x, FORWARD),
        lambda y: c * op.apply(y, ADJOINT),
        name=f"{c:g}*{op.name}",
        parts=(op,),
    )


def stack(ops: Sequence[LinOp]) -> LinOp:
    """Vertical stack x -> (A1 x, A2 x, ...); the adjoint sums block adjoints"""
    ops = list(ops)
    if not ops:
        raise ValueError("stack needs at least one operator")
    n = ops[0].in_space.size
    for op in ops[1:]:
        if op.in_space.size != n:
            raise DimensionError(f"cannot stack {op.name}: input dims differ", n, op.in_space.size)
    out_spaces = [op.out_space for op in ops]
    out_space = Space(tuple(b for s in out_spaces for b in s.blocks))

    def fwd(x):
        return np.concatenate([op.apply(x, FORWARD) for op in ops])

    def adj(y):
        parts = out_space.partition(y, out_spaces)
        total = np.zeros(n)
        for op, part in zip(ops, parts):
            total += op.apply(part, ADJOINT)
        return total

    return LinOp(ops[0].in_space, out_space, fwd, adj, name="[" + ";".join(op.name for op in ops) + "]", parts=ops)


def counts(*ops: LinOp):
    """Sum of (forward, adjoint) counts of several operators"""
    return sum(op.forward_count for op in ops), sum(op.adjoint_count for op in ops)
