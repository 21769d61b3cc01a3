"""
Vector spaces for solver iterates
Elements are flat float64 arrays; a Space knows how to cut them into native blocks
"""
from dataclasses import dataclass
from math import prod
from typing import List, Sequence, Tuple

import numpy as np

from ..core.errors import DimensionError


@dataclass(frozen=True)
class Block:
    """One block of a space: a real/complex vector or a real matrix"""

    shape: Tuple[int, ...]
    complex: bool = False

    @property
    def count(self) -> int:
        """Number of (possibly complex) entries"""
        return prod(self.shape)

    @property
    def size(self) -> int:
        """Number of float64 slots in the flat representation"""
        return self.count * (2 if self.complex else 1)

    def describe(self) -> str:
        dims = "x".join(str(d) for d in self.shape)
        return f"{'C' if self.complex else 'R'}^{dims}"


@dataclass(frozen=True)
class Space:
    """Ordered product of blocks

    Complex blocks are stored as interleaved (re, im) pairs and matrices in
    column-major order, so the plain dot product of two flat elements is the
    real inner product Re(a^H b) summed over blocks.
    """

    blocks: Tuple[Block, ...]

    @classmethod
    def real(cls, n: int) -> "Space":
        return cls((Block((n,)),))

    @classmethod
    def complex(cls, n: int) -> "Space":
        return cls((Block((n,), complex=True),))

    @classmethod
    def matrix(cls, n1: int, n2: int) -> "Space":
        return cls((Block((n1, n2)),))

    @property
    def size(self) -> int:
        return sum(b.size for b in self.blocks)

    @property
    def offsets(self) -> List[int]:
        out, pos = [], 0
        for b in self.blocks:
            out.append(pos)
            pos += b.size
        return out

    @property
    def shape(self) -> Tuple[int, ...]:
        """Native shape of a single-block space"""
        if len(self.blocks) != 1:
            raise DimensionError("shape is only defined for single-block spaces", 1, len(self.blocks))
        return self.blocks[0].shape

    def describe(self) -> str:
        return " x ".join(b.describe() for b in self.blocks)

    def check(self, v: np.ndarray, what: str = "element") -> np.ndarray:
        """Validate a flat element and return it as a float64 array"""
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1 or v.shape[0] != self.size:
            raise DimensionError(
                f"{what} has {v.size} entries, space {self.describe()} needs {self.size}",
                self.describe(),
                list(v.shape),
            )
        return v

    def zeros(self) -> np.ndarray:
        return np.zeros(self.size)

    def random(self, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal(self.size)

    def split(self, v: np.ndarray) -> List[np.ndarray]:
        """Cut a flat element into native-shaped block arrays (views when possible)"""
        parts = []
        for block, start in zip(self.blocks, self.offsets):
            chunk = v[start:start + block.size]
            if block.complex:
                chunk = np.ascontiguousarray(chunk).view(np.complex128)
            parts.append(chunk.reshape(block.shape, order="F"))
        return parts

    def join(self, parts: Sequence[np.ndarray]) -> np.ndarray:
        """Inverse of split"""
        if len(parts) != len(self.blocks):
            raise DimensionError("wrong number of blocks", len(self.blocks), len(parts))
        flat = []
        for block, part in zip(self.blocks, parts):
            part = np.asarray(part)
            if part.size != block.count:
                raise DimensionError(
                    f"block {block.describe()} got {part.size} entries", block.count, part.size
                )
            if block.complex:
                flat.append(np.ascontiguousarray(part.reshape(-1, order="F"), dtype=np.complex128).view(np.float64))
            else:
                flat.append(np.asarray(part, dtype=np.float64).reshape(-1, order="F"))
        return np.concatenate(flat) if flat else np.zeros(0)

    def native(self, v: np.ndarray) -> np.ndarray:
        """Native array of a single-block space"""
        if len(self.blocks) != 1:
            raise DimensionError("native view needs a single-block space", 1, len(self.blocks))
        return self.split(v)[0]

    def flat(self, a: np.ndarray) -> np.ndarray:
        return self.join([a])

    def partition(self, v: np.ndarray, spaces: Sequence["Space"]) -> List[np.ndarray]:
        """Split a flat element of a product space into its factor elements"""
        out, pos = [], 0
        for s in spaces:
            out.append(v[pos:pos + s.size])
            pos += s.size
        return out


def product(*spaces: Space) -> Space:
    """Ordered product of spaces"""
    return Space(tuple(b for s in spaces for b in s.blocks))


def inner(a: np.ndarray, b: np.ndarray) -> float:
    """Real inner product of two flat elements"""
    return float(np.dot(a, b))


def norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))
