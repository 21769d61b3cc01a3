"""Vector spaces and linear operators"""
from .builders import dct_matrix, make_dense, make_diff2d, make_partial_dct, make_subsample, tv_norm
from .linop import ADJOINT, FORWARD, LinOp, adjoint, compose, counts, diagonal, identity, scale, stack
from .norm import estimate_norm
from .space import Block, Space, inner, norm, product


def apply(op: LinOp, x, direction: str = FORWARD):
    """Apply op (forward) or its adjoint to x"""
    return op.apply(x, direction)


__all__ = [
    "ADJOINT",
    "FORWARD",
    "Block",
    "LinOp",
    "Space",
    "adjoint",
    "apply",
    "compose",
    "counts",
    "dct_matrix",
    "diagonal",
    "estimate_norm",
    "identity",
    "inner",
    "make_dense",
    "make_diff2d",
    "make_partial_dct",
    "make_subsample",
    "norm",
    "product",
    "scale",
    "stack",
    "tv_norm",
]
