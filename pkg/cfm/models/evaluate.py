"""
Unsmoothed objective and constraint residuals of a model
"""
import numpy as np
from pydantic import BaseModel

from ..smoothing.conic import cone_norm
from .builders import conic_model
from .spec import ModelSpec


class Feasibility(BaseModel):
    """Largest constraint residual and how far it exceeds its bound"""

    residual: float
    bound: float
    violation: float


def primal_objective(spec: ModelSpec, x: np.ndarray) -> float:
    return conic_model(spec).primal_value(np.asarray(x, dtype=np.float64))


def feasibility(spec: ModelSpec, x: np.ndarray) -> Feasibility:
    """Constraint residual of x: ||A^T(y - Ax)||_inf vs delta, ||y - Ax|| vs eps, ..."""
    model = conic_model(spec)
    x = np.asarray(x, dtype=np.float64)
    worst = Feasibility(residual=0.0, bound=0.0, violation=0.0)
    with model.op.paused():
        for block in model.blocks:
            if block.weight is not None:
                continue
            r = block.residual(x)
            if block.kind == "nonneg":
                residual, bound = float(np.max(-r, initial=0.0)), 0.0
            elif block.kind == "zero":
                residual, bound = float(np.linalg.norm(r)), 0.0
            else:
                residual, bound = cone_norm(block.kind, r, block.shape), block.radius
            violation = max(0.0, residual - bound)
            if violation >= worst.violation:
                worst = Feasibility(residual=residual, bound=bound, violation=violation)
    return worst
