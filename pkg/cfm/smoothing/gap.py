"""
Duality gaps of the unsmoothed conic model
z is a dual point in natural coordinates (Lagrangian f(x) - <A x + b, z>)
"""
import logging

import numpy as np
from pydantic import BaseModel

from .conic import ConicModel, cone_norm, dual_norm

logger = logging.getLogger(__name__)

FEAS_TOL = 1e-9


class GapReport(BaseModel):
    """Primal/dual values and infeasibilities of a candidate pair"""

    primal_value: float
    dual_value: float
    gap: float
    primal_infeasibility: float
    dual_infeasibility: float

    @property
    def flagged(self) -> bool:
        return self.primal_infeasibility > FEAS_TOL or self.dual_infeasibility > FEAS_TOL


def gap_report(model: ConicModel, x: np.ndarray, z: np.ndarray) -> GapReport:
    """Evaluate f(x) - d(z) together with feasibility residuals

    Indicator terms of the dual are reported as infeasibility instead of +inf,
    so the gap stays finite for infeasible inputs.
    """
    x = model.x_space.check(x, "x")
    z = model.z_space.check(z, "z")
    primal_inf = 0.0
    dual_inf = 0.0
    dual_value = 0.0
    with model.op.paused():
        u = model.op.adjoint(z)
        for block, zi in zip(model.blocks, model.split_dual(z)):
            r = block.residual(x)
            if block.kind == "nonneg":
                primal_inf = max(primal_inf, float(np.max(-r, initial=0.0)))
                dual_inf = max(dual_inf, float(np.max(-zi, initial=0.0)))
            elif block.kind == "zero":
                primal_inf = max(primal_inf, float(np.max(np.abs(r), initial=0.0)))
            elif block.radius is not None:
                primal_inf = max(primal_inf, cone_norm(block.kind, r, block.shape) - block.radius)
                dual_value -= block.radius * dual_norm(block.kind, zi, block.shape)
            else:
                dual_inf = max(dual_inf, dual_norm(block.kind, zi, block.shape) - block.weight)
            dual_value -= float(np.dot(block.offset, zi))
            if block.linear is not None:
                dual_value -= float(np.dot(block.linear, zi))
    dual_inf = max(dual_inf, model.objective.dual_violation(u))
    primal_value = model.primal_value(x)
    return GapReport(
        primal_value=primal_value,
        dual_value=dual_value,
        gap=primal_value - dual_value,
        primal_infeasibility=max(primal_inf, 0.0),
        dual_infeasibility=max(dual_inf, 0.0),
    )


def duality_gap(model: ConicModel, x: np.ndarray, z: np.ndarray) -> float:
    """f(x) - d(z); infeasible inputs are logged, the gap is still returned"""
    report = gap_report(model, x, z)
    if report.flagged:
        logger.warning(
            "duality gap on infeasible pair: primal %.3e, dual %.3e",
            report.primal_infeasibility,
            report.dual_infeasibility,
        )
    return report.gap
