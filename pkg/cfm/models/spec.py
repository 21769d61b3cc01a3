"""
Model specifications
A ModelSpec names a model kind and carries its operators, data and parameters
"""
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..core.errors import ModelError, ParameterError
from ..operators import LinOp


class ModelKind(str, Enum):
    DANTZIG = "dantzig"
    DANTZIG_LP = "dantzig_lp"
    LASSO = "lasso"
    BASIS_PURSUIT = "basis_pursuit"
    NUCLEAR_LASSO = "nuclear_lasso"
    NUCLEAR_DANTZIG = "nuclear_dantzig"
    L1_ANALYSIS = "l1_analysis"
    TV = "tv"
    ANALYSIS_PLUS_TV = "analysis_plus_tv"


# parameters each kind requires; every other optional parameter must be absent
REQUIRED = {
    ModelKind.DANTZIG: {"delta"},
    ModelKind.DANTZIG_LP: {"delta"},
    ModelKind.LASSO: {"eps"},
    ModelKind.BASIS_PURSUIT: set(),
    ModelKind.NUCLEAR_LASSO: {"eps"},
    ModelKind.NUCLEAR_DANTZIG: {"delta"},
    ModelKind.L1_ANALYSIS: {"eps", "W"},
    ModelKind.TV: {"eps"},
    ModelKind.ANALYSIS_PLUS_TV: {"eps", "W", "alpha_w", "beta_tv"},
}
OPTIONAL = {"delta", "eps", "W", "alpha_w", "beta_tv"}
L1_KINDS = {ModelKind.DANTZIG, ModelKind.DANTZIG_LP, ModelKind.LASSO, ModelKind.BASIS_PURSUIT}
IMAGE_KINDS = {ModelKind.TV, ModelKind.ANALYSIS_PLUS_TV}
MATRIX_KINDS = {ModelKind.NUCLEAR_LASSO, ModelKind.NUCLEAR_DANTZIG}


class ModelSpec(BaseModel):
    """Operators, data and parameters of one model instance"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: ModelKind
    A: LinOp
    y: np.ndarray
    W: Optional[LinOp] = None
    delta: Optional[float] = None
    eps: Optional[float] = None
    alpha_w: Optional[float] = None
    beta_tv: Optional[float] = None
    mu: Optional[float] = None
    x0: Optional[np.ndarray] = None
    ratios: Optional[List[float]] = None
    l1_weights: Optional[np.ndarray] = None
    name: str = ""

    @model_validator(mode="after")
    def check_parameters(self):
        required = REQUIRED[self.kind]
        missing = sorted(p for p in required if getattr(self, p) is None)
        extra = sorted(p for p in OPTIONAL - required if getattr(self, p) is not None)
        if missing or extra:
            raise ModelError(
                f"{self.kind.value} model: missing {missing or 'nothing'}, unexpected {extra or 'nothing'}",
                {"missing": missing, "unexpected": extra},
            )
        for p in ("delta", "eps", "alpha_w", "beta_tv"):
            value = getattr(self, p)
            if value is not None and value < 0:
                raise ParameterError(f"{p} must be non-negative", {p: value})
        if self.mu is not None and not self.mu > 0:
            raise ParameterError("mu must be positive", {"mu": self.mu})
        if self.y.size != self.A.out_space.size:
            raise ModelError("data y does not match the output of A", {"expected": self.A.out_space.size, "got": int(self.y.size)})
        if self.x0 is not None and self.x0.size != self.A.in_space.size:
            raise ModelError("x0 does not match the input of A", {"expected": self.A.in_space.size, "got": int(self.x0.size)})
        if self.W is not None and self.W.in_space.size != self.A.in_space.size:
            raise ModelError("W and A act on different spaces")
        if self.kind in MATRIX_KINDS and len(self.A.in_space.blocks[0].shape) != 2:
            raise ModelError("nuclear-norm models need A to act on a matrix space")
        if self.kind in IMAGE_KINDS:
            shape = self.A.in_space.blocks[0].shape
            if len(shape) != 2 or shape[0] != shape[1]:
                raise ModelError("TV models need A to act on a square image space")
        if self.l1_weights is not None:
            if self.kind not in L1_KINDS:
                raise ModelError("diagonal l1 weights apply only to l1-objective models")
            if self.l1_weights.size != self.A.in_space.size or np.any(self.l1_weights <= 0):
                raise ParameterError("l1 weights must be positive, one per primal entry")
        return self

    @property
    def n(self) -> int:
        return self.A.in_space.size

    @property
    def image_size(self) -> int:
        return self.A.in_space.blocks[0].shape[0]
