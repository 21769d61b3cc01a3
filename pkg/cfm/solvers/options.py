"""
Solver options
Variant, step policy, backtracking test and stopping rules
"""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from ..core.config import settings


class Variant(str, Enum):
    GRA = "GRA"
    N83 = "N83"
    TS = "TS"
    AT = "AT"
    LLM = "LLM"
    N07 = "N07"


TWO_PROJECTION = {Variant.N07, Variant.LLM}


class StepPolicy(str, Enum):
    FIXED = "fixed"
    BACKTRACKING = "backtracking"


class BacktrackMode(str, Enum):
    STANDARD = "standard"
    STABLE = "stable"
    HYBRID = "hybrid"


class SolverOptions(BaseModel):
    """Options for one first-order solve"""

    variant: Variant = Variant.AT
    step: StepPolicy = StepPolicy.BACKTRACKING
    L: Optional[float] = Field(default=None, gt=0)  # fixed L, or the initial estimate when backtracking
    alpha: float = Field(default_factory=lambda: settings.DEFAULT_ALPHA, gt=0, le=1)
    beta: float = Field(default_factory=lambda: settings.DEFAULT_BETA, gt=0, lt=1)
    gamma: float = Field(default_factory=lambda: settings.DEFAULT_GAMMA, gt=0)
    backtrack_mode: BacktrackMode = BacktrackMode.HYBRID
    max_backtracks: int = Field(default=100, ge=1)
    restart: Optional[int] = Field(default=None, ge=1)
    max_iters: int = Field(default_factory=lambda: settings.DEFAULT_MAX_ITERS, ge=1)
    tol: float = Field(default_factory=lambda: settings.DEFAULT_TOL, ge=0)
    obj_tol: Optional[float] = Field(default=None, ge=0)
    cached: bool = True
    trace_objective: bool = True
    seed: int = Field(default_factory=lambda: settings.SEED)

    @property
    def backtracking(self) -> bool:
        return self.step == StepPolicy.BACKTRACKING
