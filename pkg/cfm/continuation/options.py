"""Continuation options"""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from ..core.config import settings


class ContinuationMode(str, Enum):
    STANDARD = "standard"
    ACCELERATED = "accelerated"


class CenterUpdate(str, Enum):
    RECENTER = "recenter"
    FIXED = "fixed"


class ContinuationOptions(BaseModel):
    """Outer loop over (mu_j, Y_j)"""

    mode: ContinuationMode = ContinuationMode.STANDARD
    mu0: Optional[float] = Field(default=None, gt=0)
    mu_factor: float = Field(default=1.0, gt=0, le=1)
    center: CenterUpdate = CenterUpdate.RECENTER
    inner_tol0: float = Field(default=1e-4, gt=0)
    tol_factor: float = Field(default=1.5, gt=1)
    final_tol: float = Field(default_factory=lambda: settings.DEFAULT_TOL, gt=0)
    max_outer: int = Field(default=50, ge=1)
    outer_tol: float = Field(default=1e-8, ge=0)
    warm_start: bool = True

    def inner_tol(self, j: int) -> float:
        """tol0 * factor^-j, floored at the final tolerance"""
        return max(self.inner_tol0 * self.tol_factor ** (-j), self.final_tol)
