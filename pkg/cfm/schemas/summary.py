"""
Summary and error payloads written next to every run
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..core.config import settings
from ..core.errors import CFMError


class OpCounts(BaseModel):
    fwd: int = 0
    adj: int = 0


class Summary(BaseModel):
    """Final objective, feasibility, operator counts and timing of a run"""

    model_config = ConfigDict(populate_by_name=True, ser_json_inf_nan="constants")

    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    kind: str
    name: str = ""
    variant: str
    continuation: Optional[str] = None
    mu: float
    iterations: int
    outer_steps: int = 0
    converged: bool
    objective: Optional[float] = None
    phi: Optional[float] = None
    feasibility_residual: Optional[float] = None
    feasibility_bound: Optional[float] = None
    feasibility_violation: Optional[float] = None
    gap: Optional[float] = None
    err: Optional[float] = None
    psnr: Optional[float] = None
    ops: OpCounts = Field(default_factory=OpCounts)
    wall_time: float = 0.0
    files: Dict[str, str] = Field(default_factory=dict)


class BenchRow(BaseModel):
    variant: str
    step: str
    iterations: int
    fwd: int
    adj: int
    phi: Optional[float] = None
    err: Optional[float] = None
    trace: str


class BenchSummary(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    kind: str
    mu: float
    runs: List[BenchRow] = Field(default_factory=list)
    comparison: str = ""


class ErrorPayload(BaseModel):
    """{"schema": "cfm/1", "error": {...}}"""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    error: Dict[str, Any]

    @classmethod
    def from_error(cls, error: CFMError) -> "ErrorPayload":
        return cls(error=error.to_dict())

    @classmethod
    def missing_file(cls, path: str) -> "ErrorPayload":
        return cls(error={"code": "file_not_found", "message": f"No such file: {path}", "detail": {"path": path}})

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True)
