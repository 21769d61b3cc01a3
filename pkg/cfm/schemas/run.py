"""
Run configuration schema
JSON or YAML files; CLI flags override file fields, file fields override settings
"""
import json
from pathlib import Path
from typing import List, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..continuation import ContinuationOptions
from ..core.config import settings
from ..core.errors import ConfigError
from ..solvers import SolverOptions, StepPolicy, Variant

METRICS = ("objective", "feasibility", "err", "psnr", "gap")


class RunConfig(BaseModel):
    """One solve, bench or testgen run"""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    problem: Optional[str] = None
    solver: SolverOptions = Field(default_factory=SolverOptions)
    continuation: Optional[ContinuationOptions] = None
    mu: Optional[float] = Field(default=None, gt=0)
    out: str = Field(default_factory=lambda: settings.OUTPUT_DIR)
    seed: int = Field(default_factory=lambda: settings.SEED)
    metrics: List[str] = Field(default_factory=lambda: ["objective", "feasibility", "err"])
    x_ref: Optional[str] = None
    variants: List[Variant] = Field(default_factory=lambda: list(Variant))
    steps: List[StepPolicy] = Field(default_factory=lambda: [StepPolicy.BACKTRACKING])
    testgen: Optional["TestgenConfig"] = None
    base_dir: Optional[str] = Field(default=None, exclude=True)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """Read a JSON or YAML run configuration"""
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(str(path))
        try:
            data = yaml.safe_load(path.read_text()) if path.suffix.lower() in (".yaml", ".yml") else json.loads(path.read_text())
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ConfigError(f"Failed to parse run configuration: {str(e)}", {"path": str(path)})
        config = cls.parse(data or {}, path)
        return config.model_copy(update={"base_dir": str(path.parent)})

    @classmethod
    def parse(cls, data, path: Optional[Path] = None) -> "RunConfig":
        try:
            config = cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(
                "Invalid run configuration",
                {"path": str(path) if path else None, "errors": e.errors(include_url=False, include_context=False)},
            )
        unknown = sorted(set(config.metrics) - set(METRICS))
        if unknown:
            raise ConfigError(f"unknown metrics {unknown}", {"allowed": list(METRICS)})
        return config

    def with_overrides(
        self,
        variant: Optional[str] = None,
        mu: Optional[float] = None,
        tol: Optional[float] = None,
        seed: Optional[int] = None,
        out: Optional[str] = None,
    ) -> "RunConfig":
        """Apply CLI flags on top of the file values"""
        solver = self.solver.model_dump()
        if variant is not None:
            solver["variant"] = variant
        if tol is not None:
            solver["tol"] = tol
        if seed is not None:
            solver["seed"] = seed
        data = self.model_dump(by_alias=True, exclude={"solver", "base_dir"})
        data["solver"] = solver
        if mu is not None:
            data["mu"] = mu
        if seed is not None:
            data["seed"] = seed
        if out is not None:
            data["out"] = out
        if tol is not None and data.get("continuation") is not None:
            data["continuation"]["final_tol"] = tol
        return self.parse(data).model_copy(update={"base_dir": self.base_dir})

    def resolve(self, path: str) -> Path:
        p = Path(path)
        if p.is_absolute() or self.base_dir is None:
            return p
        return Path(self.base_dir) / p


class TestgenConfig(BaseModel):
    """Instance generation parameters"""

    __test__ = False

    kind: str = "dantzig"
    m: int = Field(default=32, ge=1)
    n: int = Field(default=128, ge=1)
    s: int = Field(default=10, ge=0)
    dynamic_range_db: float = Field(default=40.0, ge=0)
    eps: Optional[float] = Field(default=None, gt=0)
    delta: Optional[float] = Field(default=None, ge=0)
    mu: Optional[float] = Field(default=None, gt=0)
    attempts: int = Field(default=5, ge=1)
    budget: int = Field(default=5000, ge=1)


RunConfig.model_rebuild()
