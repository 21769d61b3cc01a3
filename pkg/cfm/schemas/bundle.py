"""
Instance bundle schema
A generated instance is stored as a problem file plus a certificate block
"""
import json
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.config import settings
from ..core.errors import ProblemFileError
from ..models import ModelKind
from ..testgen.certify import ExactInstance, KKTReport, SmoothedCertificate
from .problem import DenseOperator, ProblemFile

KIND_PARAMS = {"basis_pursuit": (), "lasso": ("eps",), "dantzig": ("delta",)}


class SmoothedBlock(BaseModel):
    mu: float
    x0: List[float]
    x: List[float]
    lam: List[float]
    report: KKTReport


class CertificateBlock(BaseModel):
    """Certified primal-dual pair; lam uses the lambda = -z convention"""

    kind: str
    x_star: List[float]
    lam_star: List[float]
    d: List[float]
    eps: Optional[float] = None
    delta: Optional[float] = None
    seed: Optional[int] = None
    report: KKTReport
    smoothed: Optional[SmoothedBlock] = None


class InstanceBundle(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    problem: ProblemFile
    certificate: CertificateBlock

    @classmethod
    def from_instance(cls, instance: ExactInstance) -> "InstanceBundle":
        params = {p: getattr(instance, p) for p in KIND_PARAMS[instance.kind]}
        problem = ProblemFile(
            kind=ModelKind(instance.kind),
            name=f"{instance.kind}-exact",
            A=DenseOperator(rows=instance.A.tolist()),
            y=instance.b.tolist(),
            x_ref=instance.x_star.tolist(),
            **params,
        )
        sm = instance.smoothed
        certificate = CertificateBlock(
            kind=instance.kind,
            x_star=instance.x_star.tolist(),
            lam_star=instance.lam_star.tolist(),
            d=instance.d.tolist(),
            eps=instance.eps,
            delta=instance.delta,
            seed=instance.seed,
            report=instance.report,
            smoothed=None if sm is None else SmoothedBlock(
                mu=sm.mu, x0=sm.x0.tolist(), x=sm.x.tolist(), lam=sm.lam.tolist(), report=sm.report
            ),
        )
        return cls(problem=problem, certificate=certificate)

    def to_instance(self) -> ExactInstance:
        """Arrays are rebuilt from the stored floats, which round-trip exactly"""
        c = self.certificate
        if not isinstance(self.problem.A, DenseOperator):
            raise ProblemFileError("instance bundles carry their operator inline")
        smoothed = None
        if c.smoothed is not None:
            s = c.smoothed
            smoothed = SmoothedCertificate(mu=s.mu, x0=np.array(s.x0), x=np.array(s.x), lam=np.array(s.lam), report=s.report)
        return ExactInstance(
            kind=c.kind,
            A=np.array(self.problem.A.rows, dtype=np.float64),
            b=np.array(self.problem.y, dtype=np.float64),
            x_star=np.array(c.x_star),
            lam_star=np.array(c.lam_star),
            d=np.array(c.d),
            report=c.report,
            eps=c.eps,
            delta=c.delta,
            seed=c.seed,
            smoothed=smoothed,
        )


def save_bundle(instance: ExactInstance, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(InstanceBundle.from_instance(instance).model_dump_json(by_alias=True, indent=1))
    return path


def load_bundle(path: Union[str, Path]) -> ExactInstance:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(str(path))
    try:
        bundle = InstanceBundle.model_validate(json.loads(path.read_text()))
    except (json.JSONDecodeError, ValidationError) as e:
        raise ProblemFileError(f"Invalid instance bundle: {str(e)}", {"path": str(path)})
    return bundle.to_instance()
