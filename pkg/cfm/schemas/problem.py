"""
Problem file schema
A problem file names a model kind, its operators and data, and loads into a ModelSpec
"""
import json
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..core.config import settings
from ..core.errors import ProblemFileError
from ..models import ModelKind, ModelSpec
from ..operators import LinOp, Space, identity, make_dense, make_diff2d, make_partial_dct, make_subsample
from ..operators.io import load_image, load_matrix


class DenseOperator(BaseModel):
    """Inline matrix rows; shape optionally reinterprets the input as an n1 x n2 matrix"""
    type: Literal["dense"] = "dense"
    rows: List[List[float]]
    shape: Optional[Tuple[int, int]] = None


class MatrixFileOperator(BaseModel):
    """Matrix stored as CSV or CFM1 binary, path relative to the problem file"""
    type: Literal["matrix_file"] = "matrix_file"
    path: str
    shape: Optional[Tuple[int, int]] = None


class IdentityOperator(BaseModel):
    type: Literal["identity"] = "identity"
    n: Optional[int] = Field(default=None, ge=1)
    shape: Optional[Tuple[int, int]] = None


class PartialDCTOperator(BaseModel):
    type: Literal["partial_dct"] = "partial_dct"
    n: int = Field(ge=1)
    rows: List[int]


class SubsampleOperator(BaseModel):
    type: Literal["subsample"] = "subsample"
    n1: int = Field(ge=1)
    n2: int = Field(ge=1)
    entries: List[Tuple[int, int]]


class Diff2DOperator(BaseModel):
    type: Literal["diff2d"] = "diff2d"
    n: int = Field(ge=2)


OperatorPayload = Annotated[
    Union[DenseOperator, MatrixFileOperator, IdentityOperator, PartialDCTOperator, SubsampleOperator, Diff2DOperator],
    Field(discriminator="type"),
]


class ImageData(BaseModel):
    """Grayscale image used as data, flattened column-major"""
    type: Literal["image"] = "image"
    path: str
    size: Optional[Tuple[int, int]] = None


class ProblemFile(BaseModel):
    """On-disk description of one model instance"""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    kind: ModelKind
    name: str = ""
    A: OperatorPayload
    W: Optional[OperatorPayload] = None
    y: Union[List[float], ImageData]
    delta: Optional[float] = None
    eps: Optional[float] = None
    alpha_w: Optional[float] = None
    beta_tv: Optional[float] = None
    mu: Optional[float] = None
    x0: Optional[List[float]] = None
    ratios: Optional[List[float]] = None
    l1_weights: Optional[List[float]] = None
    x_ref: Optional[List[float]] = None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ProblemFile":
        """Read a JSON or YAML problem file"""
        path = Path(path)
        if not path.is_file():
            raise FileNotFoundError(str(path))
        text = path.read_text()
        try:
            data = yaml.safe_load(text) if path.suffix.lower() in (".yaml", ".yml") else json.loads(text)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ProblemFileError(f"Failed to parse problem file: {str(e)}", {"path": str(path)})
        return cls.parse(data, path)

    @classmethod
    def parse(cls, data, path: Optional[Path] = None) -> "ProblemFile":
        # instance bundles wrap a problem next to their certificate
        if isinstance(data, dict) and "certificate" in data and "problem" in data:
            data = data["problem"]
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ProblemFileError(
                "Invalid problem file",
                {"path": str(path) if path else None, "errors": e.errors(include_url=False, include_context=False)},
            )

    def to_spec(self, base_dir: Optional[Union[str, Path]] = None) -> ModelSpec:
        """Instantiate operators and data; relative paths resolve against base_dir"""
        base = Path(base_dir) if base_dir is not None else Path(".")
        A = build_operator(self.A, base, "A")
        W = build_operator(self.W, base, "W") if self.W is not None else None
        if isinstance(self.y, ImageData):
            y = load_image(_resolve(base, self.y.path), self.y.size).flatten(order="F")
        else:
            y = np.asarray(self.y, dtype=np.float64)
        return ModelSpec(
            kind=self.kind,
            A=A,
            y=y,
            W=W,
            delta=self.delta,
            eps=self.eps,
            alpha_w=self.alpha_w,
            beta_tv=self.beta_tv,
            mu=self.mu,
            x0=_array(self.x0),
            ratios=self.ratios,
            l1_weights=_array(self.l1_weights),
            name=self.name or self.kind.value,
        )

    def reference(self) -> Optional[np.ndarray]:
        return _array(self.x_ref)


def _array(values: Optional[List[float]]) -> Optional[np.ndarray]:
    return None if values is None else np.asarray(values, dtype=np.float64)


def _resolve(base: Path, path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else base / p


def _input_space(n: int, shape: Optional[Tuple[int, int]]) -> Space:
    if shape is None:
        return Space.real(n)
    if shape[0] * shape[1] != n:
        raise ProblemFileError("operator shape does not match its column count", {"shape": list(shape), "columns": n})
    return Space.matrix(*shape)


def build_operator(payload, base: Path, name: str) -> LinOp:
    """LinOp for one operator payload"""
    if isinstance(payload, (DenseOperator, MatrixFileOperator)):
        M = np.asarray(payload.rows, dtype=np.float64) if isinstance(payload, DenseOperator) else load_matrix(_resolve(base, payload.path))
        if M.ndim != 2:
            raise ProblemFileError(f"operator {name} must be a 2-D matrix")
        return make_dense(M, in_space=_input_space(M.shape[1], payload.shape), name=name)
    if isinstance(payload, IdentityOperator):
        if payload.shape is not None:
            return identity(Space.matrix(*payload.shape))
        if payload.n is None:
            raise ProblemFileError(f"identity operator {name} needs n or shape")
        return identity(Space.real(payload.n))
    if isinstance(payload, PartialDCTOperator):
        return make_partial_dct(payload.rows, payload.n, name=name)
    if isinstance(payload, SubsampleOperator):
        return make_subsample(payload.entries, payload.n1, payload.n2, name=name)
    if isinstance(payload, Diff2DOperator):
        return make_diff2d(payload.n, name=name)
    raise ProblemFileError(f"unsupported operator payload for {name}")


def dense_problem(kind: ModelKind, A: np.ndarray, y: np.ndarray, **params) -> ProblemFile:
    """ProblemFile with an inline dense operator"""
    return ProblemFile(kind=kind, A=DenseOperator(rows=np.asarray(A).tolist()), y=np.asarray(y).tolist(), **params)
