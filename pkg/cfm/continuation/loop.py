"""
Standard and accelerated continuation
The outer loop re-centres the prox term at Y_j and, in accelerated mode,
extrapolates Y_{j+1} = X_{j+1} + j/(j+3) (X_{j+1} - X_j)
"""
import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field

from ..core.config import settings
from ..core.errors import CFMError
from ..core.metrics import relative_error
from ..solvers.trace import Trace, fmt_float
from .options import CenterUpdate, ContinuationMode, ContinuationOptions

logger = logging.getLogger(__name__)

OUTER_COLUMNS = ["j", "mu", "inner_iters", "fwd", "adj", "h_value", "err"]


@dataclass
class InnerResult:
    """What one inner solve returns to the outer loop"""

    x: np.ndarray
    z: Optional[np.ndarray]
    f_value: float
    iterations: int = 0
    fwd: int = 0
    adj: int = 0
    svd_calls: int = 0
    trace: Optional[Trace] = None


InnerSolve = Callable[[np.ndarray, float, Optional[np.ndarray], float], InnerResult]


class OuterRow(BaseModel):
    j: int
    mu: float
    inner_iters: int
    fwd: int
    adj: int
    h_value: float
    err: Optional[float] = None
    svd_calls: int = 0  # cumulative; not part of the CSV


class OuterTrace(BaseModel):
    schema_version: str = Field(default_factory=lambda: settings.SCHEMA_VERSION, alias="schema")
    mode: str = ContinuationMode.STANDARD.value
    rows: List[OuterRow] = Field(default_factory=list)

    model_config = {"populate_by_name": True}

    def column(self, name: str) -> list:
        return [getattr(row, name) for row in self.rows]

    def to_csv(self, path: Optional[Union[str, Path]] = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(OUTER_COLUMNS)
        for r in self.rows:
            writer.writerow([r.j, fmt_float(r.mu), r.inner_iters, r.fwd, r.adj, fmt_float(r.h_value), fmt_float(r.err)])
        text = buf.getvalue()
        if path is not None:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(text)
        return text


@dataclass
class ContinuationResult:
    x: np.ndarray
    z: Optional[np.ndarray]
    trace: OuterTrace
    converged: bool
    iterates: List[np.ndarray] = field(default_factory=list)
    centers: List[np.ndarray] = field(default_factory=list)
    inner_traces: List[Trace] = field(default_factory=list)


def run_continuation(
    inner: InnerSolve,
    Y0: np.ndarray,
    opts: ContinuationOptions,
    mu0: float,
    x_ref: Optional[np.ndarray] = None,
) -> ContinuationResult:
    """Outer loop shared by both modes

    Args:
        inner: inner(Y, mu, z_warm, tol) -> InnerResult for
            argmin f(x) + mu/2 ||x - Y||^2 over the feasible set
        Y0: first prox center (X_0 = Y0)
        opts: continuation options
        mu0: first smoothing parameter
        x_ref: optional reference solution for the err column

    Returns:
        ContinuationResult with the last X and the outer trace
    """
    Y = np.array(Y0, dtype=np.float64)
    X_prev = Y.copy()
    mu = float(mu0)
    z = None
    fwd = adj = svd_calls = 0
    trace = OuterTrace(mode=opts.mode.value)
    result = ContinuationResult(x=X_prev, z=None, trace=trace, converged=False)
    logger.info("%s continuation: mu0=%.4g, factor=%g, max %d outer steps", opts.mode.value, mu, opts.mu_factor, opts.max_outer)

    for j in range(opts.max_outer):
        tol = opts.inner_tol(j)
        try:
            step = inner(Y, mu, z if opts.warm_start else None, tol)
        except CFMError as e:
            e.detail.setdefault("outer_step", j)
            raise
        X = np.asarray(step.x, dtype=np.float64)
        z = step.z
        fwd += step.fwd
        adj += step.adj
        svd_calls += step.svd_calls
        diff = X - Y
        trace.rows.append(
            OuterRow(
                j=j,
                mu=mu,
                inner_iters=step.iterations,
                fwd=fwd,
                adj=adj,
                h_value=step.f_value + 0.5 * mu * float(np.dot(diff, diff)),
                err=relative_error(X, x_ref),
                svd_calls=svd_calls,
            )
        )
        result.centers.append(Y)
        result.iterates.append(X)
        if step.trace is not None:
            result.inner_traces.append(step.trace)

        if opts.mode == ContinuationMode.ACCELERATED:
            Y = X + (j / (j + 3.0)) * (X - X_prev)
        elif opts.center == CenterUpdate.RECENTER:
            Y = X
        mu *= opts.mu_factor

        change = float(np.linalg.norm(X - X_prev)) / max(1.0, float(np.linalg.norm(X_prev)))
        X_prev = X
        if j > 0 and change <= opts.outer_tol:
            result.converged = True
            break

    result.x = X_prev
    result.z = z
    logger.info("continuation finished after %d outer steps (converged=%s)", len(trace.rows), result.converged)
    return result
