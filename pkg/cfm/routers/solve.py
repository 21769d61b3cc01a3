"""
Solve router
Runs the same solve pipeline as the command line inside a scratch directory
"""
import logging
import tempfile
from pathlib import Path
from typing import List, Optional

from fastapi import APIRouter, HTTPException, status
from pydantic import BaseModel, Field

from ..continuation import ContinuationOptions
from ..harness import cmd_solve
from ..operators.io import load_matrix
from ..schemas import ProblemFile, RunConfig, Summary
from ..solvers import SolverOptions

logger = logging.getLogger(__name__)

router = APIRouter(tags=["Solve"])


class SolveRequest(BaseModel):
    """Problem plus run options; operators should be inline"""

    problem: ProblemFile
    solver: SolverOptions = Field(default_factory=SolverOptions)
    continuation: Optional[ContinuationOptions] = None
    mu: Optional[float] = Field(default=None, gt=0)
    metrics: List[str] = Field(default_factory=lambda: ["objective", "feasibility", "err"])


class SolveResponse(BaseModel):
    summary: Summary
    x: List[float]


@router.post("/solve", response_model=SolveResponse)
def solve_problem(request: SolveRequest):
    """
    Solve one problem

    Returns:
        Summary of the run and the solution vector
    """
    with tempfile.TemporaryDirectory(prefix="cfm-") as tmp:
        tmp = Path(tmp)
        problem_path = tmp / "problem.json"
        problem_path.write_text(request.problem.model_dump_json(by_alias=True))
        config = RunConfig.parse(
            {
                "problem": str(problem_path),
                "solver": request.solver.model_dump(),
                "continuation": None if request.continuation is None else request.continuation.model_dump(),
                "mu": request.mu,
                "metrics": request.metrics,
                "out": str(tmp / "out"),
            }
        )
        try:
            summary = cmd_solve(config)
        except FileNotFoundError as e:
            raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"No such file: {e}")
        x = load_matrix(tmp / "out" / "x.cfm").reshape(-1)
    # scratch files are gone once the response is built
    summary.files = {}
    logger.info("HTTP solve of %s finished in %.3fs", summary.name, summary.wall_time)
    return SolveResponse(summary=summary, x=x.tolist())
