"""First-order solvers for composite problems"""
from .cached import solve_at_cached
from .core import SolverResult, solve
from .options import TWO_PROJECTION, BacktrackMode, SolverOptions, StepPolicy, Variant
from .problems import CompositeProblem, Quadratic
from .restart import restart_wrapper
from .steps import (
    BacktrackResult,
    WeightedGradientAccumulator,
    accumulate_weighted_gradient,
    backtrack_check,
    estimate_L0,
    theta_update,
)
from .trace import TRACE_COLUMNS, Trace, TraceRow
