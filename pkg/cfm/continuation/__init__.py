"""Outer continuation loops over the smoothing parameter and prox center"""
from .loop import OUTER_COLUMNS, ContinuationResult, InnerResult, OuterRow, OuterTrace, run_continuation
from .models import continue_accelerated, continue_standard, make_inner, run, solve_reweighted
from .options import CenterUpdate, ContinuationMode, ContinuationOptions
