"""Restarted solves for (locally) strongly convex problems"""
from functools import partial
from typing import Callable, Optional

from .core import SolverResult, solve
from .options import SolverOptions


def restart_wrapper(problem, opts: SolverOptions, interval: Optional[int] = None) -> Callable[..., SolverResult]:
    """solve() with theta reset to 1 and zbar reset to z every `interval` iterations

    interval=None keeps opts.restart; GRA is unaffected since it never uses theta.
    """
    if interval is not None:
        opts = opts.model_copy(update={"restart": interval})
    return partial(solve, problem, opts)
