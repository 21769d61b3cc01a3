"""
Variant comparison
One trace per (variant, step policy) on the same smoothed model, plus a
comparison table on a common operator-count axis
"""
import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.errors import DivergenceError
from ..models import ModelSpec, build
from ..schemas import BenchRow, BenchSummary, RunConfig
from ..solvers import SolverOptions, StepPolicy, Trace, Variant, solve
from .runner import load_problem, smoothing_mu
from .writers import ensure_dir, write_json, write_table

logger = logging.getLogger(__name__)


def run_variant(spec: ModelSpec, mu: float, opts: SolverOptions, x_ref: Optional[np.ndarray]) -> Trace:
    """Trace of one variant; a diverged run returns its partial trace"""
    cd = build(spec, mu=mu)
    try:
        return solve(cd, opts, x_ref=x_ref).trace
    except DivergenceError as e:
        logger.warning("%s (%s) diverged: %s", opts.variant.value, opts.step.value, e.message)
        return e.trace


def ops_axis(trace: Trace) -> List[int]:
    return [row.fwd + row.adj for row in trace.rows]


def align(traces: Dict[str, Trace], metric: str) -> List[list]:
    """Rows (ops, value per run) over the union of operator counts

    Each run reports the metric of its last row with at most that many
    operator applications; cells before its first row stay empty.
    """
    grid = sorted({ops for trace in traces.values() for ops in ops_axis(trace)})
    columns = []
    for trace in traces.values():
        ops = np.array(ops_axis(trace))
        values = trace.column(metric)
        idx = np.searchsorted(ops, grid, side="right") - 1
        columns.append([values[i] if i >= 0 else None for i in idx])
    return [[g] + [col[k] for col in columns] for k, g in enumerate(grid)]


def compare_variants(
    spec: ModelSpec,
    mu: float,
    base: SolverOptions,
    variants: Sequence[Variant],
    steps: Sequence[StepPolicy],
    x_ref: Optional[np.ndarray] = None,
) -> Dict[str, Trace]:
    traces = {}
    for step in steps:
        for variant in variants:
            opts = base.model_copy(update={"variant": variant, "step": step})
            traces[f"{variant.value}_{step.value}"] = run_variant(spec, mu, opts, x_ref)
    return traces


def cmd_bench(config: RunConfig) -> BenchSummary:
    """Run every configured variant and write trace_<variant>_<step>.csv plus comparison.csv"""
    spec, x_ref = load_problem(config)
    out = ensure_dir(config.out)
    mu = smoothing_mu(spec)
    traces = compare_variants(spec, mu, config.solver, config.variants, config.steps, x_ref)

    summary = BenchSummary(kind=spec.kind.value, mu=mu)
    for name, trace in traces.items():
        path = out / f"trace_{name}.csv"
        trace.to_csv(path)
        variant, step = name.rsplit("_", 1)
        last = trace.last
        summary.runs.append(
            BenchRow(
                variant=variant,
                step=step,
                iterations=last.iter,
                fwd=last.fwd,
                adj=last.adj,
                phi=last.phi,
                err=last.err,
                trace=str(path),
            )
        )
    metric = "err" if x_ref is not None else "phi"
    comparison = write_table(out / "comparison.csv", ["ops"] + list(traces), align(traces, metric))
    summary.comparison = str(comparison)
    write_json(out / "bench.json", summary)
    logger.info("bench: %d runs on %s, comparison by %s", len(traces), spec.name, metric)
    return summary
