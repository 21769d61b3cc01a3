"""
Desk-scale experiment reproductions
Each figure id writes the CSV behind one experiment; no plots are rendered
"""
import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy import fft

from ..continuation import ContinuationMode, ContinuationOptions, run
from ..core.errors import ParameterError
from ..models import ModelKind, ModelSpec, build, default_mu
from ..operators import LinOp, Space, identity, make_dense, make_subsample
from ..solvers import Quadratic, SolverOptions, StepPolicy, Variant, solve
from ..testgen import add_noise, gen_low_rank, gen_sampling, generate, mu_sweep
from .bench import compare_variants, ops_axis
from .metrics import compute_psnr
from .writers import ensure_dir, write_table

logger = logging.getLogger(__name__)

FIG2_MUS = [1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001]


def dantzig_instance(seed: int):
    """Certified Dantzig instance: 32 x 128 Gaussian, 10 nonzeros, 40 dB"""
    return generate("dantzig", m=32, n=128, s=10, dynamic_range_db=40.0, seed=seed)


def fig2(out: Path, seed: int) -> Path:
    """Exact penalty: smoothed-solution error against mu"""
    instance = dantzig_instance(seed)
    rows = mu_sweep(instance, FIG2_MUS)
    return write_table(out / "fig2.csv", ["mu", "err"], rows)


def fig3(out: Path, seed: int) -> Path:
    """All variants with fixed and backtracking steps on a smoothed Dantzig model

    The reference is the certified solution of the smoothed model itself.
    """
    instance = dantzig_instance(seed)
    sm = instance.smoothed
    spec = ModelSpec(kind=ModelKind.DANTZIG, A=make_dense(instance.A), y=instance.b, delta=instance.delta)
    base = SolverOptions(max_iters=1000, tol=1e-14, seed=seed)
    traces = compare_variants(spec, sm.mu, base, list(Variant), [StepPolicy.FIXED, StepPolicy.BACKTRACKING], x_ref=sm.x)
    rows = []
    for name, trace in traces.items():
        variant, step = name.rsplit("_", 1)
        rows.extend([variant, step, ops, err] for ops, err in zip(ops_axis(trace), trace.column("err")))
    return write_table(out / "fig3.csv", ["variant", "step", "ops", "err"], rows)


def fig4(out: Path, seed: int) -> Path:
    """Standard against accelerated continuation on an 80 x 200 LASSO, fixed mu"""
    instance = generate("lasso", m=80, n=200, s=10, dynamic_range_db=20.0, seed=seed)
    spec = ModelSpec(kind=ModelKind.LASSO, A=make_dense(instance.A), y=instance.b, eps=instance.eps)
    mu = default_mu(spec)
    errors = {}
    for mode in (ContinuationMode.STANDARD, ContinuationMode.ACCELERATED):
        copts = ContinuationOptions(mode=mode, mu0=mu, inner_tol0=1e-10, final_tol=1e-10, max_outer=50, outer_tol=0.0)
        result = run(spec, copts, SolverOptions(max_iters=5000), x_ref=instance.x_star)
        errors[mode.value] = result.trace.column("err")
    count = max(len(v) for v in errors.values())
    rows = [[j] + [_at(errors[m], j) for m in ("standard", "accelerated")] for j in range(count)]
    return write_table(out / "fig4.csv", ["j", "standard", "accelerated"], rows)


def fig5(out: Path, seed: int) -> Path:
    """Fixed smoothing against both continuation schemes on a Dantzig model, by inner iterations"""
    instance = dantzig_instance(seed)
    spec = ModelSpec(kind=ModelKind.DANTZIG, A=make_dense(instance.A), y=instance.b, delta=instance.delta)
    mu = default_mu(spec)
    rows: List[list] = []

    fixed = solve(build(spec, mu=mu / 100.0), SolverOptions(max_iters=5000, tol=1e-12), x_ref=instance.x_star)
    rows.extend(["fixed", row.iter, row.err] for row in fixed.trace.rows)
    for mode in (ContinuationMode.STANDARD, ContinuationMode.ACCELERATED):
        copts = ContinuationOptions(mode=mode, mu0=mu, max_outer=30, outer_tol=1e-12)
        result = run(spec, copts, SolverOptions(max_iters=2000), x_ref=instance.x_star)
        total = 0
        for row in result.trace.rows:
            total += row.inner_iters
            rows.append([mode.value, total, row.err])
    return write_table(out / "fig5.csv", ["strategy", "iters", "err"], rows)


def strongly_convex_quadratic(n: int = 50, m: float = 0.07, L: float = 59.1, seed: int = 0) -> Quadratic:
    """Diagonal quadratic with spectrum geometrically spread over [m, L]"""
    rng = np.random.default_rng(seed)
    return Quadratic(np.geomspace(m, L, n), rng.standard_normal(n))


def fig6(out: Path, seed: int) -> Path:
    """GRA, AT and AT restarted every 100 iterations on a strongly convex quadratic"""
    runs = {
        "gra": SolverOptions(variant=Variant.GRA),
        "at": SolverOptions(variant=Variant.AT),
        "at_restart": SolverOptions(variant=Variant.AT, restart=100),
    }
    columns = {}
    for name, opts in runs.items():
        problem = strongly_convex_quadratic(seed=seed)
        opts = opts.model_copy(update={"step": StepPolicy.FIXED, "L": 59.1, "max_iters": 3000, "tol": 0.0})
        columns[name] = solve(problem, opts).trace.column("phi")
    count = max(len(v) for v in columns.values())
    rows = [[k] + [_at(columns[name], k) for name in runs] for k in range(count)]
    return write_table(out / "fig6.csv", ["iter"] + list(runs), rows)


def phantom(n: int = 32) -> np.ndarray:
    """Piecewise-constant test image with values in [0, 1]"""
    img = np.full((n, n), 0.2)
    img[n // 8: n // 2, n // 8: 3 * n // 4] = 0.8
    ii, jj = np.mgrid[0:n, 0:n]
    img[(ii - 2 * n // 3) ** 2 + (jj - n // 2) ** 2 <= (n // 5) ** 2] = 0.5
    return img


def dct2_operator(n: int) -> LinOp:
    """Orthonormal 2-D DCT of an n x n image"""
    space = Space.matrix(n, n)

    def fwd(x):
        return fft.dctn(x.reshape((n, n), order="F"), norm="ortho").reshape(-1, order="F")

    def adj(y):
        return fft.idctn(y.reshape((n, n), order="F"), norm="ortho").reshape(-1, order="F")

    return LinOp(space, space, fwd, adj, name="DCT2")


def fig7(out: Path, seed: int) -> Path:
    """Denoising with analysis, TV and analysis + TV, reporting PSNR"""
    n = 32
    clean = phantom(n)
    rng = np.random.default_rng(seed)
    noise = 0.05 * rng.standard_normal((n, n))
    y = (clean + noise).reshape(-1, order="F")
    eps = float(np.linalg.norm(noise))
    A = identity(Space.matrix(n, n))
    W = dct2_operator(n)
    specs = {
        "l1_analysis": ModelSpec(kind=ModelKind.L1_ANALYSIS, A=A, y=y, W=W, eps=eps),
        "tv": ModelSpec(kind=ModelKind.TV, A=A, y=y, eps=eps),
        "analysis_plus_tv": ModelSpec(kind=ModelKind.ANALYSIS_PLUS_TV, A=A, y=y, W=W, eps=eps, alpha_w=1.0, beta_tv=1.0),
    }
    rows = [["noisy", compute_psnr(y.reshape((n, n), order="F"), clean), 0]]
    for name, spec in specs.items():
        copts = ContinuationOptions(max_outer=10, outer_tol=1e-6)
        result = run(spec, copts, SolverOptions(max_iters=2000))
        iters = sum(result.trace.column("inner_iters"))
        rows.append([name, compute_psnr(result.x.reshape((n, n), order="F"), clean), iters])
    return write_table(out / "fig7.csv", ["model", "psnr", "iterations"], rows)


def mc_small(out: Path, seed: int, n1: int = 50, n2: int = 45, rank: int = 20, ratio: float = 0.67, snr: float = 30.0) -> Path:
    """Noisy completion of an n1 x n2 low-rank matrix from a fraction of its entries

    The default size is a 50 x 45 rank-20 matrix, 67% sampled, at 30 dB.
    svt_calls counts every SVD spent on x(z), one per evaluation.
    """
    X = gen_low_rank(n1, n2, rank, seed=seed)
    entries = gen_sampling(n1, n2, ratio, seed=seed)
    P = make_subsample(entries, n1, n2)
    x_true = X.reshape(-1, order="F")
    clean = P.forward(x_true)
    y = add_noise(clean, snr, seed=seed)
    spec = ModelSpec(kind=ModelKind.NUCLEAR_LASSO, A=P, y=y, eps=float(np.linalg.norm(y - clean)))
    copts = ContinuationOptions(mode=ContinuationMode.ACCELERATED, mu0=1e-2, max_outer=20, outer_tol=1e-8)
    sopts = SolverOptions(step=StepPolicy.FIXED, trace_objective=False, max_iters=500)
    result = run(spec, copts, sopts, x_ref=x_true)
    rows = [[row.j, row.svd_calls, row.err] for row in result.trace.rows]
    return write_table(out / "mc_small.csv", ["j", "svt_calls", "rel_err"], rows)


FIGURES: Dict[str, Callable[[Path, int], Path]] = {
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
    "mc_small": mc_small,
}


def cmd_reproduce(figure: str, out: str, seed: int = 0) -> Path:
    """Write the CSV behind one experiment under out"""
    try:
        fn = FIGURES[figure]
    except KeyError:
        raise ParameterError(f"unknown figure id {figure!r}", {"figures": sorted(FIGURES)})
    path = fn(ensure_dir(out), seed)
    logger.info("%s written to %s", figure, path)
    return path


def _at(values: List[Optional[float]], k: int) -> Optional[float]:
    """values[k], or the last value for runs that stopped early"""
    if not values:
        return None
    v = values[min(k, len(values) - 1)]
    return None if v is None or (isinstance(v, float) and math.isnan(v)) else v
