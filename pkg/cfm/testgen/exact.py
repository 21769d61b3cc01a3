"""
Test problems with exactly known solutions
An approximate primal-dual pair from a high-accuracy solve is turned into an
exact one by perturbing A to A D (basis pursuit, LASSO) or by solving the KKT
equalities on the identified supports (Dantzig)
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..continuation import CenterUpdate, ContinuationMode, ContinuationOptions, run
from ..core.errors import CertificateError, ParameterError
from ..models import ModelKind, ModelSpec, build, default_mu
from ..operators import make_dense
from ..solvers import SolverOptions, Variant, solve
from .certify import (
    KINDS,
    ExactInstance,
    SmoothedCertificate,
    certify,
    certify_smoothed_dantzig,
    require,
    support_of,
)
from .signals import gen_gaussian_matrix, gen_sparse_signal

logger = logging.getLogger(__name__)

OFF_SUPPORT_SHRINK = 0.99
STRICT_BOUND = 1.0 - 1e-8
DEFAULT_BUDGET = 5000


def high_accuracy_solve(spec: ModelSpec, budget: int = DEFAULT_BUDGET) -> Tuple[np.ndarray, np.ndarray]:
    """Approximate (x, lambda) of the unsmoothed model via recentering continuation

    Returns lambda = -z, the sign convention of the certificates.
    """
    copts = ContinuationOptions(
        mode=ContinuationMode.STANDARD,
        center=CenterUpdate.RECENTER,
        inner_tol0=1e-6,
        final_tol=1e-12,
        max_outer=50,
        outer_tol=1e-13,
    )
    sopts = SolverOptions(variant=Variant.AT, tol=1e-12, max_iters=budget)
    result = run(spec, copts, sopts)
    return result.x, -result.z


def perturbation(x_hat: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonal d with (d u)_T = sign(x_T) and |d u| < 1 off T

    Args:
        x_hat: approximate primal solution
        u: A^T lambda at the approximate dual solution

    Returns:
        (d, T) with T the boolean support mask
    """
    T = support_of(x_hat)
    uT = u[T]
    if np.any(uT == 0):
        raise CertificateError("A^T lambda vanishes on the support", {"support": np.flatnonzero(T).tolist()})
    d = np.ones(u.size)
    d[T] = np.sign(x_hat[T]) / uT
    if np.any(d[T] <= 0):
        raise CertificateError("dual certificate disagrees in sign with the primal support")
    off = ~T
    big = off & (np.abs(u) >= STRICT_BOUND)
    d[big] = OFF_SUPPORT_SHRINK / np.abs(u[big])
    return d, T


def _check_support(A_T: np.ndarray, m: int) -> None:
    k = A_T.shape[1]
    if k > m:
        raise CertificateError(f"support of size {k} exceeds the {m} measurements", {"support": k, "m": m})
    if k and np.linalg.matrix_rank(A_T) < k:
        raise CertificateError("columns on the support are rank deficient", {"support": k})


def gen_basis_pursuit_exact(
    A: np.ndarray,
    x_tilde: np.ndarray,
    budget: int = DEFAULT_BUDGET,
    seed: Optional[int] = None,
) -> ExactInstance:
    """Basis pursuit instance min ||x||_1 s.t. A D x = b with certified (x*, lambda*)

    b = A x_tilde is solved approximately, A is perturbed to A D, and x* is
    re-solved on the support by least squares; the data are then taken as
    b = (A D) x* so that the equality holds to rounding.
    """
    A = np.array(A, dtype=np.float64)
    m, n = A.shape
    b = A @ x_tilde
    spec = ModelSpec(kind=ModelKind.BASIS_PURSUIT, A=make_dense(A), y=b, name="bp-exact")
    x_hat, lam = high_accuracy_solve(spec, budget)
    d, T = perturbation(x_hat, A.T @ lam)
    A_pert = A * d
    _check_support(A_pert[:, T], m)

    x_star = np.zeros(n)
    if np.any(T):
        x_star[T] = np.linalg.lstsq(A_pert[:, T], b, rcond=None)[0]
    if np.any(np.sign(x_star[T]) != np.sign(x_hat[T])):
        raise CertificateError("cleaning changed the sign pattern of the solution")
    b_clean = A_pert @ x_star
    logger.debug("bp cleaning moved b by %.3g (relative)", np.linalg.norm(b_clean - b) / max(np.linalg.norm(b), 1e-300))

    instance = ExactInstance(kind="basis_pursuit", A=A_pert, b=b_clean, x_star=x_star, lam_star=lam, d=d, report=None, seed=seed)
    instance.report = require(certify(instance), "basis pursuit certificate")
    logger.info("basis pursuit instance: |T|=%d, max|d-1|=%.3g", instance.report.support_size, instance.report.d_deviation)
    return instance


def gen_lasso_exact(
    A: np.ndarray,
    x_tilde: np.ndarray,
    eps: float,
    budget: int = DEFAULT_BUDGET,
    seed: Optional[int] = None,
) -> ExactInstance:
    """LASSO instance min ||x||_1 s.t. ||A D x - b||_2 <= eps with certified (x*, lambda*)

    x* keeps the support and signs of the approximate solution, and the data
    are set to b = A D x* + eps lambda* / ||lambda*||.
    """
    if not eps > 0:
        raise ParameterError("LASSO instances need eps > 0", {"eps": eps})
    A = np.array(A, dtype=np.float64)
    m, n = A.shape
    b = A @ x_tilde
    spec = ModelSpec(kind=ModelKind.LASSO, A=make_dense(A), y=b, eps=eps, name="lasso-exact")
    x_hat, lam = high_accuracy_solve(spec, budget)
    lam_norm = float(np.linalg.norm(lam))
    if lam_norm == 0:
        raise CertificateError("dual solution is zero; eps is at least ||b||", {"eps": eps})
    d, T = perturbation(x_hat, A.T @ lam)
    A_pert = A * d
    _check_support(A_pert[:, T], m)

    x_star = np.zeros(n)
    x_star[T] = x_hat[T] / d[T]
    b_tilde = A_pert @ x_star + eps * lam / lam_norm

    instance = ExactInstance(kind="lasso", A=A_pert, b=b_tilde, x_star=x_star, lam_star=lam, d=d, report=None, eps=eps, seed=seed)
    instance.report = require(certify(instance), "LASSO certificate")
    logger.info("LASSO instance: |T|=%d, max|d-1|=%.3g", instance.report.support_size, instance.report.d_deviation)
    return instance


def _kkt_on_supports(
    G: np.ndarray,
    Atb: np.ndarray,
    delta: float,
    T: np.ndarray,
    S: np.ndarray,
    x_signs: np.ndarray,
    lam_signs: np.ndarray,
    mu: float = 0.0,
    x0: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Solve the Dantzig KKT equalities for (x_T, lambda_S)

        mu x_T - G_TS lam_S = mu x0_T - sign(x_T)
        G_ST x_T            = (A^T b)_S - delta sign(lam_S)

    With mu = 0 this is the unsmoothed system.
    """
    n = G.shape[0]
    t, s = int(T.sum()), int(S.sum())
    M = np.zeros((t + s, t + s))
    M[:t, :t] = mu * np.eye(t)
    M[:t, t:] = -G[np.ix_(T, S)]
    M[t:, :t] = G[np.ix_(S, T)]
    rhs = np.concatenate([
        (mu * x0[T] if x0 is not None else np.zeros(t)) - x_signs,
        Atb[S] - delta * lam_signs,
    ])
    if t != s and mu == 0:
        logger.debug("non-square Dantzig KKT system: |T|=%d, |S|=%d", t, s)
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    x, lam = np.zeros(n), np.zeros(n)
    x[T] = sol[:t]
    lam[S] = sol[t:]
    if np.any(np.sign(x[T]) != x_signs) or np.any(np.sign(lam[S]) != lam_signs):
        raise CertificateError("KKT solve on the supports changed a sign", {"support": t, "dual_support": s})
    return x, lam


def smoothed_dantzig_certificate(
    A: np.ndarray,
    b: np.ndarray,
    delta: float,
    mu: float,
    x0: Optional[np.ndarray] = None,
    budget: int = DEFAULT_BUDGET,
) -> SmoothedCertificate:
    """Exact solution of min ||x||_1 + mu/2 ||x - x0||^2 s.t. ||A^T(b - Ax)||_inf <= delta"""
    n = A.shape[1]
    x0 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=np.float64)
    G = A.T @ A
    Atb = A.T @ b
    spec = ModelSpec(kind=ModelKind.DANTZIG, A=make_dense(A), y=b, delta=delta, name="dantzig-smoothed")
    result = solve(build(spec, mu=mu, x0=x0), SolverOptions(tol=1e-13, max_iters=budget))
    x_hat, lam_hat = result.x, -result.z
    T, S = support_of(x_hat), support_of(lam_hat)
    x, lam = _kkt_on_supports(G, Atb, delta, T, S, np.sign(x_hat[T]), np.sign(lam_hat[S]), mu=mu, x0=x0)
    report = require(certify_smoothed_dantzig(A, b, delta, mu, x0, x, lam), f"smoothed Dantzig certificate at mu={mu:g}")
    return SmoothedCertificate(mu=mu, x0=x0, x=x, lam=lam, report=report)


def gen_dantzig_exact(
    A: np.ndarray,
    x_tilde: np.ndarray,
    delta: float,
    mu: Optional[float] = None,
    budget: int = DEFAULT_BUDGET,
    seed: Optional[int] = None,
    b: Optional[np.ndarray] = None,
) -> ExactInstance:
    """Dantzig instance with unsmoothed and smoothed (mu, x0 = 0) certificates

    The data are not perturbed; both certificates come from solving the KKT
    equalities on the supports found by a high-accuracy solve.

    Args:
        A: m x n matrix
        x_tilde: signal generating b = A x_tilde when b is not given
        delta: constraint level
        mu: smoothing parameter of the smoothed certificate (default_mu when None)
        budget: iteration cap of each inner solve
        seed: recorded on the instance
        b: explicit data, e.g. a noisy measurement

    Returns:
        ExactInstance with d = 1
    """
    if delta < 0:
        raise ParameterError("delta must be non-negative", {"delta": delta})
    A = np.array(A, dtype=np.float64)
    n = A.shape[1]
    b = A @ x_tilde if b is None else np.asarray(b, dtype=np.float64)
    Atb = A.T @ b
    d = np.ones(n)
    spec = ModelSpec(kind=ModelKind.DANTZIG, A=make_dense(A), y=b, delta=delta, name="dantzig-exact")
    if mu is None:
        mu = default_mu(spec)

    if delta >= float(np.max(np.abs(Atb))):
        # x = 0 is feasible and lambda = 0 certifies it
        zero = np.zeros(n)
        instance = ExactInstance(kind="dantzig", A=A, b=b, x_star=zero, lam_star=zero.copy(), d=d, report=None, delta=delta, seed=seed)
        instance.report = require(certify(instance), "Dantzig certificate")
        sm_report = certify_smoothed_dantzig(A, b, delta, mu, zero, zero, zero)
        instance.smoothed = SmoothedCertificate(mu=mu, x0=zero, x=zero, lam=zero, report=sm_report)
        return instance

    x_hat, lam_hat = high_accuracy_solve(spec, budget)
    T, S = support_of(x_hat), support_of(lam_hat)
    x_star, lam_star = _kkt_on_supports(A.T @ A, Atb, delta, T, S, np.sign(x_hat[T]), np.sign(lam_hat[S]))
    instance = ExactInstance(kind="dantzig", A=A, b=b, x_star=x_star, lam_star=lam_star, d=d, report=None, delta=delta, seed=seed)
    instance.report = require(certify(instance), "Dantzig certificate")
    instance.smoothed = smoothed_dantzig_certificate(A, b, delta, mu, budget=budget)
    logger.info(
        "Dantzig instance: |T|=%d, |S|=%d, smoothed at mu=%.4g",
        instance.report.support_size,
        instance.report.dual_support_size,
        mu,
    )
    return instance


def mu_sweep(
    instance: ExactInstance,
    mus: Sequence[float],
    budget: int = 20000,
    x0: Optional[np.ndarray] = None,
) -> List[Tuple[float, float]]:
    """(mu, ||x_mu - x*|| / ||x*||) for smoothed Dantzig solves centred at x0"""
    if instance.kind != "dantzig":
        raise ParameterError("mu sweeps are defined for Dantzig instances")
    spec = ModelSpec(kind=ModelKind.DANTZIG, A=make_dense(instance.A), y=instance.b, delta=instance.delta)
    scale = max(float(np.linalg.norm(instance.x_star)), 1e-300)
    rows = []
    for mu in mus:
        result = solve(build(spec, mu=mu, x0=x0), SolverOptions(tol=1e-13, max_iters=budget))
        err = float(np.linalg.norm(result.x - instance.x_star)) / scale
        logger.debug("mu=%.4g: err=%.3g after %d iterations", mu, err, result.iterations)
        rows.append((float(mu), err))
    return rows


def plateau_mu(rows: Sequence[Tuple[float, float]], tol: float = 1e-6) -> Optional[float]:
    """Largest mu below which every sweep error is at most tol"""
    best = None
    for mu, err in sorted(rows):
        if err > tol:
            break
        best = mu
    return best


def generate(
    kind: str,
    m: int,
    n: int,
    s: int,
    dynamic_range_db: float = 40.0,
    seed: int = 0,
    eps: Optional[float] = None,
    delta: Optional[float] = None,
    mu: Optional[float] = None,
    attempts: int = 5,
    budget: int = DEFAULT_BUDGET,
) -> ExactInstance:
    """Gaussian instance of the given kind, regenerating with seed + 1 on failure"""
    if kind not in KINDS:
        raise ParameterError(f"unknown instance kind {kind!r}", {"kinds": list(KINDS)})
    last_error = None
    for k in range(attempts):
        trial = seed + k
        A = gen_gaussian_matrix(m, n, seed=trial)
        x_tilde = gen_sparse_signal(n, s, dynamic_range_db, seed=trial)
        try:
            if kind == "basis_pursuit":
                return gen_basis_pursuit_exact(A, x_tilde, budget, seed=trial)
            if kind == "lasso":
                level = eps if eps is not None else 1e-2 * float(np.linalg.norm(A @ x_tilde))
                return gen_lasso_exact(A, x_tilde, level, budget, seed=trial)
            level = delta if delta is not None else 1e-2 * float(np.max(np.abs(A.T @ (A @ x_tilde))))
            return gen_dantzig_exact(A, x_tilde, level, mu, budget, seed=trial)
        except CertificateError as e:
            logger.warning("seed %d: %s; regenerating", trial, e.message)
            last_error = e

    raise CertificateError(f"no certifiable {kind} instance after {attempts} attempts", {"seed": seed, "last": last_error.to_dict()})
