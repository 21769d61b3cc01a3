"""
KKT certificates for generated instances
Every residual is recomputed from the stored (A, b, x, lambda) alone, so a
certificate can be checked again after a round trip through a bundle
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel

from ..core.errors import CertificateError, ParameterError
from ..prox import soft_threshold

KKT_TOL = 1e-10
OFF_SUPPORT_MARGIN = 1e-8
SUPPORT_TOL = 1e-9

KINDS = ("basis_pursuit", "lasso", "dantzig")


class KKTReport(BaseModel):
    """Residuals of the optimality conditions; all are zero at an exact pair"""

    support_size: int
    dual_support_size: int = 0
    primal_residual: float
    dual_infeasibility: float
    stationarity: float
    complementarity: float = 0.0
    gap: float
    off_support_max: float
    d_deviation: float = 0.0
    strict: bool = True

    @property
    def max_residual(self) -> float:
        return max(self.primal_residual, self.dual_infeasibility, self.stationarity, self.complementarity, self.gap)

    def passed(self, tol: float = KKT_TOL) -> bool:
        if self.max_residual > tol:
            return False
        return not self.strict or self.off_support_max < 1.0 - OFF_SUPPORT_MARGIN


class SmoothedCertificate(BaseModel):
    """Exact solution of the smoothed problem at (mu, x0)"""

    model_config = {"arbitrary_types_allowed": True}

    mu: float
    x0: np.ndarray
    x: np.ndarray
    lam: np.ndarray
    report: KKTReport


@dataclass
class ExactInstance:
    """Perturbed operator, data, and a certified primal-dual pair

    A is the perturbed matrix A D (D = diag(d)); lam follows the certificate
    convention lambda = -z of the internal dual variable.
    """

    kind: str
    A: np.ndarray
    b: np.ndarray
    x_star: np.ndarray
    lam_star: np.ndarray
    d: np.ndarray
    report: KKTReport
    eps: Optional[float] = None
    delta: Optional[float] = None
    seed: Optional[int] = None
    smoothed: Optional[SmoothedCertificate] = None

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x_star)


def support_of(v: np.ndarray, tol: float = SUPPORT_TOL) -> np.ndarray:
    """Boolean mask of entries above tol relative to the largest entry"""
    v = np.asarray(v, dtype=np.float64)
    top = float(np.max(np.abs(v), initial=0.0))
    if top == 0:
        return np.zeros(v.size, dtype=bool)
    return np.abs(v) > tol * top


def _max_abs(v: np.ndarray) -> float:
    return float(np.max(np.abs(v), initial=0.0))


def _relative_gap(primal: float, dual: float) -> float:
    return abs(primal - dual) / max(1.0, abs(primal))


def _sign_residuals(u: np.ndarray, x: np.ndarray):
    """(max |u_T - sign x_T|, max |u_{T^c}|) with T = supp x"""
    T = x != 0
    return _max_abs(u[T] - np.sign(x[T])), _max_abs(u[~T])


def certify_basis_pursuit(A: np.ndarray, b: np.ndarray, x: np.ndarray, lam: np.ndarray, d: Optional[np.ndarray] = None) -> KKTReport:
    """A x = b, ||A^T lam||_inf <= 1, (A^T lam)_T = sign(x_T)"""
    u = A.T @ lam
    stationarity, off = _sign_residuals(u, x)
    return KKTReport(
        support_size=int(np.count_nonzero(x)),
        primal_residual=float(np.linalg.norm(A @ x - b)) / max(float(np.linalg.norm(b)), 1e-300),
        dual_infeasibility=max(0.0, _max_abs(u) - 1.0),
        stationarity=stationarity,
        gap=_relative_gap(float(np.sum(np.abs(x))), float(np.dot(b, lam))),
        off_support_max=off,
        d_deviation=0.0 if d is None else _max_abs(d - 1.0),
    )


def certify_lasso(A: np.ndarray, b: np.ndarray, eps: float, x: np.ndarray, lam: np.ndarray, d: Optional[np.ndarray] = None) -> KKTReport:
    """Basis-pursuit conditions plus b - A x = eps lam / ||lam||"""
    u = A.T @ lam
    r = b - A @ x
    lam_norm = float(np.linalg.norm(lam))
    if lam_norm == 0:
        raise CertificateError("LASSO certificate needs a nonzero dual vector")
    stationarity, off = _sign_residuals(u, x)
    scale = max(1.0, eps)
    return KKTReport(
        support_size=int(np.count_nonzero(x)),
        primal_residual=max(0.0, float(np.linalg.norm(r)) - eps) / scale,
        dual_infeasibility=max(0.0, _max_abs(u) - 1.0),
        stationarity=stationarity,
        complementarity=float(np.linalg.norm(r - eps * lam / lam_norm)) / scale,
        gap=_relative_gap(float(np.sum(np.abs(x))), float(np.dot(b, lam)) - eps * lam_norm),
        off_support_max=off,
        d_deviation=0.0 if d is None else _max_abs(d - 1.0),
    )


def _dantzig_common(A: np.ndarray, b: np.ndarray, delta: float, x: np.ndarray, lam: np.ndarray):
    G = A.T @ A
    Atb = A.T @ b
    v = G @ lam
    r = Atb - G @ x
    S = lam != 0
    scale = max(1.0, delta)
    primal = max(0.0, _max_abs(r) - delta) / scale
    comp = _max_abs(r[S] - delta * np.sign(lam[S])) / scale
    dual_tail = float(np.dot(Atb, lam)) - delta * float(np.sum(np.abs(lam)))
    return v, primal, comp, dual_tail, int(np.count_nonzero(S))


def certify_dantzig(A: np.ndarray, b: np.ndarray, delta: float, x: np.ndarray, lam: np.ndarray) -> KKTReport:
    """||A^T(b - Ax)||_inf <= delta, (A^T A lam) in d||x||_1, complementary slackness on supp(lam)"""
    v, primal, comp, dual_value, s_lam = _dantzig_common(A, b, delta, x, lam)
    stationarity, off = _sign_residuals(v, x)
    return KKTReport(
        support_size=int(np.count_nonzero(x)),
        dual_support_size=s_lam,
        primal_residual=primal,
        dual_infeasibility=max(0.0, _max_abs(v) - 1.0),
        stationarity=stationarity,
        complementarity=comp,
        gap=_relative_gap(float(np.sum(np.abs(x))), dual_value),
        off_support_max=off,
        strict=False,
    )


def certify_smoothed_dantzig(
    A: np.ndarray, b: np.ndarray, delta: float, mu: float, x0: np.ndarray, x: np.ndarray, lam: np.ndarray
) -> KKTReport:
    """Optimality of x for ||x||_1 + mu/2 ||x - x0||^2 under the Dantzig constraint

    Stationarity is x = SoftThreshold(x0 + A^T A lam / mu, 1 / mu).
    """
    if not mu > 0:
        raise ParameterError("smoothed certificate needs mu > 0", {"mu": mu})
    v, primal, comp, dual_tail, s_lam = _dantzig_common(A, b, delta, x, lam)
    x_lam = soft_threshold(x0 + v / mu, 1.0 / mu)
    T = x != 0
    shifted = mu * x0 + v
    prox_term = 0.5 * mu * float(np.dot(x - x0, x - x0))
    primal_value = float(np.sum(np.abs(x))) + prox_term
    inner = float(np.sum(np.abs(x_lam))) + 0.5 * mu * float(np.dot(x_lam - x0, x_lam - x0)) - float(np.dot(v, x_lam))
    return KKTReport(
        support_size=int(np.count_nonzero(x)),
        dual_support_size=s_lam,
        primal_residual=primal,
        dual_infeasibility=max(0.0, _max_abs(shifted[~T]) - 1.0),
        stationarity=_max_abs(mu * (x - x_lam)) / max(1.0, mu),
        complementarity=comp,
        gap=_relative_gap(primal_value, inner + dual_tail),
        off_support_max=_max_abs(shifted[~T]),
        strict=False,
    )


def certify(instance: ExactInstance) -> KKTReport:
    """Recompute the KKT report of an instance from its stored data"""
    if instance.kind == "basis_pursuit":
        return certify_basis_pursuit(instance.A, instance.b, instance.x_star, instance.lam_star, instance.d)
    if instance.kind == "lasso":
        return certify_lasso(instance.A, instance.b, instance.eps, instance.x_star, instance.lam_star, instance.d)
    if instance.kind == "dantzig":
        return certify_dantzig(instance.A, instance.b, instance.delta, instance.x_star, instance.lam_star)
    raise CertificateError(f"no certificate for {instance.kind!r} instances", {"kinds": list(KINDS)})


def certify_smoothed(instance: ExactInstance) -> Optional[KKTReport]:
    sm = instance.smoothed
    if sm is None:
        return None
    return certify_smoothed_dantzig(instance.A, instance.b, instance.delta, sm.mu, sm.x0, sm.x, sm.lam)


def require(report: KKTReport, what: str, tol: float = KKT_TOL) -> KKTReport:
    """Raise CertificateError unless the report passes"""
    if not report.passed(tol):
        raise CertificateError(
            f"{what}: KKT residual {report.max_residual:.3g} (off-support max {report.off_support_max:.12g})",
            report.model_dump(),
        )
    return report
