"""
Closed-form proximity operators
Soft thresholding, l2 shrinkage, truncation, positive part, second-order cone
projection and singular value thresholding
"""
import logging
from typing import Tuple

import numpy as np
from scipy import linalg

from ..core.errors import NumericalError, ParameterError

logger = logging.getLogger(__name__)


def _check_threshold(tau, name: str = "threshold") -> None:
    if np.any(np.asarray(tau) < 0):
        raise ParameterError(f"{name} must be non-negative", {name: np.asarray(tau).tolist()})


def soft_threshold(x: np.ndarray, tau) -> np.ndarray:
    """Componentwise sign(x) * max(|x| - tau, 0); tau may be an array"""
    _check_threshold(tau)
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)


def shrink_l2(z: np.ndarray, t: float) -> np.ndarray:
    """max(1 - t/||z||, 0) * z, with 0 mapped to 0"""
    _check_threshold(t)
    z = np.asarray(z, dtype=np.float64)
    nrm = float(np.linalg.norm(z))
    if nrm <= t:
        return np.zeros_like(z)
    return (1.0 - t / nrm) * z


def trunc(z: np.ndarray, tau) -> np.ndarray:
    """Componentwise sign(z) * min(|z|, tau)"""
    _check_threshold(tau)
    return np.clip(np.asarray(z, dtype=np.float64), -tau, tau)


def ctrunc(z: np.ndarray, tau) -> np.ndarray:
    """Complex truncation min(1, tau/|z_k|) * z_k; zero entries stay zero"""
    _check_threshold(tau)
    z = np.asarray(z, dtype=np.complex128)
    mag = np.abs(z)
    factor = np.ones_like(mag)
    big = mag > tau
    factor[big] = tau / mag[big] if np.ndim(tau) == 0 else np.asarray(tau)[big] / mag[big]
    return z * factor


def pos(z: np.ndarray) -> np.ndarray:
    return np.maximum(np.asarray(z, dtype=np.float64), 0.0)


def project_soc(y: np.ndarray, t: float) -> Tuple[np.ndarray, float]:
    """Euclidean projection of (y, t) onto {(y, t) : ||y|| <= t}"""
    y = np.asarray(y, dtype=np.float64)
    t = float(t)
    ny = float(np.linalg.norm(y))
    if ny <= t:
        return y.copy(), t
    if ny <= -t:
        return np.zeros_like(y), 0.0
    c = (ny + t) / (2.0 * ny)
    return c * y, c * ny


def svd(X: np.ndarray):
    """Thin SVD, falling back to the slower driver when gesdd fails"""
    try:
        return linalg.svd(X, full_matrices=False, lapack_driver="gesdd")
    except (linalg.LinAlgError, ValueError):
        logger.warning("gesdd failed on a %dx%d matrix, retrying with gesvd", *np.shape(X))
    try:
        return linalg.svd(X, full_matrices=False, lapack_driver="gesvd")
    except (linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"SVD did not converge: {str(e)}", {"shape": list(np.shape(X))})


def svt_values(X: np.ndarray, tau: float) -> Tuple[np.ndarray, np.ndarray]:
    """SVT of X together with the thresholded singular values, from one SVD"""
    _check_threshold(tau)
    U, s, Vt = svd(np.asarray(X, dtype=np.float64))
    s = np.maximum(s - tau, 0.0)
    keep = s > 0
    return (U[:, keep] * s[keep]) @ Vt[keep, :], s


def svt(X: np.ndarray, tau: float) -> np.ndarray:
    """Singular value thresholding U * ST(S, tau) * V^T"""
    return svt_values(X, tau)[0]


def nuclear_norm(X: np.ndarray) -> float:
    return float(np.sum(linalg.svdvals(np.asarray(X, dtype=np.float64))))


def operator_norm(X: np.ndarray) -> float:
    s = linalg.svdvals(np.asarray(X, dtype=np.float64))
    return float(s[0]) if s.size else 0.0
