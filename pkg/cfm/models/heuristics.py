"""
Smoothing-parameter heuristic and reweighting
"""
import logging

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from ..core.errors import ModelError, NumericalError, ParameterError
from ..operators import LinOp, compose, diagonal, make_diff2d
from .spec import IMAGE_KINDS, L1_KINDS, ModelSpec

logger = logging.getLogger(__name__)

MU_FACTOR = 0.1
CG_RTOL = 1e-8


def least_squares(A: LinOp, y: np.ndarray) -> np.ndarray:
    """Minimum-norm solution A^T w of A x = y, with A A^T w = y solved by CG"""
    m = A.out_space.size

    def normal(v):
        return A.forward(A.adjoint(v))

    with A.paused():
        w, info = cg(LinearOperator((m, m), matvec=normal, dtype=np.float64), y, rtol=CG_RTOL, maxiter=10 * m)
        if info > 0:
            logger.warning("CG stopped after %d iterations without reaching rtol=%g", info, CG_RTOL)
        elif info < 0:
            raise NumericalError("CG breakdown while solving the normal equations", {"info": int(info)})
        return A.adjoint(w)


def analysis_operator(spec: ModelSpec):
    if spec.W is not None:
        return spec.W
    if spec.kind in IMAGE_KINDS:
        return make_diff2d(spec.image_size)
    return None


def default_mu(spec: ModelSpec) -> float:
    """mu = 0.1 ||W x_LS|| / (||x_LS||^2 / 2) with x_LS the least-squares solution

    W is the analysis operator when the model has one, the difference
    operator for TV and the identity otherwise.
    """
    if not np.any(spec.y):
        raise ParameterError("default_mu is undefined for y = 0")
    x_ls = least_squares(spec.A, spec.y)
    W = analysis_operator(spec)
    if W is None:
        top = float(np.linalg.norm(x_ls))
    else:
        with W.paused():
            top = float(np.linalg.norm(W.forward(x_ls)))
    bottom = 0.5 * float(np.dot(x_ls, x_ls))
    if bottom == 0 or top == 0:
        raise NumericalError("least-squares solution is degenerate, no default mu")
    mu = MU_FACTOR * top / bottom
    logger.debug("default mu for %s: %.6g", spec.kind.value, mu)
    return mu


def reweight(spec: ModelSpec, x_prev: np.ndarray, eps_w: float) -> ModelSpec:
    """Replace ||W x||_1 by ||R W x||_1 with R_ii = 1 / (|(W x_prev)_i| + eps_w)

    Models without W but with an l1 objective get diagonal l1 weights instead.
    """
    if not eps_w > 0:
        raise ParameterError("reweighting epsilon must be positive", {"eps_w": eps_w})
    x_prev = np.asarray(x_prev, dtype=np.float64)
    if spec.W is not None:
        with spec.W.paused():
            Wx = spec.W.forward(x_prev)
        R = 1.0 / (np.abs(Wx) + eps_w)
        W = compose(diagonal(R, spec.W.out_space), spec.W)
        W.name = f"R*{spec.W.name}"
        return spec.model_copy(update={"W": W})
    if spec.kind in L1_KINDS:
        return spec.model_copy(update={"l1_weights": 1.0 / (np.abs(x_prev) + eps_w)})
    raise ModelError(f"reweighting is not defined for {spec.kind.value} models")
