"""
Model builders
Each model kind becomes a ConicModel and then a CompositeDual; A^T y and
similar constants are folded once here, with counters paused
"""
import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from ..core.errors import ModelError
from ..operators import LinOp, adjoint, compose, estimate_norm, make_diff2d, scale
from ..smoothing import CompositeDual, ConeBlock, ConicModel, PrimalObjective, smooth
from .spec import ModelKind, ModelSpec

logger = logging.getLogger(__name__)


def gram(A: LinOp) -> LinOp:
    """A^T A"""
    return compose(adjoint(A), A)


def fold_adjoint(A: LinOp, y: np.ndarray) -> np.ndarray:
    with A.paused():
        return A.adjoint(y)


def l1_objective(spec: ModelSpec) -> PrimalObjective:
    return PrimalObjective("l1", weights=spec.l1_weights)


def residual_block(spec: ModelSpec) -> ConeBlock:
    """||y - A x||_2 <= eps, or A x = y when eps = 0"""
    if spec.eps == 0:
        return ConeBlock("zero", scale(spec.A, -1.0), offset=spec.y, name="residual")
    return ConeBlock("l2", scale(spec.A, -1.0), offset=spec.y, radius=spec.eps, name="residual")


def diff_operator(spec: ModelSpec) -> LinOp:
    return make_diff2d(spec.image_size)


def dantzig_model(spec: ModelSpec) -> ConicModel:
    """||A^T (y - A x)||_inf <= delta; delta = 0 gives the equality A^T A x = A^T y"""
    Aty = fold_adjoint(spec.A, spec.y)
    op = scale(gram(spec.A), -1.0)
    if spec.delta == 0:
        block = ConeBlock("zero", op, offset=Aty, name="correlation")
    else:
        block = ConeBlock("linf", op, offset=Aty, radius=spec.delta, name="correlation")
    return ConicModel(spec.A.in_space, l1_objective(spec), [block], name="dantzig")


def dantzig_lp_model(spec: ModelSpec) -> ConicModel:
    """Two orthant blocks: delta + A^T(y - Ax) >= 0 and delta - A^T(y - Ax) >= 0"""
    Aty = fold_adjoint(spec.A, spec.y)
    AtA = gram(spec.A)
    ones = np.full(Aty.size, spec.delta)
    blocks = [
        ConeBlock("nonneg", scale(AtA, -1.0), offset=Aty, linear=ones, name="upper"),
        ConeBlock("nonneg", AtA, offset=-Aty, linear=ones.copy(), name="lower"),
    ]
    return ConicModel(spec.A.in_space, l1_objective(spec), blocks, name="dantzig_lp")


def lasso_model(spec: ModelSpec) -> ConicModel:
    return ConicModel(spec.A.in_space, l1_objective(spec), [residual_block(spec)], name="lasso")


def basis_pursuit_model(spec: ModelSpec) -> ConicModel:
    """A x = y; y enters the dual through the linear term of h"""
    block = ConeBlock("zero", scale(spec.A, -1.0), linear=spec.y, name="equality")
    return ConicModel(spec.A.in_space, l1_objective(spec), [block], name="basis_pursuit")


def nuclear_lasso_model(spec: ModelSpec) -> ConicModel:
    shape = spec.A.in_space.shape
    return ConicModel(spec.A.in_space, PrimalObjective("nuclear", shape=shape), [residual_block(spec)], name="nuclear_lasso")


def nuclear_dantzig_model(spec: ModelSpec) -> ConicModel:
    """||A^*(y - A(X))||_op <= delta"""
    shape = spec.A.in_space.shape
    Aty = fold_adjoint(spec.A, spec.y)
    op = scale(gram(spec.A), -1.0)
    if spec.delta == 0:
        block = ConeBlock("zero", op, offset=Aty, name="correlation")
    else:
        block = ConeBlock("operator", op, offset=Aty, radius=spec.delta, name="correlation")
    return ConicModel(spec.A.in_space, PrimalObjective("nuclear", shape=shape), [block], name="nuclear_dantzig")


def l1_analysis_model(spec: ModelSpec) -> ConicModel:
    blocks = [ConeBlock("l1", spec.W, weight=1.0, name="analysis"), residual_block(spec)]
    return ConicModel(spec.A.in_space, PrimalObjective("zero"), blocks, name="l1_analysis")


def tv_model(spec: ModelSpec) -> ConicModel:
    blocks = [ConeBlock("l1_complex", diff_operator(spec), weight=1.0, name="tv"), residual_block(spec)]
    return ConicModel(spec.A.in_space, PrimalObjective("zero"), blocks, name="tv")


def analysis_plus_tv_model(spec: ModelSpec) -> ConicModel:
    blocks = [
        ConeBlock("l1", spec.W, weight=spec.alpha_w, name="analysis"),
        ConeBlock("l1_complex", diff_operator(spec), weight=spec.beta_tv, name="tv"),
        residual_block(spec),
    ]
    return ConicModel(spec.A.in_space, PrimalObjective("zero"), blocks, name="analysis_plus_tv")


CONIC_BUILDERS: Dict[ModelKind, Callable[[ModelSpec], ConicModel]] = {
    ModelKind.DANTZIG: dantzig_model,
    ModelKind.DANTZIG_LP: dantzig_lp_model,
    ModelKind.LASSO: lasso_model,
    ModelKind.BASIS_PURSUIT: basis_pursuit_model,
    ModelKind.NUCLEAR_LASSO: nuclear_lasso_model,
    ModelKind.NUCLEAR_DANTZIG: nuclear_dantzig_model,
    ModelKind.L1_ANALYSIS: l1_analysis_model,
    ModelKind.TV: tv_model,
    ModelKind.ANALYSIS_PLUS_TV: analysis_plus_tv_model,
}


def conic_model(spec: ModelSpec) -> ConicModel:
    """Unsmoothed conic form of a spec"""
    try:
        builder = CONIC_BUILDERS[spec.kind]
    except KeyError:
        raise ModelError(f"no builder for model kind {spec.kind!r}")
    return builder(spec)


def default_ratios(model: ConicModel) -> Optional[List[float]]:
    """Block i is stepped with ||B_1||^2 / ||B_i||^2 times the common step"""
    if len(model.blocks) == 1:
        return None
    norms = [estimate_norm(block.op) for block in model.blocks]
    if norms[0] == 0:
        return None
    return [1.0 if nrm == 0 else (norms[0] / nrm) ** 2 for nrm in norms]


def build(spec: ModelSpec, mu: Optional[float] = None, x0: Optional[np.ndarray] = None) -> CompositeDual:
    """Smoothed composite dual of a spec

    mu and x0 default to the values stored on the spec; mu falls back to
    default_mu when neither is given.
    """
    model = conic_model(spec)
    if mu is None:
        mu = spec.mu
    if mu is None:
        from .heuristics import default_mu

        mu = default_mu(spec)
    if x0 is None:
        x0 = spec.x0
    ratios = spec.ratios
    if ratios is None and spec.kind in (ModelKind.L1_ANALYSIS, ModelKind.TV, ModelKind.ANALYSIS_PLUS_TV):
        ratios = default_ratios(model)
    cd = smooth(model, mu, x0, ratios)
    logger.debug("built %s: %s", spec.kind.value, cd)
    return cd


def _builder_for(kind: ModelKind) -> Callable[..., CompositeDual]:
    def builder(spec: ModelSpec, mu: Optional[float] = None, x0: Optional[np.ndarray] = None) -> CompositeDual:
        if spec.kind != kind:
            raise ModelError(f"expected a {kind.value} spec, got {spec.kind.value}")
        return build(spec, mu, x0)

    builder.__name__ = f"build_{kind.value}"
    builder.__doc__ = f"Composite dual of a {kind.value} spec"
    return builder


build_dantzig = _builder_for(ModelKind.DANTZIG)
build_dantzig_lp = _builder_for(ModelKind.DANTZIG_LP)
build_lasso = _builder_for(ModelKind.LASSO)
build_basis_pursuit = _builder_for(ModelKind.BASIS_PURSUIT)
build_nuclear_lasso = _builder_for(ModelKind.NUCLEAR_LASSO)
build_nuclear_dantzig = _builder_for(ModelKind.NUCLEAR_DANTZIG)
build_l1_analysis = _builder_for(ModelKind.L1_ANALYSIS)
build_tv = _builder_for(ModelKind.TV)
build_analysis_plus_tv = _builder_for(ModelKind.ANALYSIS_PLUS_TV)
