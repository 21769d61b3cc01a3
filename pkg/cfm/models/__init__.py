"""Sparse-recovery models and their smoothed conic duals"""
from .builders import (
    build,
    build_analysis_plus_tv,
    build_basis_pursuit,
    build_dantzig,
    build_dantzig_lp,
    build_l1_analysis,
    build_lasso,
    build_nuclear_dantzig,
    build_nuclear_lasso,
    build_tv,
    conic_model,
    default_ratios,
)
from .evaluate import Feasibility, feasibility, primal_objective
from .heuristics import default_mu, least_squares, reweight
from .spec import ModelKind, ModelSpec
