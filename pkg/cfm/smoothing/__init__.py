"""Smoothed conic duals, duality gaps and the Moreau envelope"""
from .composite import CompositeDual, block_fn, dual_value_grad, primal_minimizer, smooth
from .conic import ConeBlock, ConicModel, PrimalObjective, cone_norm, dual_norm
from .gap import GapReport, duality_gap, gap_report
from .moreau import moreau_value_grad
