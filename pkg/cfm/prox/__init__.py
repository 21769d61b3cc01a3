"""Proximity operators and prox-capable nonsmooth functions"""
from .functions import (
    BlockSeparable,
    BoxLinf,
    ComplexBoxLinf,
    LinearFn,
    NonnegIndicator,
    NonnegLinear,
    NonsmoothFn,
    Rescaled,
    ScaledL1,
    ScaledL2,
    ScaledNuclear,
    Zero,
    prox_box_linf,
    prox_nonneg_indicator,
    prox_scaled_l1,
    prox_scaled_l2,
    prox_scaled_nuclear,
)
from .operators import ctrunc, nuclear_norm, operator_norm, pos, project_soc, shrink_l2, soft_threshold, svt, svt_values, trunc
