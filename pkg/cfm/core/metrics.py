"""Error measures shared by the solvers, the outer loop and the harness"""
from typing import Optional

import numpy as np


def relative_error(x: Optional[np.ndarray], x_ref: Optional[np.ndarray]) -> Optional[float]:
    """||x - x_ref|| / ||x_ref||, or the absolute error when x_ref is zero; None without a reference"""
    if x is None or x_ref is None:
        return None
    scale = float(np.linalg.norm(x_ref))
    return float(np.linalg.norm(x - x_ref)) / (scale if scale > 0 else 1.0)
