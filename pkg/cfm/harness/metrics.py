"""
Quality metrics
"""
import math

import numpy as np

from ..core.errors import DimensionError


def compute_psnr(x: np.ndarray, x0: np.ndarray) -> float:
    """20 log10(sqrt(n1 n2) / ||x - x0||_F) for images with pixels in [0, 1]

    Returns math.inf when x equals x0.
    """
    x = np.asarray(x, dtype=np.float64)
    x0 = np.asarray(x0, dtype=np.float64)
    if x.shape != x0.shape:
        raise DimensionError("PSNR needs images of the same shape", list(x0.shape), list(x.shape))
    err = float(np.linalg.norm(x - x0))
    if err == 0:
        return math.inf
    return 20.0 * math.log10(math.sqrt(x.size) / err)

