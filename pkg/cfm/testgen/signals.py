"""
Structured signal and operator generators
All generators are pure functions of their seed
"""
from typing import List, Optional, Tuple

import numpy as np

from ..core.errors import ParameterError


def gen_sparse_signal(n: int, s: int, dynamic_range_db: float, seed: Optional[int] = None) -> np.ndarray:
    """s-sparse vector with log-uniform magnitudes and random signs

    Magnitudes are 10^(dB/20 * e) with e uniform on [0, 1]; the first two
    nonzeros are pinned to e = 0 and e = 1 so the max/min ratio is exactly the
    requested dynamic range.

    Args:
        n: length
        s: number of nonzeros, 0 <= s <= n
        dynamic_range_db: 20 log10(max|x_i| / min|x_i|) over the support
        seed: generator seed

    Returns:
        Flat float64 vector
    """
    if not 0 <= s <= n:
        raise ParameterError("sparsity must satisfy 0 <= s <= n", {"n": n, "s": s})
    if dynamic_range_db < 0:
        raise ParameterError("dynamic range must be non-negative", {"dynamic_range_db": dynamic_range_db})
    rng = np.random.default_rng(seed)
    x = np.zeros(n)
    if s == 0:
        return x
    support = rng.choice(n, size=s, replace=False)
    exponents = rng.uniform(0.0, 1.0, size=s)
    exponents[0] = 0.0
    if s > 1:
        exponents[1] = 1.0
    signs = rng.choice([-1.0, 1.0], size=s)
    x[support] = signs * 10.0 ** (dynamic_range_db / 20.0 * exponents)
    return x


def gen_gaussian_matrix(m: int, n: int, seed: Optional[int] = None, normalize: bool = True) -> np.ndarray:
    """m x n Gaussian matrix, columns scaled to unit norm when normalize is set"""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    if normalize:
        A /= np.linalg.norm(A, axis=0, keepdims=True)
    else:
        A /= np.sqrt(m)
    return A


def gen_low_rank(n1: int, n2: int, rank: int, seed: Optional[int] = None) -> np.ndarray:
    """n1 x n2 matrix of the given rank, product of Gaussian factors"""
    if not 0 <= rank <= min(n1, n2):
        raise ParameterError("rank must lie in [0, min(n1, n2)]", {"rank": rank})
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n1, rank)) @ rng.standard_normal((rank, n2))


def gen_sampling(n1: int, n2: int, fraction: float, seed: Optional[int] = None) -> List[Tuple[int, int]]:
    """Distinct (i, j) entries covering round(fraction * n1 * n2) of the grid"""
    if not 0 < fraction <= 1:
        raise ParameterError("sampling fraction must lie in (0, 1]", {"fraction": fraction})
    rng = np.random.default_rng(seed)
    count = int(round(fraction * n1 * n2))
    flat = np.sort(rng.choice(n1 * n2, size=count, replace=False))
    # column-major: flat = i + j * n1
    return [(int(k % n1), int(k // n1)) for k in flat]


def gen_partial_dct_rows(m: int, n: int, seed: Optional[int] = None) -> List[int]:
    """m distinct DCT rows out of n, sorted"""
    if not 0 < m <= n:
        raise ParameterError("need 0 < m <= n rows", {"m": m, "n": n})
    rng = np.random.default_rng(seed)
    return sorted(int(r) for r in rng.choice(n, size=m, replace=False))


def add_noise(b: np.ndarray, snr_db: float, seed: Optional[int] = None) -> np.ndarray:
    """b plus white Gaussian noise at the given SNR"""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(b.shape)
    nb = float(np.linalg.norm(b))
    if nb == 0:
        return b.copy()
    noise *= nb * 10.0 ** (-snr_db / 20.0) / float(np.linalg.norm(noise))
    return b + noise
