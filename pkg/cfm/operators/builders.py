"""
Concrete operator builders
Dense matrices, entry subsampling, partial orthonormal DCT and 2-D differences
"""
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import fft

from ..core.errors import DimensionError, ParameterError
from .linop import LinOp
from .space import Space


def make_dense(matrix, in_space: Optional[Space] = None, out_space: Optional[Space] = None, name: str = "A") -> LinOp:
    """Operator from a real m x n matrix

    in_space/out_space default to R^n / R^m; pass a matrix space to treat the
    column-major vectorisation of an n1 x n2 matrix as the input.
    """
    M = np.array(matrix, dtype=np.float64, ndmin=2)
    if M.ndim != 2:
        raise DimensionError("dense operator needs a 2-D matrix", 2, M.ndim)
    m, n = M.shape
    in_space = in_space or Space.real(n)
    out_space = out_space or Space.real(m)
    if in_space.size != n or out_space.size != m:
        raise DimensionError(
            "matrix shape does not match the given spaces",
            [out_space.size, in_space.size],
            [m, n],
        )
    Mt = M.T.copy()
    op = LinOp(in_space, out_space, lambda x: M @ x, lambda y: Mt @ y, name=name)
    op.matrix = M
    return op


def _flat_indices(entries: Iterable[Tuple[int, int]], n1: int, n2: int) -> np.ndarray:
    seen = set()
    flat = []
    for entry in entries:
        i, j = (int(v) for v in entry)
        if not (0 <= i < n1 and 0 <= j < n2):
            raise ParameterError(f"index ({i}, {j}) outside a {n1}x{n2} matrix", {"index": [i, j]})
        if (i, j) in seen:
            raise ParameterError(f"duplicate index ({i}, {j})", {"index": [i, j]})
        seen.add((i, j))
        flat.append(i + j * n1)
    return np.asarray(flat, dtype=np.int64)


def make_subsample(entries: Sequence[Tuple[int, int]], n1: int, n2: int, name: str = "P_E") -> LinOp:
    """Reveal the entries E of an n1 x n2 matrix (0-based (i, j) pairs)"""
    if n1 < 1 or n2 < 1:
        raise ParameterError("matrix dims must be positive", {"n1": n1, "n2": n2})
    idx = _flat_indices(entries, n1, n2)
    in_space = Space.matrix(n1, n2)
    size = n1 * n2

    def adj(y):
        out = np.zeros(size)
        out[idx] = y
        return out

    op = LinOp(in_space, Space.real(idx.size), lambda x: x[idx], adj, name=name)
    op.indices = idx
    return op


def make_partial_dct(rows: Sequence[int], n: int, name: str = "C_R") -> LinOp:
    """Selected rows of the orthonormal DCT-II matrix of size n"""
    rows = np.asarray(list(rows), dtype=np.int64)
    if n < 1:
        raise ParameterError("DCT length must be positive", {"n": n})
    if rows.size and (rows.min() < 0 or rows.max() >= n):
        raise ParameterError("DCT row index out of range", {"n": n, "rows": [int(rows.min()), int(rows.max())]})
    if np.unique(rows).size != rows.size:
        raise ParameterError("DCT rows must be distinct", {"rows": rows.tolist()})

    def fwd(x):
        return fft.dct(x, type=2, norm="ortho")[rows]

    def adj(y):
        full = np.zeros(n)
        full[rows] = y
        return fft.idct(full, type=2, norm="ortho")

    op = LinOp(Space.real(n), Space.real(rows.size), fwd, adj, name=name)
    op.rows = rows
    return op


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix by its direct definition"""
    k = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    C = np.cos(np.pi * (2 * j + 1) * k / (2 * n)) * np.sqrt(2.0 / n)
    C[0, :] = np.sqrt(1.0 / n)
    return C


def make_diff2d(n: int, name: str = "D") -> LinOp:
    """Forward differences of an n x n image packed into one complex field

    [Dx]_ij = (x[i+1, j] - x[i, j]) + 1j * (x[i, j+1] - x[i, j]) for
    0 <= i, j < n - 1; the output is ordered with i fastest.
    """
    if n < 2:
        raise ParameterError("difference operator needs n >= 2", {"n": n})
    in_space = Space.matrix(n, n)
    out_space = Space.complex((n - 1) ** 2)

    def fwd(x):
        X = x.reshape((n, n), order="F")
        base = X[:-1, :-1]
        z = (X[1:, :-1] - base) + 1j * (X[:-1, 1:] - base)
        return z.reshape(-1, order="F").view(np.float64)

    def adj(w):
        Z = np.ascontiguousarray(w).view(np.complex128).reshape((n - 1, n - 1), order="F")
        re, im = Z.real, Z.imag
        out = np.zeros((n, n))
        out[1:, :-1] += re
        out[:-1, :-1] -= re + im
        out[:-1, 1:] += im
        return out.reshape(-1, order="F")

    return LinOp(in_space, out_space, fwd, adj, name=name)


def tv_norm(image: np.ndarray) -> float:
    """Isotropic total variation sum_ij |[Dx]_ij| of an n x n image"""
    X = np.asarray(image, dtype=np.float64)
    base = X[:-1, :-1]
    return float(np.sum(np.hypot(X[1:, :-1] - base, X[:-1, 1:] - base)))
