"""Shared fixtures"""
import numpy as np
import pytest

from cfm.operators import make_dense


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def gaussian(rng):
    """20 x 50 Gaussian matrix with unit-norm columns"""
    A = rng.standard_normal((20, 50))
    return A / np.linalg.norm(A, axis=0)


@pytest.fixture
def sparse_x(rng):
    x = np.zeros(50)
    support = rng.choice(50, size=4, replace=False)
    x[support] = rng.choice([-1.0, 1.0], size=4) * (1.0 + rng.random(4))
    return x


@pytest.fixture
def dense_op(gaussian):
    return make_dense(gaussian)


def adjoint_mismatch(op, rng, pairs=100):
    """Largest relative violation of <Ax, y> = <x, A^T y> over random pairs"""
    worst = 0.0
    for _ in range(pairs):
        x = op.in_space.random(rng)
        y = op.out_space.random(rng)
        lhs = float(np.dot(op.forward(x), y))
        rhs = float(np.dot(x, op.adjoint(y)))
        scale = max(1.0, abs(lhs), abs(rhs))
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst
