"""Small random instances for every model kind"""
import numpy as np

from cfm.models import ModelKind, ModelSpec
from cfm.operators import Space, identity, make_dense


def op_matrix(op):
    """Dense matrix of an operator, built column by column with counting paused"""
    n = op.in_space.size
    with op.paused():
        return np.column_stack([op.forward(e) for e in np.eye(n)])


def desk_spec(kind: ModelKind, seed: int = 0) -> ModelSpec:
    rng = np.random.default_rng(seed)
    if kind in (ModelKind.DANTZIG, ModelKind.DANTZIG_LP, ModelKind.LASSO, ModelKind.BASIS_PURSUIT):
        A = rng.standard_normal((12, 30)) / np.sqrt(12)
        x = np.zeros(30)
        x[rng.choice(30, 4, replace=False)] = rng.choice([-1.0, 1.0], 4) * (1 + rng.random(4))
        y = A @ x + 0.01 * rng.standard_normal(12)
        params = {
            ModelKind.DANTZIG: {"delta": 0.05 * float(np.max(np.abs(A.T @ y)))},
            ModelKind.DANTZIG_LP: {"delta": 0.05 * float(np.max(np.abs(A.T @ y)))},
            ModelKind.LASSO: {"eps": 0.05 * float(np.linalg.norm(y))},
            ModelKind.BASIS_PURSUIT: {},
        }[kind]
        return ModelSpec(kind=kind, A=make_dense(A), y=y, name=kind.value, **params)
    if kind in (ModelKind.NUCLEAR_LASSO, ModelKind.NUCLEAR_DANTZIG):
        A = rng.standard_normal((20, 30)) / np.sqrt(20)
        X = rng.standard_normal((6, 2)) @ rng.standard_normal((2, 5))
        op = make_dense(A, in_space=Space.matrix(6, 5))
        y = op.forward(X.reshape(-1, order="F"))
        with op.paused():
            Aty = op.adjoint(y)
        if kind == ModelKind.NUCLEAR_LASSO:
            return ModelSpec(kind=kind, A=op, y=y, eps=0.05 * float(np.linalg.norm(y)))
        delta = 0.05 * float(np.linalg.norm(Aty.reshape((6, 5), order="F"), 2))
        return ModelSpec(kind=kind, A=op, y=y, delta=delta)
    n = 6
    image = np.zeros((n, n))
    image[1:4, 2:5] = 1.0
    y = (image + 0.1 * rng.standard_normal((n, n))).reshape(-1, order="F")
    A = identity(Space.matrix(n, n))
    W = make_dense(rng.standard_normal((n * n, n * n)) / n, in_space=Space.matrix(n, n), name="W")
    eps = 0.1 * float(np.linalg.norm(y))
    if kind == ModelKind.L1_ANALYSIS:
        return ModelSpec(kind=kind, A=A, y=y, W=W, eps=eps)
    if kind == ModelKind.TV:
        return ModelSpec(kind=kind, A=A, y=y, eps=eps)
    return ModelSpec(kind=kind, A=A, y=y, W=W, eps=eps, alpha_w=1.0, beta_tv=0.5)
