import numpy as np
import pytest

from cfm.core.errors import ModelError, ParameterError
from cfm.models import (
    ModelKind,
    ModelSpec,
    build,
    build_lasso,
    conic_model,
    default_mu,
    feasibility,
    least_squares,
    primal_objective,
    reweight,
)
from cfm.operators import Space, identity, make_dense, tv_norm
from cfm.solvers import SolverOptions, solve

from .helpers import desk_spec

MU = 0.5


def smoothed_optimum(spec: ModelSpec, mu: float = MU) -> np.ndarray:
    result = solve(build(spec, mu=mu), SolverOptions(max_iters=20000, tol=1e-13, restart=200))
    return result.x


def assert_same_point(a, b, tol=1e-4):
    assert np.linalg.norm(a - b) <= tol * max(1.0, float(np.linalg.norm(b)))


@pytest.mark.slow
def test_dantzig_and_its_lp_form_share_the_smoothed_optimum():
    spec = desk_spec(ModelKind.DANTZIG)
    lp = ModelSpec(kind=ModelKind.DANTZIG_LP, A=spec.A, y=spec.y, delta=spec.delta)
    assert_same_point(smoothed_optimum(lp), smoothed_optimum(spec))


@pytest.mark.slow
def test_analysis_with_identity_matches_lasso():
    spec = desk_spec(ModelKind.LASSO)
    analysis = ModelSpec(kind=ModelKind.L1_ANALYSIS, A=spec.A, y=spec.y, W=identity(Space.real(spec.n)), eps=spec.eps)
    assert_same_point(smoothed_optimum(analysis), smoothed_optimum(spec))


@pytest.mark.slow
def test_analysis_plus_tv_without_tv_matches_analysis():
    spec = desk_spec(ModelKind.L1_ANALYSIS)
    combined = ModelSpec(
        kind=ModelKind.ANALYSIS_PLUS_TV, A=spec.A, y=spec.y, W=spec.W, eps=spec.eps, alpha_w=1.0, beta_tv=0.0
    )
    assert_same_point(smoothed_optimum(combined), smoothed_optimum(spec))


def test_default_mu_on_identity():
    spec = ModelSpec(kind=ModelKind.BASIS_PURSUIT, A=identity(Space.real(4)), y=np.array([3.0, 4.0, 0.0, 0.0]))
    assert default_mu(spec) == pytest.approx(0.04)
    assert build(spec).mu == pytest.approx(0.04)


def test_default_mu_rejects_zero_data():
    spec = ModelSpec(kind=ModelKind.BASIS_PURSUIT, A=identity(Space.real(4)), y=np.zeros(4))
    with pytest.raises(ParameterError):
        default_mu(spec)


def test_least_squares_is_minimum_norm(rng):
    A = rng.standard_normal((8, 20))
    y = rng.standard_normal(8)
    np.testing.assert_allclose(least_squares(make_dense(A), y), np.linalg.pinv(A) @ y, atol=1e-6)


def test_reweight_with_analysis_operator():
    spec = desk_spec(ModelKind.L1_ANALYSIS)
    x_prev = np.linspace(-1.0, 1.0, spec.n)
    weighted = reweight(spec, x_prev, 0.1)
    Wx = spec.W.matrix @ x_prev
    v = np.cos(np.arange(spec.n))
    np.testing.assert_allclose(weighted.W.forward(v), (spec.W.matrix @ v) / (np.abs(Wx) + 0.1))
    assert weighted.W is not spec.W


def test_reweight_l1_models_get_diagonal_weights():
    spec = desk_spec(ModelKind.LASSO)
    x_prev = np.zeros(spec.n)
    x_prev[:3] = [2.0, -0.5, 1.0]
    weighted = reweight(spec, x_prev, 0.5)
    np.testing.assert_allclose(weighted.l1_weights, 1.0 / (np.abs(x_prev) + 0.5))
    assert primal_objective(weighted, x_prev) == pytest.approx(float(np.sum(np.abs(x_prev) / (np.abs(x_prev) + 0.5))))


def test_reweight_rejects_bad_input():
    with pytest.raises(ParameterError):
        reweight(desk_spec(ModelKind.LASSO), np.zeros(30), 0.0)
    with pytest.raises(ModelError):
        reweight(desk_spec(ModelKind.NUCLEAR_LASSO), np.zeros(30), 0.1)


def test_model_spec_parameter_checks():
    A = make_dense(np.eye(3))
    y = np.ones(3)
    with pytest.raises(ModelError):
        ModelSpec(kind=ModelKind.LASSO, A=A, y=y)
    with pytest.raises(ModelError):
        ModelSpec(kind=ModelKind.LASSO, A=A, y=y, eps=0.1, delta=0.1)
    with pytest.raises(ParameterError):
        ModelSpec(kind=ModelKind.DANTZIG, A=A, y=y, delta=-1.0)
    with pytest.raises(ParameterError):
        ModelSpec(kind=ModelKind.BASIS_PURSUIT, A=A, y=y, mu=0.0)
    with pytest.raises(ModelError):
        ModelSpec(kind=ModelKind.BASIS_PURSUIT, A=A, y=np.ones(4))
    with pytest.raises(ModelError):
        ModelSpec(kind=ModelKind.NUCLEAR_LASSO, A=A, y=y, eps=0.1)
    with pytest.raises(ModelError):
        ModelSpec(kind=ModelKind.TV, A=A, y=y, eps=0.1)
    with pytest.raises(ParameterError):
        ModelSpec(kind=ModelKind.LASSO, A=A, y=y, eps=0.1, l1_weights=np.array([1.0, 0.0, 1.0]))


def test_kind_specific_builder_checks_the_kind():
    with pytest.raises(ModelError):
        build_lasso(desk_spec(ModelKind.DANTZIG), mu=MU)
    assert build_lasso(desk_spec(ModelKind.LASSO), mu=MU).mu == MU


def test_primal_objective_per_kind():
    x = np.linspace(-1.0, 1.0, 30)
    assert primal_objective(desk_spec(ModelKind.LASSO), x) == pytest.approx(float(np.sum(np.abs(x))))

    spec = desk_spec(ModelKind.NUCLEAR_LASSO)
    X = np.outer(np.arange(1.0, 7.0), np.ones(5))
    expected = float(np.sum(np.linalg.svd(X, compute_uv=False)))
    assert primal_objective(spec, X.reshape(-1, order="F")) == pytest.approx(expected)

    spec = desk_spec(ModelKind.ANALYSIS_PLUS_TV)
    image = np.outer(np.arange(6.0), np.ones(6))
    v = image.reshape(-1, order="F")
    expected = float(np.sum(np.abs(spec.W.matrix @ v))) + 0.5 * tv_norm(image)
    assert primal_objective(spec, v) == pytest.approx(expected)


def test_feasibility_residuals():
    spec = desk_spec(ModelKind.LASSO)
    zero = feasibility(spec, np.zeros(spec.n))
    assert zero.residual == pytest.approx(float(np.linalg.norm(spec.y)))
    assert zero.bound == pytest.approx(spec.eps)
    assert zero.violation == pytest.approx(zero.residual - spec.eps)

    fit = np.linalg.lstsq(spec.A.matrix, spec.y, rcond=None)[0]
    assert feasibility(spec, fit).violation == 0.0

    spec = desk_spec(ModelKind.DANTZIG)
    report = feasibility(spec, np.zeros(spec.n))
    assert report.residual == pytest.approx(float(np.max(np.abs(spec.A.matrix.T @ spec.y))))


def test_conic_model_blocks():
    assert len(conic_model(desk_spec(ModelKind.DANTZIG_LP)).blocks) == 2
    assert [b.name for b in conic_model(desk_spec(ModelKind.ANALYSIS_PLUS_TV)).blocks] == ["analysis", "tv", "residual"]
    bp = conic_model(desk_spec(ModelKind.BASIS_PURSUIT))
    assert bp.blocks[0].kind == "zero"
