import numpy as np
import pytest

from cfm.core.errors import ModelError, ParameterError
from cfm.models import ModelKind, build, conic_model
from cfm.operators import Space, identity, make_dense
from cfm.prox import soft_threshold
from cfm.smoothing import ConeBlock, ConicModel, PrimalObjective, duality_gap, gap_report, moreau_value_grad, smooth

from .helpers import desk_spec, op_matrix

MU = 0.5


@pytest.mark.parametrize("kind", list(ModelKind), ids=lambda k: k.value)
def test_gradient_matches_central_differences(kind, rng):
    cd = build(desk_spec(kind), mu=MU)
    h = 1e-6
    for _ in range(3):
        w = rng.standard_normal(cd.size)
        d = rng.standard_normal(cd.size)
        _, grad, _ = cd.value_grad(w)
        fd = (cd.value(w + h * d) - cd.value(w - h * d)) / (2 * h)
        scale = max(1.0, float(np.linalg.norm(grad) * np.linalg.norm(d)))
        assert abs(fd - float(np.dot(grad, d))) <= 1e-5 * scale


@pytest.mark.parametrize("kind", list(ModelKind), ids=lambda k: k.value)
def test_gradient_lipschitz_bound(kind, rng):
    cd = build(desk_spec(kind), mu=MU)
    L = np.linalg.norm(op_matrix(cd.op), 2) ** 2 / MU
    for _ in range(5):
        w1, w2 = rng.standard_normal(cd.size), rng.standard_normal(cd.size)
        g1 = cd.value_grad(w1)[1]
        g2 = cd.value_grad(w2)[1]
        assert np.linalg.norm(g1 - g2) <= L * np.linalg.norm(w1 - w2) * (1 + 1e-9)


def test_primal_minimizer_is_gradient_witness(rng):
    spec = desk_spec(ModelKind.LASSO)
    cd = build(spec, mu=MU)
    w = rng.standard_normal(cd.size)
    x = cd.primal_minimizer(w)
    np.testing.assert_allclose(x, soft_threshold(cd.op.adjoint(w) / MU, 1.0 / MU))
    _, grad, x2 = cd.value_grad(w)
    np.testing.assert_allclose(x, x2)
    np.testing.assert_allclose(grad, cd.op.forward(x) + cd.offset)


def test_step_ratios_rescale_blocks_consistently(rng):
    spec = desk_spec(ModelKind.ANALYSIS_PLUS_TV)
    model = conic_model(spec)
    plain = smooth(model, MU)
    scaled = smooth(model, MU, ratios=[1.0, 4.0, 0.25])
    w = rng.standard_normal(scaled.size)
    z = scaled.to_z(w)
    np.testing.assert_allclose(scaled.value(w), plain.value(z))
    np.testing.assert_allclose(scaled.h(w), plain.h(z))
    np.testing.assert_allclose(scaled.primal_minimizer(w), plain.primal_minimizer(z))


def test_smooth_rejects_bad_parameters():
    model = conic_model(desk_spec(ModelKind.LASSO))
    with pytest.raises(ParameterError):
        smooth(model, 0.0)
    with pytest.raises(ParameterError):
        smooth(model, 1.0, ratios=[1.0, 2.0])


def test_cone_block_validation():
    op = identity(Space.real(3))
    with pytest.raises(ModelError):
        ConeBlock("l2", op)
    with pytest.raises(ModelError):
        ConeBlock("l2", op, radius=1.0, weight=1.0)
    with pytest.raises(ModelError):
        ConeBlock("nonneg", op, radius=1.0)
    with pytest.raises(ModelError):
        ConeBlock("simplex", op, radius=1.0)


def test_gap_is_zero_at_an_optimal_basis_pursuit_pair():
    y = np.array([2.0, -1.0, 0.0])
    model = ConicModel(
        Space.real(3),
        PrimalObjective("l1"),
        [ConeBlock("zero", make_dense(-np.eye(3)), linear=y)],
    )
    x = y.copy()
    z = -np.array([1.0, -1.0, 0.5])
    report = gap_report(model, x, z)
    assert report.gap == pytest.approx(0.0, abs=1e-14)
    assert not report.flagged


def test_gap_is_nonnegative_for_feasible_pairs(rng):
    spec = desk_spec(ModelKind.LASSO)
    model = conic_model(spec)
    A = spec.A.matrix
    for _ in range(10):
        # a feasible x: the least-squares fit
        x = np.linalg.lstsq(A, spec.y, rcond=None)[0]
        z = rng.standard_normal(spec.y.size)
        z *= 0.9 / np.max(np.abs(A.T @ z))
        report = gap_report(model, x, z)
        assert report.primal_infeasibility <= 1e-9
        assert report.dual_infeasibility == 0.0
        assert report.gap >= -1e-12


def test_duality_gap_flags_infeasible_pairs(caplog):
    spec = desk_spec(ModelKind.LASSO)
    model = conic_model(spec)
    x = np.zeros(spec.n)
    z = np.full(spec.y.size, 10.0)
    with caplog.at_level("WARNING", logger="cfm.smoothing.gap"):
        duality_gap(model, x, z)
    assert "infeasible" in caplog.text


def test_moreau_envelope_closed_form(rng):
    mu = 0.7

    def inner(Y):
        X = soft_threshold(Y, 1.0 / mu)
        return X, float(np.sum(np.abs(X)))

    Y = rng.standard_normal(8) * 3
    value, grad = moreau_value_grad(inner, Y, mu)
    # Huber function: |y| - 1/(2 mu) outside the threshold, mu y^2 / 2 inside
    a = np.abs(Y)
    huber = np.where(a > 1 / mu, a - 0.5 / mu, 0.5 * mu * Y ** 2)
    assert value == pytest.approx(float(np.sum(huber)))
    np.testing.assert_allclose(grad, mu * (Y - soft_threshold(Y, 1.0 / mu)))
    with pytest.raises(ParameterError):
        moreau_value_grad(inner, Y, 0.0)


@pytest.mark.slow
def test_moreau_gradient_matches_differences_on_lasso(rng):
    from cfm.solvers import SolverOptions, solve

    spec = desk_spec(ModelKind.LASSO)
    mu = 1.0

    def inner(Y):
        result = solve(build(spec, mu=mu, x0=Y), SolverOptions(tol=1e-11, max_iters=50000))
        return result.x, float(np.sum(np.abs(result.x)))

    Y = rng.standard_normal(spec.n)
    d = rng.standard_normal(spec.n)
    _, grad = moreau_value_grad(inner, Y, mu)
    h = 1e-4
    plus, _ = moreau_value_grad(inner, Y + h * d, mu)
    minus, _ = moreau_value_grad(inner, Y - h * d, mu)
    fd = (plus - minus) / (2 * h)
    assert fd == pytest.approx(float(np.dot(grad, d)), rel=1e-4, abs=1e-6)


def test_nuclear_evaluation_costs_one_svd(rng):
    cd = build(desk_spec(ModelKind.NUCLEAR_LASSO), mu=MU)
    w = rng.standard_normal(cd.size)
    with cd.op.paused():
        u = cd.op.adjoint(w)
    assert cd.svd_calls == 0
    g, x = cd.gbar(u)
    assert cd.svd_calls == 1
    cd.value_grad(w)
    assert cd.svd_calls == 2

    X = (u / MU).reshape(cd.objective.shape, order="F")
    s = np.linalg.svd(X, compute_uv=False)
    kept = np.maximum(s - 1.0 / MU, 0.0)
    assert g == pytest.approx(0.5 * MU * float(np.dot(kept, kept)), rel=1e-10)
    np.testing.assert_allclose(np.linalg.svd(x.reshape(X.shape, order="F"), compute_uv=False), kept, atol=1e-10)


def test_prox_env_agrees_with_prox_and_envelope(rng):
    v = rng.standard_normal(12)
    for objective in (
        PrimalObjective("l1", weights=rng.random(12) + 0.5),
        PrimalObjective("nuclear", shape=(4, 3)),
        PrimalObjective("linear", c=rng.standard_normal(12)),
        PrimalObjective("zero"),
    ):
        x, env = objective.prox_env(v, MU)
        np.testing.assert_allclose(objective.prox(v, MU), x)
        assert objective.conj_env(v, MU) == pytest.approx(env)
        # envelope = mu/2 ||v||^2 - (f(x) + mu/2 ||x - v||^2) at the minimizer
        direct = 0.5 * MU * float(np.dot(v, v)) - objective.value(x) - 0.5 * MU * float(np.dot(x - v, x - v))
        assert env == pytest.approx(direct, rel=1e-10, abs=1e-12)
