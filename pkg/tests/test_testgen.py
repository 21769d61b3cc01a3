import numpy as np
import pytest

from cfm.core.errors import CertificateError, ParameterError
from cfm.schemas import load_bundle, save_bundle
from cfm.testgen import (
    add_noise,
    certify,
    certify_basis_pursuit,
    certify_smoothed,
    gen_dantzig_exact,
    gen_gaussian_matrix,
    gen_low_rank,
    gen_sampling,
    gen_sparse_signal,
    generate,
    mu_sweep,
    perturbation,
    plateau_mu,
)

KKT_TOL = 1e-10


@pytest.fixture(scope="module", params=["basis_pursuit", "lasso", "dantzig"])
def instance(request):
    return generate(request.param, 20, 60, 4, seed=3)


@pytest.mark.slow
def test_generated_instances_are_certified(instance):
    assert instance.report.passed(KKT_TOL)
    assert instance.report.support_size <= 20
    assert certify(instance) == instance.report


@pytest.mark.slow
def test_bundle_recertifies_identically(instance, tmp_path):
    path = save_bundle(instance, tmp_path / f"{instance.kind}.json")
    loaded = load_bundle(path)
    np.testing.assert_array_equal(loaded.A, instance.A)
    np.testing.assert_array_equal(loaded.x_star, instance.x_star)
    assert certify(loaded) == instance.report
    assert certify_smoothed(loaded) == certify_smoothed(instance)


@pytest.mark.slow
def test_dantzig_carries_a_smoothed_certificate():
    instance = generate("dantzig", 20, 60, 4, seed=3, mu=0.05)
    assert instance.smoothed is not None
    assert instance.smoothed.mu == 0.05
    assert instance.smoothed.report.passed(KKT_TOL)


@pytest.mark.slow
def test_mu_sweep_reaches_a_plateau():
    instance = generate("dantzig", 20, 60, 4, seed=3, mu=0.05)
    rows = mu_sweep(instance, [1e-3, 1e-2], budget=20000)
    assert [mu for mu, _ in rows] == [1e-3, 1e-2]
    assert all(0.0 <= err < 0.1 for _, err in rows)


def test_generation_is_deterministic_in_the_seed():
    np.testing.assert_array_equal(gen_gaussian_matrix(5, 7, seed=4), gen_gaussian_matrix(5, 7, seed=4))
    np.testing.assert_allclose(np.linalg.norm(gen_gaussian_matrix(5, 7, seed=4), axis=0), 1.0)
    np.testing.assert_array_equal(gen_sparse_signal(50, 5, 20, seed=9), gen_sparse_signal(50, 5, 20, seed=9))


def test_sparse_signal_dynamic_range():
    x = gen_sparse_signal(100, 5, 60, seed=1)
    mags = np.abs(x[x != 0])
    assert mags.size == 5
    assert mags.max() / mags.min() == pytest.approx(1e3)

    flat = gen_sparse_signal(40, 6, 0, seed=2)
    np.testing.assert_allclose(np.abs(flat[flat != 0]), 1.0)

    assert not np.any(gen_sparse_signal(10, 0, 40, seed=0))
    with pytest.raises(ParameterError):
        gen_sparse_signal(10, 11, 40)
    with pytest.raises(ParameterError):
        gen_sparse_signal(10, 2, -1)


def test_low_rank_and_sampling():
    X = gen_low_rank(8, 6, 2, seed=0)
    assert np.linalg.matrix_rank(X) == 2
    entries = gen_sampling(8, 6, 0.25, seed=0)
    assert len(entries) == 12
    assert len(set(entries)) == 12
    assert all(0 <= i < 8 and 0 <= j < 6 for i, j in entries)
    with pytest.raises(ParameterError):
        gen_sampling(8, 6, 0.0)


def test_add_noise_hits_the_snr():
    b = np.linspace(1.0, 2.0, 40)
    noisy = add_noise(b, 30.0, seed=5)
    snr = 20 * np.log10(np.linalg.norm(b) / np.linalg.norm(noisy - b))
    assert snr == pytest.approx(30.0)


def test_zero_certificate_when_delta_covers_the_data():
    A = gen_gaussian_matrix(10, 20, seed=0)
    x = gen_sparse_signal(20, 3, 20, seed=0)
    delta = 2.0 * float(np.max(np.abs(A.T @ (A @ x))))
    instance = gen_dantzig_exact(A, x, delta, mu=0.1)
    assert not np.any(instance.x_star)
    assert not np.any(instance.lam_star)
    assert instance.report.passed(KKT_TOL)
    assert instance.smoothed.report.passed(KKT_TOL)


def test_basis_pursuit_certificate_by_hand():
    A = np.eye(3)
    x = np.array([1.0, -2.0, 0.0])
    report = certify_basis_pursuit(A, x.copy(), x, np.array([1.0, -1.0, 0.5]))
    assert report.passed(KKT_TOL)
    assert report.off_support_max == 0.5
    # a dual that touches the bound off the support is not strict
    assert not certify_basis_pursuit(A, x.copy(), x, np.array([1.0, -1.0, 1.0])).passed(KKT_TOL)
    assert not certify_basis_pursuit(A, x + 0.1, x, np.array([1.0, -1.0, 0.5])).passed(KKT_TOL)


def test_perturbation_matches_signs_on_the_support():
    x_hat = np.array([2.0, 0.0, -1.0, 0.0])
    u = np.array([0.9, 1.2, -0.8, 0.3])
    d, T = perturbation(x_hat, u)
    np.testing.assert_allclose((d * u)[T], np.sign(x_hat[T]))
    assert np.all(np.abs((d * u)[~T]) < 1.0)
    assert d[3] == 1.0
    with pytest.raises(CertificateError):
        perturbation(x_hat, np.array([-0.9, 0.0, -0.8, 0.0]))


def test_plateau_mu():
    rows = [(1e-1, 1e-3), (1e-3, 1e-9), (1e-2, 1e-7)]
    assert plateau_mu(rows) == 1e-2
    assert plateau_mu([(1e-3, 1e-2)]) is None


def test_unknown_kind_is_rejected():
    with pytest.raises(ParameterError):
        generate("nuclear", 10, 20, 2)
