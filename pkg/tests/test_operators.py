import numpy as np
import pytest

from cfm.core.errors import DimensionError, ParameterError, ProblemFileError
from cfm.operators import (
    Space,
    adjoint,
    compose,
    counts,
    dct_matrix,
    diagonal,
    estimate_norm,
    identity,
    make_dense,
    make_diff2d,
    make_partial_dct,
    make_subsample,
    product,
    scale,
    stack,
    tv_norm,
)
from cfm.models import ModelKind, conic_model
from cfm.operators.io import load_image, load_matrix, save_image, save_matrix
from cfm.smoothing import smooth

from .conftest import adjoint_mismatch
from .helpers import desk_spec

TOL = 1e-10


def all_operators(rng):
    A = rng.standard_normal((12, 16))
    W = rng.standard_normal((16, 16))
    entries = [(i, j) for j in range(5) for i in range(6) if (i + 2 * j) % 3 != 0]
    dense = make_dense(A)
    dct = make_partial_dct([0, 3, 5, 9, 15], 16)
    return {
        "dense": dense,
        "dense_matrix_space": make_dense(rng.standard_normal((7, 12)), in_space=Space.matrix(3, 4)),
        "identity": identity(Space.real(9)),
        "diagonal": diagonal(rng.standard_normal(9)),
        "subsample": make_subsample(entries, 6, 5),
        "partial_dct": dct,
        "diff2d": make_diff2d(7),
        "adjoint": adjoint(dense),
        "scale": scale(dense, -2.5),
        "compose": compose(dense, make_dense(W, name="W")),
        "stack": stack([make_dense(W, name="W"), identity(Space.real(16))]),
        "stack_with_complex": stack([make_diff2d(4), identity(Space.matrix(4, 4))]),
    }


@pytest.mark.parametrize(
    "name",
    [
        "dense",
        "dense_matrix_space",
        "identity",
        "diagonal",
        "subsample",
        "partial_dct",
        "diff2d",
        "adjoint",
        "scale",
        "compose",
        "stack",
        "stack_with_complex",
    ],
)
def test_adjoint_identity(rng, name):
    op = all_operators(rng)[name]
    assert adjoint_mismatch(op, rng, pairs=100) <= TOL


def test_partial_dct_matches_direct_definition(rng):
    n = 32
    rows = [0, 1, 7, 8, 20, 31]
    op = make_partial_dct(rows, n)
    C = dct_matrix(n)
    x = rng.standard_normal(n)
    np.testing.assert_allclose(op.forward(x), C[rows] @ x, atol=1e-12)
    y = rng.standard_normal(len(rows))
    np.testing.assert_allclose(op.adjoint(y), C[rows].T @ y, atol=1e-12)


def test_dct_matrix_is_orthonormal():
    C = dct_matrix(16)
    np.testing.assert_allclose(C @ C.T, np.eye(16), atol=1e-12)


def test_partial_dct_rejects_bad_rows():
    with pytest.raises(ParameterError):
        make_partial_dct([0, 16], 16)
    with pytest.raises(ParameterError):
        make_partial_dct([2, 2], 16)


def test_subsample_reveals_column_major_entries():
    X = np.arange(12, dtype=float).reshape((3, 4), order="F")
    op = make_subsample([(0, 0), (2, 1), (1, 3)], 3, 4)
    np.testing.assert_array_equal(op.forward(X.reshape(-1, order="F")), [X[0, 0], X[2, 1], X[1, 3]])


def test_subsample_rejects_out_of_range_and_duplicates():
    with pytest.raises(ParameterError):
        make_subsample([(3, 0)], 3, 4)
    with pytest.raises(ParameterError):
        make_subsample([(1, 1), (1, 1)], 3, 4)


def test_diff2d_of_constant_image_is_zero_and_tv_matches():
    n = 6
    D = make_diff2d(n)
    np.testing.assert_allclose(D.forward(np.full(n * n, 3.0)), 0.0)
    X = np.zeros((n, n))
    X[2:, :] = 1.0
    z = D.out_space.native(D.forward(X.reshape(-1, order="F")))
    assert np.sum(np.abs(z)) == pytest.approx(tv_norm(X))
    assert tv_norm(X) == pytest.approx(n - 1)


def test_dimension_mismatch_raises(dense_op):
    with pytest.raises(DimensionError):
        dense_op.forward(np.zeros(49))
    with pytest.raises(DimensionError):
        compose(dense_op, dense_op)


def test_counts_and_paused(dense_op, rng):
    x = rng.standard_normal(50)
    dense_op.forward(x)
    dense_op.adjoint(dense_op.forward(x))
    assert (dense_op.forward_count, dense_op.adjoint_count) == (2, 1)
    with dense_op.paused():
        dense_op.forward(x)
    assert dense_op.forward_count == 2
    dense_op.reset_counts()
    assert counts(dense_op) == (0, 0)


def test_paused_reaches_parts(dense_op, rng):
    wrapped = scale(compose(dense_op, identity(Space.real(50))), 2.0)
    with wrapped.paused():
        wrapped.forward(rng.standard_normal(50))
    assert dense_op.forward_count == 0
    wrapped.forward(rng.standard_normal(50))
    assert dense_op.forward_count == 1


def test_estimate_norm_matches_svd(gaussian):
    op = make_dense(gaussian)
    assert estimate_norm(op, iters=500, tol=1e-12) == pytest.approx(np.linalg.norm(gaussian, 2), rel=1e-6)
    assert counts(op) == (0, 0)


def test_estimate_norm_of_zero_operator():
    assert estimate_norm(make_dense(np.zeros((3, 4)))) == 0.0


def test_space_split_join_and_product(rng):
    space = product(Space.real(3), Space.complex(2), Space.matrix(2, 3))
    assert space.size == 3 + 4 + 6
    v = space.random(rng)
    parts = space.split(v)
    assert parts[1].dtype == np.complex128
    assert parts[2].shape == (2, 3)
    np.testing.assert_array_equal(space.join(parts), v)


@pytest.mark.parametrize("suffix", [".csv", ".cfm"])
def test_matrix_io(tmp_path, rng, suffix):
    M = rng.standard_normal((4, 3))
    path = save_matrix(tmp_path / f"m{suffix}", M)
    np.testing.assert_array_equal(load_matrix(path), M)


def test_load_matrix_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_matrix(tmp_path / "missing.csv")
    bad = tmp_path / "bad.cfm"
    bad.write_bytes(b"NOPE" + b"\0" * 16)
    with pytest.raises(ProblemFileError):
        load_matrix(bad)
    wrong = tmp_path / "m.txt"
    wrong.write_text("1,2\n")
    with pytest.raises(ProblemFileError):
        load_matrix(wrong)


def test_image_io(tmp_path):
    pixels = np.linspace(0.0, 1.0, 20).reshape(4, 5)
    path = save_image(tmp_path / "img.png", pixels)
    loaded = load_image(path)
    assert loaded.shape == (4, 5)
    np.testing.assert_allclose(loaded, pixels, atol=1.0 / 255)


def nested_operators(rng):
    A = make_dense(rng.standard_normal((12, 16)), name="A")
    W = make_dense(rng.standard_normal((16, 16)), name="W")
    dct = make_partial_dct([1, 2, 7, 11], 16)
    return {
        "compose_three": compose(scale(dct, 0.5), W, diagonal(rng.standard_normal(16))),
        "stack_of_composites": stack([compose(A, W), scale(W, -3.0), dct]),
        "scaled_stack": scale(stack([A, identity(Space.real(16))]), 1.7),
        "adjoint_of_compose": adjoint(compose(A, W)),
        "diagonal_after_stack": compose(diagonal(rng.standard_normal(12 + 16)), stack([A, W])),
        "tv_after_subsample_adjoint": compose(make_diff2d(5), adjoint(make_subsample([(0, 0), (2, 1), (4, 4), (3, 2)], 5, 5))),
    }


@pytest.mark.parametrize(
    "name",
    [
        "compose_three",
        "stack_of_composites",
        "scaled_stack",
        "adjoint_of_compose",
        "diagonal_after_stack",
        "tv_after_subsample_adjoint",
    ],
)
def test_adjoint_identity_of_nested_operators(rng, name):
    op = nested_operators(rng)[name]
    assert adjoint_mismatch(op, rng, pairs=100) <= TOL


@pytest.mark.parametrize("kind", list(ModelKind), ids=lambda k: k.value)
def test_adjoint_identity_of_smoothed_dual_operators(rng, kind):
    model = conic_model(desk_spec(kind))
    ratios = [1.0 + i for i in range(len(model.blocks))]
    for cd in (smooth(model, 1.0), smooth(model, 1.0, ratios=ratios)):
        assert adjoint_mismatch(cd.op, rng, pairs=100) <= TOL


def test_estimate_norm_honours_zero_iterations():
    op = diagonal(np.arange(1.0, 6.0))
    x = op.in_space.random(np.random.default_rng(3))
    x /= np.linalg.norm(x)
    assert estimate_norm(op, iters=0, seed=3) == pytest.approx(float(np.linalg.norm(op.forward(x))))
    assert estimate_norm(op, iters=0, seed=3) < estimate_norm(op, iters=500, tol=1e-14, seed=3)
    with pytest.raises(ParameterError):
        estimate_norm(op, iters=-1)
