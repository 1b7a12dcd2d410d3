import io

import numpy as np
import pytest

from conftest import random_orthogonal
from kgorient.embedder import EmbeddingSpace
from kgorient.orientation import (AnchorSet, RotationModel, anchor_residual, apply_rotation,
                                  compute_rotation)


def centered(x):
    return x - x.mean(axis=0)


@pytest.mark.parametrize("svd", ["jacobi", "numpy"])
def test_identical_anchors_give_identity(svd):
    a = np.random.default_rng(0).normal(size=(12, 5))
    model = compute_rotation(AnchorSet(a, a), svd=svd)
    assert np.allclose(model.rotation, np.eye(5), atol=1e-8)
    assert not model.rank_deficient


def test_undoes_quarter_turn():
    src = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])
    rot90 = np.array([[0.0, -1.0], [1.0, 0.0]])  # column-vector rotation by +90 degrees
    tgt = src @ rot90.T
    model = compute_rotation(AnchorSet(src, tgt))
    assert np.linalg.norm(centered(tgt) @ model.rotation - centered(src)) <= 1e-8
    assert np.allclose(model.rotation, rot90, atol=1e-12)
    assert anchor_residual(model, AnchorSet(src, tgt)) <= 1e-8


def test_single_anchor_is_identity_and_flagged():
    model = compute_rotation(AnchorSet([[1.0, 2.0, 3.0]], [[4.0, 5.0, 6.0]]))
    assert np.array_equal(model.rotation, np.eye(3))
    assert model.rank_deficient and model.rank == 0
    assert np.array_equal(model.source_mean, [1.0, 2.0, 3.0])


def test_reflection_is_not_corrected():
    a = np.random.default_rng(1).normal(size=(10, 3))
    flip = np.diag([1.0, 1.0, -1.0])
    model = compute_rotation(AnchorSet(a, a @ flip))
    assert model.determinant == pytest.approx(-1.0)
    assert np.allclose(model.rotation, flip, atol=1e-10)


def test_input_validation():
    with pytest.raises(ValueError):
        AnchorSet([[1.0, np.nan]], [[1.0, 2.0]])
    with pytest.raises(ValueError):
        AnchorSet([[1.0, 2.0]], [[1.0, 2.0, 3.0]])
    with pytest.raises(ValueError):
        compute_rotation(AnchorSet([[1.0]], [[1.0]]), svd="qr")


@pytest.mark.parametrize("seed", range(20))
def test_exact_recovery_of_rigid_motion(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 8))
    n = d + int(rng.integers(1, 10))
    a = rng.normal(size=(n, d))
    Q = random_orthogonal(rng, d)
    b = a @ Q + rng.normal(size=d) * 10
    model = compute_rotation(AnchorSet(a, b))
    assert np.linalg.norm(centered(b) @ model.rotation - centered(a)) <= 1e-6
    assert model.orthogonality_error() <= 1e-8 * d


@pytest.mark.parametrize("seed", range(10))
def test_translation_invariance(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=(9, 4)), rng.normal(size=(9, 4))
    base = compute_rotation(AnchorSet(a, b)).rotation
    shifted_src = compute_rotation(AnchorSet(a + rng.normal(size=4) * 5, b)).rotation
    shifted_tgt = compute_rotation(AnchorSet(a, b - rng.normal(size=4) * 5)).rotation
    assert np.allclose(shifted_src, base, atol=1e-9)
    assert np.allclose(shifted_tgt, base, atol=1e-9)


def test_jacobi_and_lapack_agree_on_full_rank():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=(200, 100)), rng.normal(size=(200, 100))
    r1 = compute_rotation(AnchorSet(a, b), svd="jacobi").rotation
    r2 = compute_rotation(AnchorSet(a, b), svd="numpy").rotation
    assert np.allclose(r1, r2, atol=1e-8)


def test_apply_rotation():
    space = EmbeddingSpace(["x", "y"], [[1.0, 0.0], [0.0, 2.0]])
    ident = RotationModel.identity(2)
    assert np.array_equal(apply_rotation(ident, space, "target").vectors, space.vectors)
    assert np.array_equal(apply_rotation(ident, space, "source").vectors, space.vectors)
    shift = RotationModel(np.array([1.0, 0.0]), np.zeros(2), np.eye(2))
    assert np.array_equal(apply_rotation(shift, space, "source")["x"], [0.0, 0.0])
    with pytest.raises(ValueError):
        apply_rotation(RotationModel.identity(3), space, "source")
    with pytest.raises(ValueError):
        apply_rotation(ident, space, "middle")


def test_target_side_is_isometry():
    rng = np.random.default_rng(7)
    vecs = rng.normal(size=(50, 6))
    model = RotationModel(rng.normal(size=6), rng.normal(size=6), random_orthogonal(rng, 6))
    space = EmbeddingSpace([f"t{i}" for i in range(50)], vecs)
    moved = apply_rotation(model, space, "target").vectors
    before = np.linalg.norm(vecs[:, None] - vecs[None], axis=-1)
    after = np.linalg.norm(moved[:, None] - moved[None], axis=-1)
    off = ~np.eye(50, dtype=bool)
    assert np.max(np.abs(after[off] - before[off]) / before[off]) <= 1e-9


def test_model_dump_load():
    rng = np.random.default_rng(2)
    model = compute_rotation(AnchorSet(rng.normal(size=(6, 3)), rng.normal(size=(6, 3))))
    buf = io.StringIO()
    model.dump(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "3" and len(lines) == 6
    back = RotationModel.load(io.StringIO(buf.getvalue()))
    assert np.array_equal(back.rotation, model.rotation)
    assert np.array_equal(back.source_mean, model.source_mean)
    assert np.array_equal(back.target_mean, model.target_mean)
