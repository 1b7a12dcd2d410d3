import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from kgorient.linalg import jacobi_svd


def check_svd(a, U, s, Vt, tol=1e-10):
    scale = max(np.linalg.norm(a), 1.0)
    assert np.linalg.norm(U @ np.diag(s) @ Vt - a) <= tol * scale
    assert np.allclose(U.T @ U, np.eye(U.shape[1]), atol=1e-10)
    assert np.allclose(Vt @ Vt.T, np.eye(Vt.shape[0]), atol=1e-10)
    assert np.all(np.diff(s) <= 1e-12 * scale)


@pytest.mark.parametrize("shape", [(1, 1), (2, 2), (5, 5), (7, 3), (3, 7), (64, 64), (100, 100)])
def test_matches_lapack(shape):
    a = np.random.default_rng(sum(shape)).normal(size=shape)
    U, s, Vt, rank = jacobi_svd(a)
    check_svd(a, U, s, Vt)
    assert np.allclose(s, np.linalg.svd(a, compute_uv=False), rtol=1e-10, atol=1e-12)
    assert rank == min(shape)


def test_rank_deficient_completion():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 2)) @ rng.normal(size=(2, 6))
    U, s, Vt, rank = jacobi_svd(a)
    assert rank == 2
    check_svd(a, U, s, Vt)
    U, s, Vt, rank = jacobi_svd(np.zeros((4, 4)))
    assert rank == 0 and np.array_equal(U @ Vt, np.eye(4))


@pytest.mark.parametrize("d,missing", [(19, 3), (20, 6), (30, 1), (12, 11)])
def test_completion_with_few_missing_columns(d, missing):
    # few null directions leave every basis vector with a small residual
    rng = np.random.default_rng(d)
    a = rng.normal(size=(d, d - missing)) @ rng.normal(size=(d - missing, d))
    U, s, Vt, rank = jacobi_svd(a)
    assert rank == d - missing
    check_svd(a, U, s, Vt)


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        jacobi_svd(np.array([[1.0, np.inf], [0.0, 1.0]]))


@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)),
              elements=st.floats(-1e3, 1e3, allow_subnormal=False)))
@settings(max_examples=200, deadline=None)
def test_property_reconstruction(a):
    U, s, Vt, _ = jacobi_svd(a)
    check_svd(a, U, s, Vt, tol=1e-9)
