"""Adjoint chains on finite-dimensional trilinear tensors."""

import numpy as np
import pytest

from bidual.templates import PERMS
from bidual.tensors import (
    TensorShapeError,
    TrilinearTensor,
    adjoint,
    circledast,
    permuted,
    permuted_extension,
    random_tensor,
)


def _rand_vec(rng, d):
    return rng.standard_normal(d) + 1j * rng.standard_normal(d)


def test_adjoint_signature():
    rng = np.random.default_rng(0)
    t = random_tensor((2, 3, 4, 5), rng)
    assert adjoint(t).dims == (5, 2, 3, 4)


def test_adjoint_defining_identity():
    # <f*(y*, x1, x2), x3> = <y*, f(x1, x2, x3)> with the bilinear pairing
    rng = np.random.default_rng(1)
    t = random_tensor((2, 3, 4, 5), rng)
    ts = adjoint(t)
    ystar = _rand_vec(rng, 5)
    x1, x2, x3 = _rand_vec(rng, 2), _rand_vec(rng, 3), _rand_vec(rng, 4)
    lhs = np.dot(ts.evaluate(ystar, x1, x2), x3)
    rhs = np.dot(ystar, t.evaluate(x1, x2, x3))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_circledast_is_identity_elementwise():
    rng = np.random.default_rng(2)
    for dims in ((2, 2, 2, 2), (3, 3, 3, 3), (1, 2, 3, 2), (3, 1, 2, 1)):
        t = random_tensor(dims, rng)
        assert np.allclose(circledast(t).array, t.array, atol=1e-12, rtol=0.0)


def test_permuted_extension_equals_original_for_all_six():
    rng = np.random.default_rng(3)
    for dims in ((3, 3, 3, 3), (2, 3, 1, 2)):
        t = random_tensor(dims, rng)
        for p in PERMS:
            assert np.allclose(permuted_extension(t, p).array, t.array, atol=1e-12)


def test_permuted_reorders_inputs():
    rng = np.random.default_rng(4)
    t = random_tensor((2, 3, 4, 2), rng)
    x1, x2, x3 = _rand_vec(rng, 2), _rand_vec(rng, 3), _rand_vec(rng, 4)
    s = PERMS[4]  # images (3, 1, 2)
    ts = permuted(t, s)
    xs = (x1, x2, x3)
    args = [xs[s(k) - 1] for k in (1, 2, 3)]
    assert np.allclose(ts.evaluate(*args), t.evaluate(x1, x2, x3), atol=1e-12)


def test_extension_norm_preserving_on_random_inputs():
    rng = np.random.default_rng(5)
    t = random_tensor((3, 3, 3, 3), rng)
    ext = circledast(t)
    for _ in range(20):
        xs = [_rand_vec(rng, 3) for _ in range(3)]
        v1, v2 = t.evaluate(*xs), ext.evaluate(*xs)
        assert np.linalg.norm(v1 - v2) <= 1e-10 * max(1.0, np.linalg.norm(v1))


def test_shape_errors():
    with pytest.raises(TensorShapeError):
        TrilinearTensor(np.zeros((2, 2, 2)))
    with pytest.raises(TensorShapeError):
        TrilinearTensor(np.full((1, 1, 1, 1), np.nan))
    t = TrilinearTensor(np.zeros((2, 3, 4, 5)))
    with pytest.raises(TensorShapeError):
        t.evaluate(np.zeros(3), np.zeros(3), np.zeros(4))
