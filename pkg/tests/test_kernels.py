"""Backend agreement: the compiled kernels must match the NumPy reference
bit-for-bit in semantics (same interpolation, same zero extension)."""

import numpy as np
import pytest

from sphavg import _kernels_py, kernels


requires_compiled = pytest.mark.skipif(
    not kernels.HAVE_COMPILED, reason="compiled kernels unavailable")


def test_backend_reports_name():
    assert kernels.backend_name() in ("compiled", "python")


@requires_compiled
def test_eval_1d_matches(rng):
    v = rng.normal(size=57)
    px = rng.uniform(-2.0, 4.0, size=4000)
    got = kernels.eval_grid_1d(v, -1.0, 0.05, px)
    ref = _kernels_py.eval_grid_1d(v, -1.0, 0.05, px)
    assert np.allclose(got, ref, atol=1e-14, rtol=0)


@requires_compiled
@pytest.mark.parametrize("shape", [(40, 37), (8, 64)])
def test_eval_2d_matches(rng, shape):
    v = rng.normal(size=shape)
    pts = rng.uniform(-2.0, 2.0, size=(5000, 2))
    args = (v, -1.0, -1.0, 2.0 / shape[0], 2.0 / shape[1],
            pts[:, 0].copy(), pts[:, 1].copy())
    got = kernels.eval_grid_2d(*args)
    ref = _kernels_py.eval_grid_2d(*args)
    assert np.allclose(got, ref, atol=1e-14, rtol=0)


@requires_compiled
def test_eval_3d_matches(rng):
    v = rng.normal(size=(12, 15, 9))
    pts = rng.uniform(-1.5, 1.5, size=(3000, 3))
    args = (v, -1.0, -1.0, -1.0, 2.0 / 12, 2.0 / 15, 2.0 / 9,
            pts[:, 0].copy(), pts[:, 1].copy(), pts[:, 2].copy())
    got = kernels.eval_grid_3d(*args)
    ref = _kernels_py.eval_grid_3d(*args)
    assert np.allclose(got, ref, atol=1e-14, rtol=0)


@requires_compiled
def test_rect_union_matches(rng):
    n = 60
    ang = rng.uniform(0, np.pi, n)
    args = (rng.uniform(-1, 1, n), rng.uniform(-1, 1, n),
            np.cos(ang), np.sin(ang),
            rng.uniform(0.05, 0.3, n), rng.uniform(0.01, 0.1, n),
            rng.uniform(-1.5, 1.5, 5000), rng.uniform(-1.5, 1.5, 5000))
    got = kernels.rect_union_contains(*args)
    ref = _kernels_py.rect_union_contains(*args)
    assert np.array_equal(got, ref)


def test_outside_reads_zero():
    v = np.ones((4, 4))
    out = kernels.eval_grid_2d(v, 0.0, 0.0, 0.25, 0.25,
                               np.array([5.0, -3.0]), np.array([0.5, 0.5]))
    assert np.all(out == 0.0)


def test_set_backend_roundtrip():
    old = kernels.backend_name()
    kernels.set_backend("python")
    assert kernels.backend_name() == "python"
    if kernels.HAVE_COMPILED:
        kernels.set_backend("compiled")
    kernels.set_backend(old)
