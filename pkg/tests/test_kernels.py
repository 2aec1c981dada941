"""Compiled and pure-numpy kernel backends must agree numerically."""

import numpy as np
import pytest

from circlepatterns import kernels

needs_both = pytest.mark.skipif(
    len(kernels.available_backends()) < 2,
    reason="compiled extension not available",
)


def _random_batch(rng, n, wide=False):
    theta = rng.uniform(0.05, 3.0, n)
    lo, hi = (-1e6, -1e-6) if wide else (-5.0, -0.1)
    u1 = -np.exp(rng.uniform(np.log(-hi), np.log(-lo), n))
    u2 = -np.exp(rng.uniform(np.log(-hi), np.log(-lo), n))
    return theta, u1, u2


def _run(name, fn_args):
    previous = kernels.set_backend(name)
    try:
        out = {}
        for label, fn, args in fn_args:
            out[label] = fn(*args)
        return out
    finally:
        kernels.set_backend(previous)


@needs_both
@pytest.mark.parametrize("wide", [False, True])
def test_backends_agree(wide):
    rng = np.random.default_rng(101 + wide)
    theta, u1, u2 = _random_batch(rng, 4096, wide=wide)
    calls = [
        ("angles_110", kernels.angles_110, (theta, u1, u2)),
        ("full_110", kernels.full_110, (theta, u1, u2)),
        ("s1", kernels.s_of_theta, (1, np.minimum(theta, 3.0))),
        ("s0", kernels.s_of_theta, (0, theta)),
        ("sm1", kernels.s_of_theta, (-1, theta)),
        ("angles_001", kernels.angles_00d, (1, np.minimum(theta, 3.0), u1, u2)),
        ("full_001", kernels.full_00d, (1, np.minimum(theta, 3.0), u1, u2)),
        ("full_000", kernels.full_00d, (0, theta, u1, u2)),
        ("full_00m1", kernels.full_00d, (-1, theta, u1, u2)),
    ]
    compiled = _run("compiled", calls)
    python = _run("python", calls)
    for label in compiled:
        c = np.atleast_2d(np.asarray(compiled[label], dtype=np.float64))
        p = np.atleast_2d(np.asarray(python[label], dtype=np.float64))
        np.testing.assert_allclose(
            c, p, rtol=1e-13, atol=1e-15, err_msg=f"mismatch in {label}"
        )


@needs_both
def test_empty_batches():
    empty = np.empty(0, dtype=np.float64)
    for name in kernels.available_backends():
        previous = kernels.set_backend(name)
        try:
            b1, b2 = kernels.angles_110(empty, empty, empty)
            assert b1.shape == (0,) and b2.shape == (0,)
            out = kernels.full_00d(0, empty, empty, empty)
            assert all(arr.shape == (0,) for arr in out)
        finally:
            kernels.set_backend(previous)


def test_set_backend_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_backend_selection_roundtrip():
    current = kernels.backend_name()
    previous = kernels.set_backend("python")
    assert kernels.backend_name() == "python"
    kernels.set_backend(previous)
    assert kernels.backend_name() == current
