"""Backend parity: the compiled extension must agree with the numpy
fallback on every kernel, to floating-point roundoff."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfmax import kernels
from lfmax.ensembles import Kind, sample_angles_batch, sample_verblunsky
from lfmax.kernels import _numpy_impl

try:
    from lfmax.kernels import _ckernels
except ImportError:
    _ckernels = None

needs_compiled = pytest.mark.skipif(
    _ckernels is None, reason="compiled extension not built"
)


@pytest.fixture(scope="module")
def rng():
    return np.random.default_rng(2024)


class TestSelection:
    def test_backend_label(self):
        assert kernels.BACKEND in ("cython", "numpy")

    @needs_compiled
    def test_compiled_is_default(self):
        import os

        if os.environ.get("LFMAX_PURE_PYTHON") == "1":
            assert kernels.BACKEND == "numpy"
        else:
            assert kernels.BACKEND == "cython"


@needs_compiled
class TestParity:
    def test_grid(self, rng):
        angles = rng.uniform(0.0, 2.0 * np.pi, size=40)
        thetas = rng.uniform(0.0, 2.0 * np.pi, size=500)
        a = _ckernels.logabs_charpoly_grid(angles, thetas)
        b = _numpy_impl.logabs_charpoly_grid(angles, thetas)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)

    def test_grid_exact_hit(self):
        angles = np.array([0.5, 1.5])
        a = _ckernels.logabs_charpoly_grid(angles, np.array([0.5]))
        b = _numpy_impl.logabs_charpoly_grid(angles, np.array([0.5]))
        assert a[0] == -np.inf and b[0] == -np.inf

    def test_max_charpoly(self, rng):
        batch = sample_angles_batch(Kind.UNITARY, 24, 32, rng)
        a = _ckernels.max_logabs_charpoly_batch(batch, 8, 1e-10)
        b = _numpy_impl.max_logabs_charpoly_batch(batch, 8, 1e-10)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)

    def test_max_szego(self, rng):
        batch = sample_verblunsky(30, 32, rng)
        a = _ckernels.max_logabs_szego_batch(batch, 8, 1e-10)
        b = _numpy_impl.max_logabs_szego_batch(batch, 8, 1e-10)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)

    def test_rs_main_sum(self, rng):
        ts = rng.uniform(50.0, 5000.0, size=200)
        thetas = rng.uniform(-50.0, 50.0, size=200)
        a = _ckernels.rs_main_sum(ts, thetas)
        b = _numpy_impl.rs_main_sum(ts, thetas)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-10)

    @given(st.integers(min_value=-500, max_value=500).filter(lambda d: d != 0))
    @settings(max_examples=60, deadline=None)
    def test_kronecker(self, d):
        ns = np.arange(1, 400, dtype=np.int64)
        a = _ckernels.kronecker_many(d, ns)
        b = _numpy_impl.kronecker_many(d, ns)
        np.testing.assert_array_equal(a, b)


class TestNumpyKernelsDirect:
    # oracle checks that hold for whichever backend is active
    def test_grid_single_eigenvalue(self):
        # N = 1 at angle 0: log|1 - e^{-i theta}| = log(2|sin(theta/2)|)
        thetas = np.linspace(0.1, 2.0 * np.pi - 0.1, 50)
        got = kernels.logabs_charpoly_grid(np.array([0.0]), thetas)
        want = np.log(2.0 * np.abs(np.sin(thetas / 2.0)))
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_max_exceeds_grid(self, rng):
        batch = sample_angles_batch(Kind.UNITARY, 16, 8, rng)
        maxes = kernels.max_logabs_charpoly_batch(batch, 8, 1e-10)
        # the seeding grid has oversample * N = 128 points; any coarser
        # evaluation is a lower bound on the refined maximum
        grid = np.linspace(0.0, 2.0 * np.pi, 65)[:-1]
        for r in range(batch.shape[0]):
            dense = kernels.logabs_charpoly_grid(batch[r], grid).max()
            assert maxes[r] >= dense - 1e-9

    def test_rs_sum_below_first_term(self):
        # t < 2 pi means nu = 0 and the sum is empty
        out = kernels.rs_main_sum(np.array([3.0]), np.array([1.0]))
        assert out[0] == 0.0

    def test_kronecker_minus_one(self):
        # (-1|n) = (-1)^((n-1)/2) for odd n
        ns = np.arange(1, 100, 2, dtype=np.int64)
        got = kernels.kronecker_many(-1, ns)
        want = np.where(ns % 4 == 1, 1, -1).astype(np.int8)
        np.testing.assert_array_equal(got, want)
