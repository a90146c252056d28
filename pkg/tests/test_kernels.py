import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import mutual_info, simplex_projection_sort
from sharedrand import _accel, kernels

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")

vectors = st.integers(1, 9).flatmap(
    lambda n: arrays(np.float64, n, elements=st.floats(-5, 5, allow_nan=False)))


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


class TestProjection:
    @given(vectors)
    def test_matches_sort_oracle(self, v):
        np.testing.assert_allclose(kernels._project_simplex_np(v), simplex_projection_sort(v),
                                   atol=1e-12)

    @given(vectors)
    def test_feasible(self, v):
        w = kernels.project_simplex(v)
        assert w.min() >= 0 and abs(w.sum() - 1) <= 1e-12

    @needs_numba
    @given(vectors)
    def test_backends_agree(self, v):
        np.testing.assert_allclose(kernels._project_simplex_nb(v), kernels._project_simplex_np(v),
                                   atol=1e-14)


class TestMutualInformation:
    @needs_numba
    def test_backends_agree(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            p = rng.exponential(size=tuple(rng.integers(1, 7, size=2)))
            p[rng.random(p.shape) < 0.2] = 0.0
            p /= p.sum() if p.sum() > 0 else 1.0
            if p.sum() == 0:
                continue
            a = kernels._mutual_information_np(p)
            b = kernels._mutual_information_nb(p)
            assert a == pytest.approx(b, abs=1e-13)
            assert a == pytest.approx(mutual_info(p), abs=1e-12)

    def test_tiny_negatives_clamped(self):
        p = np.array([[0.5, -1e-13], [0.0, 0.5 + 1e-13]])
        assert np.isfinite(kernels._mutual_information_np(p))


class TestApplyLocal:
    @needs_numba
    def test_backends_agree(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            na, nb, oa, ob = rng.integers(1, 7, size=4)
            p = rng.random((na, nb))
            sa, sb = rng.random((oa, na)), rng.random((ob, nb))
            ref = sa @ p @ sb.T
            np.testing.assert_allclose(kernels._apply_local_np(sa, sb, p), ref, atol=1e-14)
            np.testing.assert_allclose(kernels._apply_local_nb(sa, sb, p), ref, atol=1e-14)


class TestJacobi:
    @pytest.mark.parametrize("impl", ["_jacobi_eigh_np", "_jacobi_eigh_nb"])
    def test_against_lapack(self, impl):
        if impl.endswith("nb") and not _accel.HAVE_NUMBA:
            pytest.skip("numba not installed")
        fn = getattr(kernels, impl)
        rng = np.random.default_rng(2)
        for _ in range(200):
            n = int(rng.integers(1, 5))
            h = random_hermitian(rng, n)
            w, v, sweeps = fn(h)
            np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-12)
            np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-12)
            np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-12)
            assert sweeps <= 100

    def test_degenerate(self):
        h = np.diag([1.0, 1.0, 2.0, 2.0]).astype(complex)
        w, _, _ = kernels.jacobi_eigh(h)
        np.testing.assert_allclose(w, [1, 1, 2, 2])

    def test_sorted(self):
        w, _, _ = kernels.jacobi_eigh(np.diag([4.0, 1.0, 3.0, 2.0]).astype(complex))
        np.testing.assert_array_equal(w, [1, 2, 3, 4])


class TestRng:
    @needs_numba
    @pytest.mark.parametrize("seed,start", [(0, 0), (0, 7), (12345, 3), (2**64 - 1, 199)])
    def test_streams_identical(self, seed, start):
        sp = kernels._new_state_py(seed, start)
        sn = kernels._new_state_nb(np.uint64(seed), start)
        a = [kernels._uniform_py(sp) for _ in range(50)]
        b = [kernels._uniform_nb(sn) for _ in range(50)]
        assert a == b

    def test_uniform_range(self):
        s = kernels._new_state_py(1, 0)
        u = np.array([kernels._uniform_py(s) for _ in range(5000)])
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 0.02

    def test_starts_differ(self):
        a = kernels._new_state_py(0, 0)
        b = kernels._new_state_py(0, 1)
        assert kernels._uniform_py(a) != kernels._uniform_py(b)


class TestSmoothMin:
    def test_hard(self):
        assert kernels.smooth_min(np.array([0.3, 0.1, 0.2]), 0.0) == 0.1

    @given(arrays(np.float64, st.integers(2, 8), elements=st.floats(0, 1)),
           st.floats(1.0, 1e4))
    def test_below_min_and_increasing(self, c, beta):
        lo = kernels.smooth_min(c, beta)
        hi = kernels.smooth_min(c, 3 * beta)
        assert lo <= c.min() + 1e-15
        assert lo <= hi + 1e-15
        assert c.min() - lo <= np.log(c.size) / beta + 1e-12


class TestObjectives:
    def test_alpha_edge_table(self):
        n = 3
        x = np.concatenate([[0.5, 0.5], [0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0, 0.5], [0, 0.5, 0.5]])
        q = kernels.alpha_edge_table(x, n)
        sa = np.array([[0, 0.5], [0.5, 0], [0.5, 0.5]])
        sb = np.array([[0.5, 0], [0, 0.5], [0.5, 0.5]])
        np.testing.assert_allclose(q, sa @ np.diag([0.5, 0.5]) @ sb.T)
        assert kernels.alpha_edge_cells(x, np.array([3.0])).min() == pytest.approx(1 / 8)

    def test_general_table(self):
        m, n = 3, 4
        p = np.full(m * m, 1 / 9)
        cols = np.tile(np.full(n, 1 / n), 2 * m)
        q = kernels.general_table(np.concatenate([p, cols]), m, n)
        np.testing.assert_allclose(q, 1 / 16)

    def test_offdiag_cells(self):
        q = np.arange(9.0).reshape(3, 3)
        assert sorted(kernels.offdiag_cells(q)) == [1, 2, 3, 5, 6, 7]


class TestAccel:
    def test_backend_name(self):
        assert _accel.backend() in ("numba", "numpy")

    def test_flag_disables_compilation(self):
        code = ("from sharedrand import _accel, kernels;"
                "print(_accel.backend(), _accel.is_compiled(kernels.search_start),"
                " kernels.project_simplex is kernels._project_simplex_np)")
        env = dict(os.environ, SHAREDRAND_DISABLE_NUMBA="1")
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        assert out == ["numpy", "False", "True"]
