import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import edge_closed_form
from sharedrand.coinspace import (JointDist, alpha_correlated, eq_not_alpha, make_joint,
                                  mutual_information, random_joint)
from sharedrand.errors import (ColumnNotNormalized, DimensionMismatch, NegativeEntry,
                               OutOfRange)
from sharedrand.freeops import (StochasticMatrix, alpha_edge_spec, apply_local, identity,
                                lemma1_decompose, make_stochastic, random_stochastic, swap,
                                unpack_alpha_edge, verify_lemma2)
from sharedrand.maximin import OptimizerConfig

C_DELTA = [[1 / 3, 0], [1 / 3, 1 / 3]]
S_A_DELTA = [[0, 2 / 3], [1, 1 / 3]]
S_B_DELTA = [[1 / 3, 1], [2 / 3, 0]]


class TestStochastic:
    def test_valid(self):
        make_stochastic(np.eye(2))
        make_stochastic(S_A_DELTA)

    def test_column_sum(self):
        with pytest.raises(ColumnNotNormalized):
            make_stochastic([[0.5, 0.5], [0.6, 0.5]])

    def test_negative(self):
        with pytest.raises(NegativeEntry):
            make_stochastic([[1.5, 0.5], [-0.5, 0.5]])

    def test_shapes(self):
        s = random_stochastic(3, 2, 1)
        assert (s.n_out, s.n_in) == (3, 2)
        with pytest.raises(DimensionMismatch):
            StochasticMatrix([1.0])

    def test_composition(self):
        a, b = random_stochastic(4, 3, 1), random_stochastic(3, 2, 2)
        np.testing.assert_allclose((a @ b).s.sum(axis=0), 1.0, atol=1e-12)

    def test_random_deterministic(self):
        np.testing.assert_array_equal(random_stochastic(2, 2, 7).s, random_stochastic(2, 2, 7).s)

    def test_random_columns(self):
        np.testing.assert_allclose(random_stochastic(3, 2, 11).s.sum(axis=0), 1.0, atol=1e-12)

    def test_random_range(self):
        with pytest.raises(OutOfRange):
            random_stochastic(0, 2, 1)


class TestApplyLocal:
    def test_c_delta_from_alpha_half(self):
        out = apply_local(make_stochastic(S_A_DELTA), make_stochastic(S_B_DELTA),
                          alpha_correlated(0.5))
        np.testing.assert_allclose(out.flat(), [1 / 3, 0, 1 / 3, 1 / 3], atol=1e-15)

    def test_identity(self):
        j = random_joint(np.random.default_rng(1), 3, 2)
        assert apply_local(identity(3), identity(2), j).allclose(j, atol=0)

    def test_swap(self):
        a = 0.3
        np.testing.assert_allclose(apply_local(swap(), identity(2), alpha_correlated(a)).p,
                                   [[0, 1 - a], [a, 0]])

    def test_mismatch(self):
        with pytest.raises(DimensionMismatch):
            apply_local(identity(3), identity(2), alpha_correlated(0.5))

    def test_matches_matrix_form(self):
        rng = np.random.default_rng(5)
        j = random_joint(rng, 3, 4)
        sa, sb = random_stochastic(5, 3, rng), random_stochastic(2, 4, rng)
        np.testing.assert_allclose(apply_local(sa, sb, j).p, sa.s @ j.p @ sb.s.T, atol=1e-15)

    @given(st.integers(0, 2**32 - 1))
    def test_composition_law(self, seed):
        rng = np.random.default_rng(seed)
        j = random_joint(rng, 2, 3)
        a1, a2 = random_stochastic(3, 2, rng), random_stochastic(4, 3, rng)
        b1, b2 = random_stochastic(2, 3, rng), random_stochastic(3, 2, rng)
        twice = apply_local(a2, b2, apply_local(a1, b1, j))
        once = apply_local(a2 @ a1, b2 @ b1, j)
        assert twice.allclose(once, atol=1e-14)

    @given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.integers(1, 6),
           st.integers(1, 8), st.integers(1, 8))
    def test_monotone(self, seed, na, nb, oa, ob):
        rng = np.random.default_rng(seed)
        j = random_joint(rng, na, nb)
        out = apply_local(random_stochastic(oa, na, rng), random_stochastic(ob, nb, rng), j)
        assert abs(out.p.sum() - 1) <= 1e-12 and out.p.min() >= 0
        assert mutual_information(out) <= mutual_information(j) + 1e-9

    def test_monotone_from_alpha_half(self):
        rng = np.random.default_rng(0)
        src = alpha_correlated(0.5)
        for _ in range(1000):
            out = apply_local(random_stochastic(2, 2, rng), random_stochastic(2, 2, rng), src)
            assert mutual_information(out) <= 1 + 1e-9


class TestAlphaEdgeDecomposition:
    def test_c_delta(self):
        d = lemma1_decompose(make_joint(C_DELTA))
        assert d.residual <= 1e-7
        assert d.reconstruct().allclose(make_joint(C_DELTA), atol=1e-7)

    def test_alpha_identity_admissible(self):
        t = alpha_correlated(0.3)
        assert apply_local(identity(2), identity(2), alpha_correlated(0.3)).allclose(t)
        assert lemma1_decompose(t).residual <= 1e-7

    def test_closed_form_oracle_agrees(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            t = random_joint(rng, 2, 2)
            alpha, sa, sb = edge_closed_form(t.p)
            np.testing.assert_allclose(sa @ np.diag([alpha, 1 - alpha]) @ sb.T, t.p, atol=1e-15)
            d = lemma1_decompose(t)
            assert d.residual <= 1e-7
            assert np.max(np.abs(d.reconstruct().p - t.p)) == pytest.approx(d.residual)

    def test_vertices_and_faces(self):
        for t in ([[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 0.5], [0.5, 0]], [[0.5, 0.5], [0, 0]]):
            assert lemma1_decompose(make_joint(t)).residual <= 1e-7

    def test_wrong_shape(self):
        with pytest.raises(DimensionMismatch):
            lemma1_decompose(eq_not_alpha(3))


class TestPenalizedAlphaEdge:
    cfg = OptimizerConfig(max_starts=40)

    def test_n3(self):
        assert verify_lemma2(3, self.cfg) <= 1 / 8 + 1e-4

    def test_n4(self):
        assert verify_lemma2(4, self.cfg) <= 1 / 15 + 1e-4

    def test_without_penalty_still_bounded(self):
        v = verify_lemma2(3, self.cfg, penalty=0.0)
        assert v <= 1 / 8 + 1e-4
        assert v == pytest.approx(1 / 8, abs=1e-4)

    def test_range(self):
        with pytest.raises(OutOfRange):
            verify_lemma2(2)
        with pytest.raises(OutOfRange):
            verify_lemma2(3, penalty=-1.0)


def test_unpack_alpha_edge_roundtrip():
    spec = alpha_edge_spec(3)
    assert spec.size == 2 + 4 * 3
    x = np.concatenate([[0.25, 0.75], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1 / 3] * 3])
    alpha, sa, sb = unpack_alpha_edge(x, 3)
    assert alpha == 0.25
    np.testing.assert_array_equal(sa.s, [[1, 0], [0, 1], [0, 0]])
    np.testing.assert_allclose(sb.s[:, 1], 1 / 3)
    assert isinstance(apply_local(sa, sb, alpha_correlated(alpha)), JointDist)
