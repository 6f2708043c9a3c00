import numpy as np
import pytest

from glopss import (
    RegParams,
    prox_edge_weights,
    prox_neg_log,
    prox_nonneg_linear,
    prox_trace_group_lasso,
    svt,
)
from glopss.problem import diag_vec_indices

from oracles import (
    group_prox_objective,
    oracle_prox_edge_weights,
    oracle_prox_neg_log,
    oracle_prox_nonneg_linear,
    oracle_prox_trace_group,
    oracle_svt,
    prox_objective,
    subgradient_prox_trace_group,
)


class TestRegParams:
    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError, match="alpha"):
            RegParams(alpha=0.0)

    def test_single_k_penalty(self):
        with pytest.raises(ValueError, match="at most one"):
            RegParams(alpha=1.0, gamma21=0.5, gammastar=0.5)

    def test_both_zero_is_fine(self):
        RegParams(alpha=1.0)


class TestProxEdgeWeights:
    def test_reduces_to_projection(self):
        out = prox_edge_weights(np.array([-1.0, 2.0]), np.zeros(2), beta=0.0, step=1.0)
        assert out.tolist() == [0.0, 2.0]

    def test_zero_point_stays_zero(self, rng):
        z = rng.random(6)
        out = prox_edge_weights(np.zeros(6), z, beta=0.3, step=0.7)
        assert np.array_equal(out, np.zeros(6))

    def test_rejects_bad_step(self):
        with pytest.raises(ValueError, match="step"):
            prox_edge_weights(np.ones(2), np.ones(2), 0.0, step=0.0)

    def test_matches_projected_gradient_oracle(self, rng):
        for _ in range(30):
            p = int(rng.integers(1, 7))
            w = rng.standard_normal(p) * 2.0
            z = rng.random(p) * 3.0
            beta = float(rng.random() * 2.0)
            step = float(0.05 + rng.random())
            got = prox_edge_weights(w, z, beta, step)
            ref = oracle_prox_edge_weights(w, z, beta, step)
            assert np.allclose(got, ref, atol=1e-6)


class TestProxNegLog:
    def test_stationary_point_at_one(self):
        out = prox_neg_log(np.zeros(3), alpha=1.0, step=1.0)
        assert np.allclose(out, 1.0)

    def test_vanishing_barrier_recovers_input(self):
        out = prox_neg_log(np.array([3.0]), alpha=1e-14, step=1.0)
        assert out[0] == pytest.approx(3.0, abs=1e-6)

    def test_strictly_positive_from_negative_input(self):
        assert np.all(prox_neg_log(np.array([-5.0, -0.1]), 0.5, 0.2) > 0)

    def test_matches_golden_section_oracle(self, rng):
        for _ in range(30):
            u = rng.standard_normal(int(rng.integers(1, 7))) * 3.0
            alpha = float(0.1 + rng.random() * 2.0)
            step = float(0.05 + rng.random())
            got = prox_neg_log(u, alpha, step)
            ref = oracle_prox_neg_log(u, alpha, step)
            assert np.allclose(got, ref, atol=1e-8)


class TestProxTraceGroup:
    def test_identity_when_unregularized(self, rng):
        o = 3
        k = rng.standard_normal(o * o)
        out = prox_trace_group_lasso(k, diag_vec_indices(o), gamma=0.0, step=0.5)
        expect = k.copy()
        expect[diag_vec_indices(o)] -= 1.0  # 2 * step
        assert np.allclose(out, expect)

    def test_full_shrinkage_to_zero(self):
        o = 3
        k = np.full(o * o, 1e-3)
        out = prox_trace_group_lasso(k, diag_vec_indices(o), gamma=100.0, step=0.1)
        assert np.array_equal(out, np.zeros(o * o))

    @pytest.mark.parametrize("mode", ["per_column", "global"])
    def test_matches_conic_oracle(self, rng, mode):
        import oracles

        o = 3
        b = oracles.dense_b(o)
        for _ in range(10):
            k = rng.standard_normal(o * o) * 2.0
            gamma = float(rng.random() * 3.0)
            step = float(0.1 + rng.random())
            got = prox_trace_group_lasso(k, diag_vec_indices(o), gamma, step, mode=mode)
            ref = oracle_prox_trace_group(k, b, gamma, step, o, mode=mode)
            gap = group_prox_objective(got, k, b, gamma, step, o, mode) - group_prox_objective(
                ref, k, b, gamma, step, o, mode
            )
            assert gap <= 1e-6

    def test_subgradient_descent_agrees_coarsely(self, rng):
        # solver-free second route; subgradient descent only reaches ~1e-3
        import oracles

        o = 2
        b = oracles.dense_b(o)
        k = rng.standard_normal(o * o)
        gamma, step = 0.8, 0.5
        got = prox_trace_group_lasso(k, diag_vec_indices(o), gamma, step)
        ref = subgradient_prox_trace_group(k, b, gamma, step, o)
        gap = group_prox_objective(got, k, b, gamma, step, o, "per_column") - group_prox_objective(
            ref, k, b, gamma, step, o, "per_column"
        )
        assert gap <= 1e-3

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError, match="mode"):
            prox_trace_group_lasso(np.zeros(4), diag_vec_indices(2), 1.0, 1.0, mode="rows")


class TestProxSlack:
    def test_shift_and_keep(self):
        out = prox_nonneg_linear(np.array([2.0, 3.0]), step=1.0)
        assert out.tolist() == [1.0, 3.0]

    def test_clamps_to_zero(self):
        out = prox_nonneg_linear(np.array([0.0, -1.0]), step=1.0)
        assert out.tolist() == [0.0, 0.0]

    def test_matches_grid_refine_oracle(self, rng):
        for _ in range(20):
            v = rng.standard_normal(2) * 3.0
            step = float(0.1 + rng.random() * 2.0)
            got = prox_nonneg_linear(v, step)
            ref = oracle_prox_nonneg_linear(v, step)
            assert np.allclose(got, ref, atol=1e-6)


class TestSVT:
    def test_diagonal_case(self):
        out = svt(np.diag([3.0, 1.0]), nu=2.0)
        assert np.allclose(out, np.diag([1.0, 0.0]), atol=1e-12)

    def test_zero_threshold_reproduces_input(self, rng):
        Y = rng.standard_normal((4, 4))
        assert np.allclose(svt(Y, 0.0), Y, atol=1e-10)

    def test_matches_svd_reduction_oracle(self, rng):
        for _ in range(10):
            Y = rng.standard_normal((5, 5))
            nu = float(rng.random() * 1.5)
            assert np.allclose(svt(Y, nu), oracle_svt(Y, nu), atol=1e-6)

    def test_nuclear_norm_never_grows(self, rng):
        Y = rng.standard_normal((6, 6))
        before = np.linalg.svd(Y, compute_uv=False).sum()
        after = np.linalg.svd(svt(Y, 0.4), compute_uv=False).sum()
        assert after <= before + 1e-12

    def test_commutes_with_orthogonal_conjugation(self, rng):
        Y = rng.standard_normal((5, 5))
        Q = np.linalg.qr(rng.standard_normal((5, 5)))[0]
        left = svt(Q @ Y @ Q.T, 0.6)
        right = Q @ svt(Y, 0.6) @ Q.T
        assert np.allclose(left, right, atol=1e-8)

    def test_rejects_negative_threshold(self):
        with pytest.raises(ValueError):
            svt(np.eye(2), -0.1)


class TestFirmNonexpansiveness:
    """Every prox is 1-Lipschitz; checked pairwise on random points."""

    def test_all_operators(self, rng):
        o = 3
        bidx = diag_vec_indices(o)
        z = rng.random(6)
        for _ in range(25):
            a6, b6 = rng.standard_normal(6), rng.standard_normal(6)
            lhs = prox_edge_weights(a6, z, 0.4, 0.3) - prox_edge_weights(b6, z, 0.4, 0.3)
            assert np.linalg.norm(lhs) <= np.linalg.norm(a6 - b6) + 1e-12

            a3, b3 = rng.standard_normal(3), rng.standard_normal(3)
            lhs = prox_neg_log(a3, 0.7, 0.4) - prox_neg_log(b3, 0.7, 0.4)
            assert np.linalg.norm(lhs) <= np.linalg.norm(a3 - b3) + 1e-12

            a9, b9 = rng.standard_normal(9), rng.standard_normal(9)
            for mode in ("per_column", "global"):
                lhs = prox_trace_group_lasso(a9, bidx, 0.8, 0.5, mode) - prox_trace_group_lasso(
                    b9, bidx, 0.8, 0.5, mode
                )
                assert np.linalg.norm(lhs) <= np.linalg.norm(a9 - b9) + 1e-12

            a2, b2 = rng.standard_normal(2), rng.standard_normal(2)
            lhs = prox_nonneg_linear(a2, 0.6) - prox_nonneg_linear(b2, 0.6)
            assert np.linalg.norm(lhs) <= np.linalg.norm(a2 - b2) + 1e-12

            A, Bm = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
            lhs = svt(A, 0.5) - svt(Bm, 0.5)
            assert np.linalg.norm(lhs) <= np.linalg.norm(A - Bm) + 1e-10

    def test_feasibility_of_outputs(self, rng):
        z = rng.random(4)
        assert np.all(prox_edge_weights(rng.standard_normal(4), z, 0.2, 0.5) >= 0)
        assert np.all(prox_neg_log(rng.standard_normal(5) * 10, 0.3, 0.2) > 0)
        assert np.all(prox_nonneg_linear(rng.standard_normal(2) * 5, 0.9) >= 0)
