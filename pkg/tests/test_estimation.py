import math

import numpy as np
import pytest

from mixedadc.estimation import (Scheme, estimate_fullres_rr, estimate_joint,
                                 estimate_onebit, joint_weights,
                                 simulate_round_robin, simulate_training)
from mixedadc.sysmodel import draw_channel, generate_pilots, make_config
from util import empirical_mse


def _setup(M=8, N=4, K=2, snr_db=0.0, T=4000):
    cfg = make_config(M=M, N=N, K=K, T=T, snr_db=snr_db)
    return cfg, generate_pilots(cfg.eta, cfg.K)


class TestRoundRobinProtocol:
    def test_degenerate_single_subinterval(self):
        cfg, pilots = _setup(M=4, N=4)
        ch = draw_channel(cfg, np.random.default_rng(0))
        obs = simulate_round_robin(ch, cfg, pilots, np.random.default_rng(1))
        assert obs.Ybank == ()
        assert obs.X.shape == (4, 2)

    def test_two_subintervals_structure(self):
        cfg, pilots = _setup(M=4, N=2)
        ch = draw_channel(cfg, np.random.default_rng(0))
        rng = np.random.default_rng(1)
        obs = simulate_round_robin(ch, cfg, pilots, rng)
        assert len(obs.Ybank) == 1
        # every antenna appears once in X and once in Y_1, both nonzero
        assert np.all(np.abs(obs.X) > 0)
        np.testing.assert_allclose(np.abs(obs.Ybank[0]), 1.0, atol=1e-12)

    def test_x_rows_follow_subinterval_noise(self):
        # rows {0,1} of X use sub-interval-1 noise, rows {2,3} sub-interval 2
        cfg, pilots = _setup(M=4, N=2)
        ch = draw_channel(cfg, np.random.default_rng(5))
        obs1 = simulate_round_robin(ch, cfg, pilots, np.random.default_rng(9))
        obs2 = simulate_round_robin(ch, cfg, pilots, np.random.default_rng(9))
        np.testing.assert_array_equal(obs1.X, obs2.X)
        np.testing.assert_array_equal(obs1.Ybank[0], obs2.Ybank[0])

    def test_full_res_scheme_has_no_bank(self):
        cfg, pilots = _setup(M=4, N=2)
        ch = draw_channel(cfg, np.random.default_rng(0))
        obs = simulate_round_robin(ch, cfg, pilots, np.random.default_rng(1),
                                   scheme=Scheme.FULL_RES_RR)
        assert obs.Ybank == ()

    def test_bank_count(self):
        cfg, pilots = _setup(M=20, N=4)
        ch = draw_channel(cfg, np.random.default_rng(0))
        obs = simulate_round_robin(ch, cfg, pilots, np.random.default_rng(1))
        assert len(obs.Ybank) == 4
        for Y in obs.Ybank:
            np.testing.assert_allclose(np.abs(Y), 1.0, atol=1e-12)

    def test_requires_highres_adcs(self):
        cfg = make_config(M=4, N=0, K=2, T=100)
        ch = draw_channel(cfg, np.random.default_rng(0))
        with pytest.raises(ValueError):
            simulate_round_robin(ch, cfg, generate_pilots(2, 2),
                                 np.random.default_rng(1))


class TestOneBitEstimator:
    def test_corollary_power_control_variance(self):
        cfg, pilots = _setup(M=8, N=4, K=2, snr_db=3.0)
        res = estimate_onebit(None, cfg, pilots)
        Kp = cfg.K * cfg.p
        expected_est = (2 / math.pi) / (1 + cfg.sigma_n2 / Kp)
        np.testing.assert_allclose(res.sigma_hhat2, expected_est, rtol=1e-12)
        expected_err = (Kp / cfg.sigma_n2 * (1 - 2 / math.pi) + 1) / (1 + Kp / cfg.sigma_n2)
        np.testing.assert_allclose(res.var_err / cfg.beta, expected_err, rtol=1e-12)

    def test_high_snr_error_floor(self):
        cfg, pilots = _setup(snr_db=60.0)
        res = estimate_onebit(None, cfg, pilots)
        assert np.allclose(res.var_err / cfg.beta, 1 - 2 / math.pi, atol=1e-3)

    def test_eta_eff_is_single_block(self):
        cfg, pilots = _setup()
        assert estimate_onebit(None, cfg, pilots).eta_eff == cfg.eta

    def test_rejects_unquantized_input(self):
        cfg, pilots = _setup()
        bad = np.full((cfg.M, cfg.eta), 0.5 + 0.5j)
        with pytest.raises(ValueError):
            estimate_onebit(bad, cfg, pilots)


class TestFullResEstimator:
    def test_noiseless_limit(self):
        cfg, pilots = _setup(snr_db=120.0)
        ch = draw_channel(cfg, np.random.default_rng(0))
        obs = simulate_round_robin(ch, cfg, pilots, np.random.default_rng(1),
                                   scheme=Scheme.FULL_RES_RR)
        res = estimate_fullres_rr(obs, cfg, pilots)
        assert np.abs(res.ghat - ch.g).max() < 1e-4
        assert np.all(res.var_err < 1e-10)

    def test_half_power_point(self):
        # eta p_k beta_k = sigma_n2 -> var_est = beta/2
        cfg = make_config(M=4, N=2, K=2, T=100, snr_db=10 * math.log10(0.5))
        res = estimate_fullres_rr(None, cfg, generate_pilots(2, 2))
        np.testing.assert_allclose(res.var_est, 0.5 * cfg.beta, rtol=1e-12)

    def test_eta_eff_counts_repetitions(self):
        cfg, pilots = _setup(M=8, N=2, K=2)
        assert estimate_fullres_rr(None, cfg, pilots).eta_eff == 4 * cfg.eta


class TestJointWeights:
    def test_degenerate_full_resolution(self):
        cfg, pilots = _setup(M=4, N=4)
        w = joint_weights(cfg, pilots)
        np.testing.assert_array_equal(w.varsigma, 0.0)
        np.testing.assert_array_equal(w.w_one, 0.0)
        res_joint = estimate_joint(None, cfg, pilots)
        res_full = estimate_fullres_rr(None, cfg, pilots)
        np.testing.assert_allclose(res_joint.var_err, res_full.var_err, rtol=1e-12)

    def test_high_snr_asymptotics(self):
        cfg, pilots = _setup(M=20, N=4, K=4, snr_db=80.0, T=40000)
        for mode in ("exact", "noiseless"):
            w = joint_weights(cfg, pilots, rho_mode=mode)
            assert np.allclose(w.varsigma, 1 / (math.pi / 2 - 1), atol=1e-3)
            assert np.all(w.w_inf >= 0.999)
            assert np.all(w.w_one <= 1e-3)

    def test_noiseless_mode_reduces_to_simplified_form(self):
        for snr in (-10.0, 0.0, 10.0):
            cfg, pilots = _setup(M=20, N=4, K=4, snr_db=snr, T=40000)
            w = joint_weights(cfg, pilots, rho_mode="noiseless")
            L = cfg.M / cfg.N
            Kp = cfg.K * cfg.p
            expected = (L - 1) / ((math.pi / 2) * cfg.sigma_n2 / Kp
                                  + (math.pi / 2 - 1) * (L - 1))
            np.testing.assert_allclose(w.varsigma, expected, rtol=1e-8)

    @pytest.mark.parametrize("mode", ["exact", "noiseless"])
    @pytest.mark.parametrize("M,N", [(8, 4), (20, 4), (20, 2)])
    def test_matches_brute_force_block_lmmse(self, M, N, mode):
        """Closed-form weights equal the direct block-covariance inverse."""
        cfg, pilots = _setup(M=M, N=N, K=4, T=40000)
        w = joint_weights(cfg, pilots, rho_mode=mode)
        res = estimate_joint(None, cfg, pilots, rho_mode=mode)
        L = M // N
        for k in range(cfg.K):
            s0 = cfg.sigma_n2 / (cfg.eta * cfg.train_powers[k])
            Cu = np.zeros((L, L))
            Cu[0, 0] = s0
            Cu[1:, 1:] = ((w.sigma_w2[k] - w.rho[k]) * np.eye(L - 1) + w.rho[k])
            ones = np.ones(L)
            Cinv = np.linalg.inv(Cu)
            den = 1 / cfg.beta[k] + ones @ Cinv @ ones
            coeffs = (Cinv @ ones) / den
            assert abs(coeffs[0] - w.w_inf[k]) < 1e-10
            np.testing.assert_allclose(coeffs[1:], w.w_one[k], atol=1e-10)
            assert abs(1 / den - res.var_err[k]) < 1e-10

    def test_aqnm_mode_is_overly_optimistic(self):
        cfg, pilots = _setup(M=20, N=4, K=4)
        exact = joint_weights(cfg, pilots, rho_mode="exact")
        aqnm = joint_weights(cfg, pilots, rho_mode="aqnm")
        assert np.all(aqnm.rho == 0)
        assert np.all(aqnm.varsigma > exact.varsigma)
        np.testing.assert_allclose(aqnm.varsigma,
                                   (cfg.M / cfg.N - 1) / exact.sigma_w2, rtol=1e-12)


class TestJointEstimator:
    def test_error_below_full_resolution_only(self):
        cfg = make_config(M=50, N=10, K=10, T=4000)
        pilots = generate_pilots(10, 10)
        joint = estimate_joint(None, cfg, pilots)
        full = estimate_fullres_rr(None, cfg, pilots)
        assert np.all(joint.var_err < full.var_err)

    def test_scheme_mismatch_rejected(self):
        cfg, pilots = _setup(M=4, N=2)
        ch = draw_channel(cfg, np.random.default_rng(0))
        obs = simulate_round_robin(ch, cfg, pilots, np.random.default_rng(1),
                                   scheme=Scheme.FULL_RES_RR)
        with pytest.raises(ValueError):
            estimate_joint(obs, cfg, pilots)

    @pytest.mark.parametrize("scheme", [Scheme.ONE_BIT_ONLY, Scheme.FULL_RES_RR,
                                        Scheme.JOINT_RR])
    def test_empirical_mse_matches_closed_form(self, scheme):
        emp, closed = empirical_mse(scheme, M=8, N=4, K=2, snr_db=0.0,
                                    draws=20000, seed=2)
        assert abs(emp - closed) / closed < 0.02


class TestInvariants:
    @pytest.mark.parametrize("snr_db", [-20.0, -10.0, 0.0, 10.0, 20.0])
    @pytest.mark.parametrize("M,N", [(4, 4), (8, 4), (20, 4), (40, 4)])
    def test_orthogonality_decomposition(self, snr_db, M, N):
        """var_est + var_err = beta for every estimator."""
        cfg = make_config(M=M, N=N, K=4, T=40000, snr_db=snr_db,
                          beta=np.array([0.5, 1.0, 2.0, 4.0]))
        pilots = generate_pilots(4, 4)
        for res in (estimate_onebit(None, cfg, pilots),
                    estimate_fullres_rr(None, cfg, pilots),
                    estimate_joint(None, cfg, pilots),
                    estimate_joint(None, cfg, pilots, rho_mode="noiseless")):
            np.testing.assert_allclose(res.var_est + res.var_err, cfg.beta,
                                       atol=1e-10)
            assert np.all(res.sigma_hhat2 > 0) and np.all(res.sigma_hhat2 < 1)

    def test_error_monotone_in_power(self):
        errs = {"one_bit": [], "full": [], "joint": []}
        for snr in np.arange(-20, 21, 2.5):
            cfg, pilots = _setup(M=20, N=4, K=4, snr_db=snr, T=40000)
            errs["one_bit"].append(estimate_onebit(None, cfg, pilots).var_err[0])
            errs["full"].append(estimate_fullres_rr(None, cfg, pilots).var_err[0])
            errs["joint"].append(estimate_joint(None, cfg, pilots).var_err[0])
        for seq in errs.values():
            assert all(a >= b - 1e-12 for a, b in zip(seq, seq[1:]))

    def test_exact_rho_below_saturated(self):
        cfg, pilots = _setup(M=20, N=4, K=4, snr_db=0.0, T=40000)
        exact = joint_weights(cfg, pilots, rho_mode="exact")
        saturated = joint_weights(cfg, pilots, rho_mode="noiseless")
        assert np.all(exact.rho < saturated.rho)
        assert np.all(exact.rho > 0)
