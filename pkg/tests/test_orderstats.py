import math

import numpy as np
import pytest

from mixedadc.orderstats import (OrderStatSpec, chi_m, chi_prefix_sum,
                                 gamma_cdf, order_stat_mc_oracle,
                                 order_stat_mean)


class TestGammaCdf:
    def test_zero(self):
        assert gamma_cdf(0.0, 3) == 0.0

    def test_exponential_special_case(self):
        for x in (0.1, 1.0, 4.0):
            assert gamma_cdf(x, 1, scale=2.0) == pytest.approx(1 - math.exp(-x / 2))

    def test_erlang_two(self):
        assert gamma_cdf(2.0, 2) == pytest.approx(1 - 3 * math.exp(-2), abs=1e-12)

    def test_monotone_to_one(self):
        xs = np.linspace(0, 60, 200)
        F = gamma_cdf(xs, 5, scale=1.5)
        assert np.all(np.diff(F) >= 0)
        assert F[-1] > 1 - 1e-6

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            gamma_cdf(-0.1, 2)


class TestOrderStatMean:
    def test_single_sample_is_unordered_mean(self):
        assert order_stat_mean(OrderStatSpec(1, 1, 3, 2.0)) == pytest.approx(6.0, rel=1e-10)

    @pytest.mark.parametrize("M", [2, 5, 8])
    def test_exponential_harmonic_identity(self, M):
        for m in range(1, M + 1):
            expected = sum(1.0 / i for i in range(M - m + 1, M + 1))
            got = order_stat_mean(OrderStatSpec(m, M, 1))
            assert got == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("M,K", [(8, 2), (32, 4), (100, 10)])
    def test_conservation(self, M, K):
        total = sum(order_stat_mean(OrderStatSpec(m, M, K)) for m in range(1, M + 1))
        assert total == pytest.approx(M * K, rel=1e-8)

    def test_strictly_increasing_in_rank(self):
        vals = [order_stat_mean(OrderStatSpec(m, 10, 3)) for m in range(1, 11)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_scale_linearity(self):
        base = order_stat_mean(OrderStatSpec(4, 10, 3))
        assert order_stat_mean(OrderStatSpec(4, 10, 3, 2.5)) == pytest.approx(2.5 * base,
                                                                              rel=1e-12)

    def test_invalid_specs(self):
        with pytest.raises(ValueError):
            OrderStatSpec(0, 5, 2)
        with pytest.raises(ValueError):
            OrderStatSpec(6, 5, 2)
        with pytest.raises(ValueError):
            OrderStatSpec(1, 5, 2, scale=0.0)


class TestChi:
    def test_two_antenna_exponential(self):
        assert chi_m(1, 2, 1) == pytest.approx(0.5, abs=1e-10)
        assert chi_m(2, 2, 1) == pytest.approx(1.5, abs=1e-10)

    @pytest.mark.parametrize("M,K", [(8, 2), (32, 4)])
    def test_sum_equals_population_mean(self, M, K):
        assert chi_prefix_sum(M, M, K) == pytest.approx(M * K, rel=1e-8)

    def test_prefix_bounds(self):
        with pytest.raises(ValueError):
            chi_prefix_sum(9, 8, 2)
        assert chi_prefix_sum(0, 8, 2) == 0.0

    def test_smallest_orders_below_average(self):
        # the M - N smallest order statistics average below K
        M, N, K = 32, 8, 4
        assert chi_prefix_sum(M - N, M, K) < (M - N) * K


class TestMcOracle:
    def test_unordered_mean(self):
        rng = np.random.default_rng(0)
        est, se = order_stat_mc_oracle(OrderStatSpec(1, 1, 3, 2.0), 10 ** 6, rng)
        assert abs(est - 6.0) < 3 * se

    def test_matches_quadrature_random_specs(self):
        rng = np.random.default_rng(42)
        spec_rng = np.random.default_rng(7)
        for _ in range(20):
            M = int(spec_rng.integers(2, 12))
            m = int(spec_rng.integers(1, M + 1))
            K = int(spec_rng.integers(1, 6))
            scale = float(spec_rng.uniform(0.2, 3.0))
            spec = OrderStatSpec(m, M, K, scale)
            est, se = order_stat_mc_oracle(spec, 10 ** 5, rng)
            assert abs(est - order_stat_mean(spec)) < 3 * max(se, 1e-12)

    @pytest.mark.parametrize("M", [2, 8, 32])
    @pytest.mark.parametrize("K", [1, 2, 10])
    def test_quadrature_vs_mc_sweep(self, M, K):
        rng = np.random.default_rng(M * 100 + K)
        for m in (1, (M + 1) // 2, M):
            spec = OrderStatSpec(m, M, K)
            est, se = order_stat_mc_oracle(spec, 10 ** 5, rng)
            assert abs(est - order_stat_mean(spec)) < 3 * se

    def test_deterministic_given_seed(self):
        spec = OrderStatSpec(3, 8, 2)
        a = order_stat_mc_oracle(spec, 10 ** 4, np.random.default_rng(3))
        b = order_stat_mc_oracle(spec, 10 ** 4, np.random.default_rng(3))
        assert a == b

    def test_minimum_trials_enforced(self):
        with pytest.raises(ValueError):
            order_stat_mc_oracle(OrderStatSpec(1, 2, 1), 100, np.random.default_rng(0))
