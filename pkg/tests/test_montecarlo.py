import numpy as np
import pytest

from mixedadc.montecarlo import TrialFailure, TrialPlan, run_trials, trial_rng


class TestDeterminism:
    def test_constant_kernel_zero_variance(self):
        agg = run_trials(TrialPlan(seed=0, trials=64),
                         lambda t, rng: np.array([2.5]))
        assert agg.mean[0] == 2.5
        assert agg.var[0] == 0.0
        assert agg.stderr[0] == 0.0

    def test_serial_equals_parallel_bitwise(self):
        kernel = lambda t, rng: rng.standard_normal(3)
        serial = run_trials(TrialPlan(seed=123, trials=501, workers=1), kernel)
        parallel = run_trials(TrialPlan(seed=123, trials=501, workers=8), kernel)
        np.testing.assert_array_equal(serial.mean, parallel.mean)
        np.testing.assert_array_equal(serial.var, parallel.var)

    def test_same_seed_same_bits(self):
        kernel = lambda t, rng: rng.standard_normal(2)
        a = run_trials(TrialPlan(seed=9, trials=100), kernel)
        b = run_trials(TrialPlan(seed=9, trials=100), kernel)
        np.testing.assert_array_equal(a.mean, b.mean)

    def test_streams_differ_across_trials(self):
        x = trial_rng(5, 0).standard_normal(4)
        y = trial_rng(5, 1).standard_normal(4)
        assert not np.allclose(x, y)


class TestStatistics:
    def test_gaussian_mean_clt_band(self):
        agg = run_trials(TrialPlan(seed=77, trials=10 ** 6),
                         lambda t, rng: np.array([rng.standard_normal()]))
        assert abs(agg.mean[0]) < 0.004
        assert agg.var[0] == pytest.approx(1.0, rel=0.01)

    def test_stderr_definition(self):
        vals = np.arange(10.0)
        agg = run_trials(TrialPlan(seed=0, trials=10),
                         lambda t, rng: np.array([vals[t]]))
        assert agg.mean[0] == pytest.approx(4.5)
        assert agg.var[0] == pytest.approx(np.var(vals, ddof=1))
        assert agg.stderr[0] == pytest.approx(np.sqrt(np.var(vals, ddof=1) / 10))


class TestFailures:
    def test_kernel_failure_reports_trial_index(self):
        def kernel(t, rng):
            if t == 37:
                raise RuntimeError("boom")
            return np.array([0.0])

        with pytest.raises(TrialFailure) as err:
            run_trials(TrialPlan(seed=0, trials=100), kernel)
        assert err.value.trial_index == 37

    def test_bad_record_shape(self):
        with pytest.raises(TrialFailure):
            run_trials(TrialPlan(seed=0, trials=4),
                       lambda t, rng: np.zeros((2, 2)))

    def test_plan_validation(self):
        with pytest.raises(ValueError):
            TrialPlan(seed=0, trials=0)
        with pytest.raises(ValueError):
            TrialPlan(seed=0, trials=10, workers=0)
