import csv
import json
import math

import numpy as np
import pytest

from mixedadc.experiments import (CurveSpec, FigureSpec, evaluate_curve,
                                  optimize_power_split, run_figure,
                                  split_config)
from mixedadc.sysmodel import make_config


def _read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


class TestRunFigure:
    def test_unknown_figure_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="unknown figure id"):
            FigureSpec(figure="F99_NOPE", outdir=tmp_path)

    def test_est_error_schema_and_sidecar(self, tmp_path):
        spec = FigureSpec(figure="F4_EST_ERROR", outdir=tmp_path,
                          snr_db=(0.0, 60.0), power_opt=False)
        csv_path, meta_path = run_figure(spec)
        rows = _read_csv(csv_path)
        assert {r["curve"] for r in rows} >= {"one_bit", "joint_N20", "full_res_rr_N20"}
        assert all(r["figure"] == "F4_EST_ERROR" for r in rows)
        assert all(r["stderr"] == "" for r in rows)  # closed forms only
        meta = json.loads(meta_path.read_text())
        assert meta["seed"] == 1
        assert meta["defaults"]["M"] == 100

    def test_est_error_floor_at_high_snr(self, tmp_path):
        spec = FigureSpec(figure="F4_EST_ERROR", outdir=tmp_path, snr_db=(60.0,))
        rows = _read_csv(run_figure(spec)[0])
        one_bit = [float(r["y_value"]) for r in rows if r["curve"] == "one_bit"]
        assert one_bit[0] == pytest.approx(1 - 2 / math.pi, abs=1e-3)

    def test_weights_figure_high_snr(self, tmp_path):
        spec = FigureSpec(figure="F5_WEIGHTS", outdir=tmp_path, snr_db=(80.0,),
                          N_list=(20,))
        rows = _read_csv(run_figure(spec)[0])
        w_inf = [float(r["y_value"]) for r in rows if r["curve"] == "w_inf_N20"]
        w_one = [float(r["y_value"]) for r in rows if r["curve"] == "w_one_N20"]
        assert w_inf[0] >= 0.999
        assert w_one[0] <= 1e-3

    def test_monte_carlo_rows_carry_stderr(self, tmp_path):
        spec = FigureSpec(figure="F7_ZF_AS", outdir=tmp_path, snr_db=(0.0,),
                          trials=150, power_opt=False)
        rows = _read_csv(run_figure(spec)[0])
        assert rows and all(r["stderr"] != "" for r in rows)
        assert all(float(r["stderr"]) >= 0 for r in rows)

    def test_repeated_runs_identical(self, tmp_path):
        spec = FigureSpec(figure="F8_MRC_SNR", outdir=tmp_path / "a",
                          snr_db=(0.0, 10.0), T_list=(400,), N_list=(20,),
                          trials=150)
        path_a, meta_a = run_figure(spec)
        spec_b = FigureSpec(figure="F8_MRC_SNR", outdir=tmp_path / "b",
                            snr_db=(0.0, 10.0), T_list=(400,), N_list=(20,),
                            trials=150)
        path_b, meta_b = run_figure(spec_b)
        assert path_a.read_bytes() == path_b.read_bytes()
        assert meta_a.read_bytes() == meta_b.read_bytes()

    def test_comparator_figure_layouts(self, tmp_path):
        spec = FigureSpec(figure="F12_MRC_COMP", outdir=tmp_path, snr_db=(0.0,),
                          T_list=(1000,), power_opt=False)
        rows = _read_csv(run_figure(spec)[0])
        curves = {r["curve"] for r in rows}
        assert {"joint_as_T1000", "non_rr_5bit_T1000", "one_bit_M180_T1000",
                "uniform_b2_M90_T1000", "uniform_b3_M60_T1000"} == curves


class TestPowerOptimization:
    def test_equal_split_is_feasible_point(self):
        cfg = make_config(M=100, N=20, K=10, T=400, snr_db=0.0)
        eta_eff = 50
        equal = split_config(cfg, eta_eff / cfg.T, eta_eff)
        assert equal.p_t == pytest.approx(cfg.p)
        assert equal.p_d == pytest.approx(cfg.p)

    def test_constraint_holds_at_optimum(self):
        cfg = make_config(M=100, N=20, K=10, T=400, snr_db=0.0)
        curve = CurveSpec(name="joint", est="joint", selection="bound")
        p_t, p_d, eta_eff, _ = optimize_power_split(cfg, curve)
        energy = eta_eff * p_t + (cfg.T - eta_eff) * p_d
        assert energy == pytest.approx(cfg.p * cfg.T, rel=1e-9)

    @pytest.mark.parametrize("est,selection", [("joint", "bound"),
                                               ("one_bit", "none"),
                                               ("non_rr", "none")])
    def test_optimum_dominates_equal_split(self, est, selection):
        for snr in (-10.0, 0.0, 10.0):
            cfg = make_config(M=100, N=20, K=10, T=400, snr_db=snr)
            curve = CurveSpec(name=est, est=est, selection=selection)
            _, _, eta_eff, best = optimize_power_split(cfg, curve)
            equal = evaluate_curve(split_config(cfg, eta_eff / cfg.T, eta_eff),
                                   curve).sum_se
            assert best >= equal - 1e-9

    def test_matches_grid_search_oracle(self):
        """Golden section agrees with a dense grid search (MRC closed form)."""
        cfg = make_config(M=100, N=20, K=10, T=400, snr_db=0.0)
        curve = CurveSpec(name="joint", est="joint", selection="none")
        _, _, eta_eff, best = optimize_power_split(cfg, curve)
        grid = np.linspace(1e-6, 1 - 1e-6, 10 ** 4)
        grid_best = max(evaluate_curve(split_config(cfg, f, eta_eff), curve).sum_se
                        for f in grid)
        assert best == pytest.approx(grid_best, rel=1e-4)

    def test_training_longer_than_block_rejected(self):
        cfg = make_config(M=100, N=10, K=10, T=100, eta=10, snr_db=0.0)
        with pytest.raises(ValueError):
            optimize_power_split(cfg, CurveSpec(name="joint", est="joint"))
