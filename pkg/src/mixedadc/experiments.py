"""Figure-reproduction scenario runner and training/data power optimization.

Each figure id maps to a builder that sweeps a parameter grid and emits CSV
rows ``figure, curve, x_name, x_value, y_value, stderr`` (stderr empty for
closed forms) plus a JSON sidecar with the fully resolved configuration, so
every run is reproducible from its sidecar alone.

Defaults mirror the reference system: M = 100 antennas, K = 10 users, noise
power 1, minimum-length orthogonal pilots (eta = K), and an optimized
training/data power split under the energy constraint
``eta_eff p_t + (T - eta_eff) p_d = P_ave T``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__ as _version
from .estimation import (Scheme, estimate_fullres_rr, estimate_joint,
                         estimate_onebit, joint_weights)
from .spectral_efficiency import (SeReport, csi_model, data_phase_model,
                                  se_mrc_heterogeneous, se_mrc_mixed,
                                  se_mrc_selection, se_uniform_mrc,
                                  se_uniform_zf, sqinr_empirical,
                                  fixed_highres_set)
from .sysmodel import SystemConfig, generate_pilots, make_config

__all__ = [
    "FIGURE_IDS",
    "FigureSpec",
    "CurveSpec",
    "evaluate_curve",
    "run_figure",
    "optimize_power_split",
]

FIGURE_IDS = (
    "F4_EST_ERROR", "F5_WEIGHTS", "F6_MRC_AS", "F7_ZF_AS", "F8_MRC_SNR",
    "F9_ZF_SNR", "F10_MRC_T", "F11_ZF_T", "F12_MRC_COMP", "F13_ZF_COMP",
    "F14_MRC_N", "F15_ZF_N",
)

CSV_COLUMNS = ("figure", "curve", "x_name", "x_value", "y_value", "stderr")

# paper-style system defaults
DEFAULT_M = 100
DEFAULT_K = 10
COMPARATOR_HIGHRES_BITS = 5          # "high-resolution" ADC resolution in the
COMPARATOR_BUDGET = 180              # fixed-comparator comparison


@dataclass(frozen=True)
class FigureSpec:
    """One figure-reproduction request."""

    figure: str
    snr_db: tuple[float, ...] | None = None
    T_list: tuple[int, ...] | None = None
    N_list: tuple[int, ...] | None = None
    trials: int = 500
    seed: int = 1
    outdir: Path = Path(".")
    power_opt: bool = True
    exact_cqd: bool = False
    workers: int = 1
    overrides: dict = field(default_factory=dict)   # M, K, sigma_n2

    def __post_init__(self):
        if self.figure not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure!r}; "
                             f"known ids: {', '.join(FIGURE_IDS)}")
        if self.snr_db is not None and len(self.snr_db) == 0:
            raise ValueError("SNR grid must be non-empty")


@dataclass(frozen=True)
class CurveSpec:
    """How to evaluate one curve: estimation scheme, detector, selection."""

    name: str
    est: str                    # one_bit | full_res_rr | joint | non_rr | uniform | perfect
    detector: str = "mrc"       # mrc | zf
    selection: str = "none"     # none | global | subarray | bound
    rho_mode: str = "noiseless"
    bits: int | None = None          # uniform-resolution curves
    highres_bits: int | None = None  # AQNM resolution of fixed high-res rows
    n_highres: int | None = None     # data-phase high-resolution count override
    trials: int = 500
    seed: int = 0
    exact_cqd: bool = False
    workers: int = 1


_EST_TO_SCHEME = {
    "one_bit": Scheme.ONE_BIT_ONLY,
    "full_res_rr": Scheme.FULL_RES_RR,
    "joint": Scheme.JOINT_RR,
}


def evaluate_curve(config: SystemConfig, curve: CurveSpec) -> SeReport:
    """Spectral efficiency of one scheme/detector/selection combination."""
    if curve.est == "uniform":
        if curve.bits is None:
            raise ValueError("uniform curves need a bit resolution")
        if curve.detector == "mrc":
            return se_uniform_mrc(config, curve.bits)
        return se_uniform_zf(config, curve.bits, trials=curve.trials,
                             seed=curve.seed, workers=curve.workers)

    scheme = _EST_TO_SCHEME.get(curve.est, curve.est)  # non_rr / perfect pass through
    csi = csi_model(config, scheme, rho_mode=curve.rho_mode,
                    highres_bits=curve.highres_bits)
    n_highres = curve.n_highres
    if n_highres is None:
        n_highres = 0 if curve.est == "one_bit" else config.N

    if curve.detector == "mrc" and curve.selection in ("none", "bound"):
        if curve.est == "non_rr":
            model = data_phase_model(config, fixed_highres_set(config, n_highres),
                                     curve.highres_bits)
            return se_mrc_heterogeneous(config, csi.sigma_hhat2_rows,
                                        model.quant_eff, csi.eta_eff)
        s2 = float(np.mean(csi.sigma_hhat2_rows))
        if curve.selection == "bound":
            return se_mrc_selection(config, s2, csi.eta_eff, n_highres=n_highres)
        return se_mrc_mixed(config, s2, csi.eta_eff, n_highres=n_highres)

    selection = "none" if curve.selection == "bound" else curve.selection
    return sqinr_empirical(config, csi if curve.est == "non_rr" else scheme,
                           detector=curve.detector, selection=selection,
                           trials=curve.trials, seed=curve.seed,
                           rho_mode=curve.rho_mode, n_highres=n_highres,
                           highres_bits=curve.highres_bits,
                           exact_cqd=curve.exact_cqd, workers=curve.workers)


# ---------------------------------------------------------------------------
# power-split optimization
# ---------------------------------------------------------------------------

def _eta_eff_for(config: SystemConfig, est: str) -> int:
    if est in ("joint", "full_res_rr"):
        return config.n_subintervals * config.eta
    return config.eta


def split_config(config: SystemConfig, f: float, eta_eff: int) -> SystemConfig:
    """Config with training fraction ``f`` of the block energy ``P_ave T``."""
    energy = config.p * config.T
    p_t = f * energy / eta_eff
    p_d = (1.0 - f) * energy / (config.T - eta_eff)
    return config.with_powers(p_t=p_t, p_d=p_d)


def _golden_max(fun, lo: float, hi: float, rel_tol: float = 1e-6) -> tuple[float, float]:
    """Golden-section maximization of ``fun`` on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while (b - a) > rel_tol * max(abs(a), abs(b), 1e-12):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    if fc >= fd:
        return c, fc
    return d, fd


def optimize_power_split(config: SystemConfig, curve: CurveSpec,
                         rel_tol: float = 1e-6,
                         opt_trials: int | None = None) -> tuple[float, float, int, float]:
    """Maximize a scheme's sum SE over the training/data power split.

    The split is parameterized by the training energy fraction
    ``f = eta_eff p_t / (P_ave T)``; golden-section search at relative
    tolerance ``rel_tol``.  Monte Carlo objectives reuse a common seed across
    evaluations so the objective is a smooth deterministic function of f.

    Returns ``(p_t, p_d, eta_eff, sum_se)`` at the optimum.
    """
    eta_eff = _eta_eff_for(config, curve.est)
    if eta_eff >= config.T:
        raise ValueError("training consumes the whole coherence interval")
    search_curve = curve if opt_trials is None else replace(curve, trials=opt_trials)

    def objective(f: float) -> float:
        return evaluate_curve(split_config(config, f, eta_eff), search_curve).sum_se

    f_star, _ = _golden_max(objective, 1e-6, 1.0 - 1e-6, rel_tol)
    best = split_config(config, f_star, eta_eff)
    return best.p_t, best.p_d, eta_eff, evaluate_curve(best, curve).sum_se


# ---------------------------------------------------------------------------
# figure builders
# ---------------------------------------------------------------------------

def _base_config(spec: FigureSpec, *, M=None, N=1, K=None, T=1000, snr_db=0.0,
                 eta=None) -> SystemConfig:
    M = M if M is not None else spec.overrides.get("M", DEFAULT_M)
    K = K if K is not None else spec.overrides.get("K", DEFAULT_K)
    sigma_n2 = spec.overrides.get("sigma_n2", 1.0)
    return make_config(M=M, N=N, K=K, T=T, eta=eta, snr_db=snr_db,
                       sigma_n2=sigma_n2)


def _snr_grid(spec: FigureSpec, default: tuple[float, ...]) -> tuple[float, ...]:
    return tuple(spec.snr_db) if spec.snr_db is not None else default


def _mc_kwargs(spec: FigureSpec, seed_offset: int) -> dict:
    return dict(trials=spec.trials, seed=spec.seed + seed_offset,
                exact_cqd=spec.exact_cqd, workers=spec.workers)


def _se_point(spec: FigureSpec, config: SystemConfig, curve: CurveSpec):
    """Sum SE (optimized split when requested) and its stderr for one point."""
    if spec.power_opt:
        opt_trials = min(curve.trials, 200) if _is_mc(curve) else None
        p_t, p_d, eta_eff, _ = optimize_power_split(config, curve,
                                                    opt_trials=opt_trials)
        config = config.with_powers(p_t=p_t, p_d=p_d)
    report = evaluate_curve(config, curve)
    return report.sum_se, report.stderr_sum_se


def _is_mc(curve: CurveSpec) -> bool:
    if curve.detector == "zf":
        return True
    return curve.selection in ("global", "subarray")


def _fig_est_error(spec: FigureSpec):
    """Estimation error floor figure: sigma_eps^2 / beta vs training p/sigma^2.

    Pure estimation comparison at a common per-symbol training power (no
    power-split optimization); the duration-matched one-bit curve uses
    eta = (M/N) K pilots, equal to the round-robin training length.
    """
    snrs = _snr_grid(spec, tuple(np.arange(-20.0, 61.0, 5.0)))
    N_list = spec.N_list or (20, 10)
    rows = []
    conventions = {"x": "training p/sigma_n2 in dB", "power_opt": False,
                   "joint_rho_mode": "noiseless"}

    def err_onebit(snr, eta):
        cfg = _base_config(spec, N=0, T=max(2000, 20 * eta), snr_db=snr, eta=eta)
        res = estimate_onebit(None, cfg, generate_pilots(eta, cfg.K))
        return float(np.mean(res.var_err / cfg.beta))

    def err_scheme(snr, N, scheme, rho_mode):
        cfg = _base_config(spec, N=N, T=20000, snr_db=snr)
        pil = generate_pilots(cfg.eta, cfg.K)
        if scheme == "full_res_rr":
            res = estimate_fullres_rr(None, cfg, pil)
        else:
            res = estimate_joint(None, cfg, pil, rho_mode=rho_mode)
        return float(np.mean(res.var_err / cfg.beta))

    N0 = N_list[0]
    M = spec.overrides.get("M", DEFAULT_M)
    K = spec.overrides.get("K", DEFAULT_K)
    for snr in snrs:
        rows.append(("one_bit", "snr_db", snr, err_onebit(snr, K), None))
        rows.append((f"one_bit_eta{(M // N0) * K}", "snr_db", snr,
                     err_onebit(snr, (M // N0) * K), None))
        for N in N_list:
            rows.append((f"full_res_rr_N{N}", "snr_db", snr,
                         err_scheme(snr, N, "full_res_rr", "noiseless"), None))
            rows.append((f"joint_N{N}", "snr_db", snr,
                         err_scheme(snr, N, "joint", "noiseless"), None))
        rows.append((f"joint_aqnm_N{N0}", "snr_db", snr,
                     err_scheme(snr, N0, "joint", "aqnm"), None))
    return rows, conventions


def _fig_weights(spec: FigureSpec):
    """Joint-estimator combining weights vs SNR."""
    snrs = _snr_grid(spec, tuple(np.arange(-20.0, 41.0, 2.5)))
    N_list = spec.N_list or (20, 10)
    rows = []
    for snr in snrs:
        for N in N_list:
            cfg = _base_config(spec, N=N, T=20000, snr_db=snr)
            w = joint_weights(cfg, generate_pilots(cfg.eta, cfg.K),
                              rho_mode="noiseless")
            rows.append((f"w_inf_N{N}", "snr_db", snr, float(np.mean(w.w_inf)), None))
            rows.append((f"w_one_N{N}", "snr_db", snr, float(np.mean(w.w_one)), None))
    return rows, {"x": "training p/sigma_n2 in dB", "rho_mode": "noiseless",
                  "power_opt": False}


def _as_curves(detector: str, spec: FigureSpec):
    """Antenna-selection comparison curves (joint estimation throughout)."""
    if detector == "mrc":
        sel_joint = [("joint_as", "bound"), ("joint_no_as", "none"),
                     ("joint_subarray_as", "subarray")]
    else:
        sel_joint = [("joint_as", "global"), ("joint_no_as", "none"),
                     ("joint_subarray_as", "subarray")]
    curves = [CurveSpec(name=name, est="joint", detector=detector, selection=sel,
                        trials=spec.trials, workers=spec.workers,
                        exact_cqd=spec.exact_cqd)
              for name, sel in sel_joint]
    curves.append(CurveSpec(name="not_joint_no_as", est="full_res_rr",
                            detector=detector, selection="none",
                            trials=spec.trials, workers=spec.workers,
                            exact_cqd=spec.exact_cqd))
    return curves


def _fig_as(spec: FigureSpec, detector: str):
    snrs = _snr_grid(spec, tuple(np.arange(-20.0, 21.0, 5.0)))
    T = (spec.T_list or (400,))[0]
    N = (spec.N_list or (20,))[0]
    rows = []
    for i, curve in enumerate(_as_curves(detector, spec)):
        curve = replace(curve, seed=spec.seed + 100 * i)
        for snr in snrs:
            cfg = _base_config(spec, N=N, T=T, snr_db=snr)
            y, err = _se_point(spec, cfg, curve)
            rows.append((curve.name, "snr_db", snr, y, err))
    return rows, {"T": T, "N": N, "power_opt": spec.power_opt,
                  "joint_rho_mode": "noiseless"}


def _snr_scheme_curves(detector: str, spec: FigureSpec):
    """Mixed-vs-one-bit scheme comparison: joint+AS, fixed mixed, all one-bit."""
    sel = "bound" if detector == "mrc" else "global"
    return (
        CurveSpec(name="joint_as", est="joint", detector=detector, selection=sel,
                  trials=spec.trials, workers=spec.workers, exact_cqd=spec.exact_cqd),
        CurveSpec(name="non_rr", est="non_rr", detector=detector, selection="none",
                  trials=spec.trials, workers=spec.workers, exact_cqd=spec.exact_cqd),
        CurveSpec(name="one_bit", est="one_bit", detector=detector, selection="none",
                  trials=spec.trials, workers=spec.workers, exact_cqd=spec.exact_cqd),
    )


def _fig_snr(spec: FigureSpec, detector: str):
    snrs = _snr_grid(spec, tuple(np.arange(-20.0, 21.0, 5.0)))
    rows = []
    i = 0
    for T in spec.T_list or (400, 1000):
        for N in spec.N_list or (20, 10):
            for curve in _snr_scheme_curves(detector, spec):
                if curve.est == "one_bit" and N != (spec.N_list or (20, 10))[0]:
                    continue  # one-bit curve does not depend on N
                i += 1
                curve = replace(curve, name=f"{curve.name}_T{T}_N{N}"
                                if curve.est != "one_bit" else f"one_bit_T{T}",
                                seed=spec.seed + 100 * i)
                for snr in snrs:
                    cfg = _base_config(spec, N=N, T=T, snr_db=snr)
                    y, err = _se_point(spec, cfg, curve)
                    rows.append((curve.name, "snr_db", snr, y, err))
    return rows, {"power_opt": spec.power_opt, "joint_rho_mode": "noiseless"}


def _fig_coherence(spec: FigureSpec, detector: str):
    T_grid = spec.T_list or tuple(range(200, 2001, 200))
    snrs = _snr_grid(spec, (-10.0, 0.0, 10.0))
    N = (spec.N_list or (20,))[0]
    rows = []
    i = 0
    for snr in snrs:
        for curve in _snr_scheme_curves(detector, spec):
            i += 1
            curve = replace(curve, name=f"{curve.name}_snr{snr:+g}",
                            seed=spec.seed + 100 * i)
            for T in T_grid:
                cfg = _base_config(spec, N=N, T=T, snr_db=snr)
                y, err = _se_point(spec, cfg, curve)
                rows.append((curve.name, "T", T, y, err))
    return rows, {"N": N, "power_opt": spec.power_opt,
                  "joint_rho_mode": "noiseless"}


def _fig_comparators(spec: FigureSpec, detector: str):
    """Fixed comparator budget: mixed (N 5-bit + one-bit) vs uniform arrays."""
    snrs = _snr_grid(spec, tuple(np.arange(-20.0, 21.0, 5.0)))
    K = spec.overrides.get("K", DEFAULT_K)
    bits5 = COMPARATOR_HIGHRES_BITS
    mixed_M, mixed_N = DEFAULT_M, 20
    budget = COMPARATOR_BUDGET
    rows = []
    i = 0
    sel = "bound" if detector == "mrc" else "global"
    for T in spec.T_list or (400, 1000):
        layouts = [
            CurveSpec(name=f"joint_as_T{T}", est="joint", detector=detector,
                      selection=sel, trials=spec.trials, workers=spec.workers,
                      exact_cqd=spec.exact_cqd),
            CurveSpec(name=f"non_rr_5bit_T{T}", est="non_rr", detector=detector,
                      selection="none", highres_bits=bits5, trials=spec.trials,
                      workers=spec.workers, exact_cqd=spec.exact_cqd),
            CurveSpec(name=f"one_bit_M{budget}_T{T}", est="one_bit",
                      detector=detector, selection="none", trials=spec.trials,
                      workers=spec.workers, exact_cqd=spec.exact_cqd),
            CurveSpec(name=f"uniform_b2_M{budget // 2}_T{T}", est="uniform",
                      detector=detector, bits=2, trials=spec.trials,
                      workers=spec.workers),
            CurveSpec(name=f"uniform_b3_M{budget // 3}_T{T}", est="uniform",
                      detector=detector, bits=3, trials=spec.trials,
                      workers=spec.workers),
        ]
        for curve in layouts:
            i += 1
            curve = replace(curve, seed=spec.seed + 100 * i)
            if curve.est == "one_bit":
                M, N = budget, 0
            elif curve.est == "uniform":
                M = budget // curve.bits
                N = M
            else:
                M, N = mixed_M, mixed_N
            for snr in snrs:
                cfg = make_config(M=M, N=N, K=K, T=T, snr_db=snr,
                                  sigma_n2=spec.overrides.get("sigma_n2", 1.0))
                y, err = _se_point(spec, cfg, curve)
                rows.append((curve.name, "snr_db", snr, y, err))
    return rows, {"comparators": budget, "highres_bits": bits5,
                  "mixed": {"M": mixed_M, "N": mixed_N},
                  "round_robin_highres": "ideal",
                  "power_opt": spec.power_opt}


def _fig_vs_n(spec: FigureSpec, detector: str):
    N_grid = spec.N_list or (10, 20, 25, 50, 100)
    snrs = _snr_grid(spec, (-10.0, 0.0, 10.0))
    T = (spec.T_list or (1000,))[0]
    rows = []
    i = 0
    for snr in snrs:
        for curve in _snr_scheme_curves(detector, spec):
            i += 1
            curve = replace(curve, name=f"{curve.name}_snr{snr:+g}",
                            seed=spec.seed + 100 * i)
            for N in N_grid:
                if curve.est == "one_bit" and N != N_grid[0]:
                    continue  # flat in N; emit once per grid start
                cfg = _base_config(spec, N=N, T=T, snr_db=snr)
                y, err = _se_point(spec, cfg, curve)
                x = N if curve.est != "one_bit" else N_grid[0]
                rows.append((curve.name, "N", x, y, err))
    return rows, {"T": T, "power_opt": spec.power_opt,
                  "joint_rho_mode": "noiseless"}


_BUILDERS = {
    "F4_EST_ERROR": lambda s: _fig_est_error(s),
    "F5_WEIGHTS": lambda s: _fig_weights(s),
    "F6_MRC_AS": lambda s: _fig_as(s, "mrc"),
    "F7_ZF_AS": lambda s: _fig_as(s, "zf"),
    "F8_MRC_SNR": lambda s: _fig_snr(s, "mrc"),
    "F9_ZF_SNR": lambda s: _fig_snr(s, "zf"),
    "F10_MRC_T": lambda s: _fig_coherence(s, "mrc"),
    "F11_ZF_T": lambda s: _fig_coherence(s, "zf"),
    "F12_MRC_COMP": lambda s: _fig_comparators(s, "mrc"),
    "F13_ZF_COMP": lambda s: _fig_comparators(s, "zf"),
    "F14_MRC_N": lambda s: _fig_vs_n(s, "mrc"),
    "F15_ZF_N": lambda s: _fig_vs_n(s, "zf"),
}


def run_figure(spec: FigureSpec) -> tuple[Path, Path]:
    """Run one figure and write ``<figure>.csv`` plus ``<figure>.meta.json``.

    Returns the paths of the CSV and the sidecar.
    """
    rows, conventions = _BUILDERS[spec.figure](spec)
    outdir = Path(spec.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{spec.figure}.csv"
    meta_path = outdir / f"{spec.figure}.meta.json"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for curve, x_name, x_value, y_value, stderr in rows:
            writer.writerow([spec.figure, curve, x_name, _fmt(x_value),
                             _fmt(y_value), "" if stderr is None else _fmt(stderr)])
    meta = {
        "figure": spec.figure,
        "version": _version,
        "seed": spec.seed,
        "trials": spec.trials,
        "power_opt": spec.power_opt,
        "exact_cqd": spec.exact_cqd,
        "snr_db": list(spec.snr_db) if spec.snr_db is not None else None,
        "T_list": list(spec.T_list) if spec.T_list is not None else None,
        "N_list": list(spec.N_list) if spec.N_list is not None else None,
        "overrides": dict(spec.overrides),
        "defaults": {"M": spec.overrides.get("M", DEFAULT_M),
                     "K": spec.overrides.get("K", DEFAULT_K),
                     "sigma_n2": spec.overrides.get("sigma_n2", 1.0),
                     "eta": "K (minimum orthogonal pilots)"},
        "conventions": conventions,
        "columns": list(CSV_COLUMNS),
    }
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return csv_path, meta_path


def _fmt(value) -> str:
    return format(float(value), ".10g")
