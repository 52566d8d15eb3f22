"""Command-line interface: figure reproduction and power-split optimization.

Examples
--------
Reproduce the ZF-vs-SNR figure with 2000 Monte Carlo trials::

    mixedadc run --figure F9_ZF_SNR --trials 2000 --seed 7 --out results/

Optimize the training/data power split for the joint scheme::

    mixedadc optimize --scheme joint --detector mrc --snr-db 0 --T 400 --N 20
"""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import (FIGURE_IDS, CurveSpec, FigureSpec, evaluate_curve,
                          optimize_power_split, run_figure, split_config)
from .sysmodel import load_config, make_config

SCHEMES = ("one_bit", "full_res_rr", "joint", "non_rr", "uniform")


def _parse_range(text: str) -> tuple[float, ...]:
    """Parse ``a:b:step`` (inclusive endpoints) or a comma list into floats."""
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) == 2:
            lo, hi, step = parts[0], parts[1], 1.0
        elif len(parts) == 3:
            lo, hi, step = parts
        else:
            raise argparse.ArgumentTypeError("ranges are a:b or a:b:step")
        if step <= 0 or hi < lo:
            raise argparse.ArgumentTypeError("need a <= b and step > 0")
        n = int(round((hi - lo) / step))
        return tuple(lo + i * step for i in range(n + 1) if lo + i * step <= hi + 1e-9)
    return tuple(float(x) for x in text.split(","))


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedadc",
        description="Mixed-ADC massive MIMO figure reproduction and analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="reproduce a figure as CSV + JSON sidecar")
    run.add_argument("--figure", required=True, choices=FIGURE_IDS)
    run.add_argument("--snr", type=_parse_range, default=None,
                     help="SNR grid in dB as a:b:step or comma list")
    run.add_argument("--T", type=_parse_int_list, default=None,
                     help="coherence-interval list, e.g. 400,1000")
    run.add_argument("--N", type=_parse_int_list, default=None,
                     help="high-resolution ADC count list, e.g. 10,20")
    run.add_argument("--trials", type=int, default=500)
    run.add_argument("--seed", type=int, default=1)
    run.add_argument("--out", default=".", help="output directory")
    run.add_argument("--config", default=None,
                     help="JSON/TOML file overriding M, K, sigma_n2")
    run.add_argument("--no-power-opt", action="store_true",
                     help="use the equal split p_t = p_d = P_ave")
    run.add_argument("--exact-cqd", action="store_true",
                     help="recompute the data-phase quantization covariance "
                          "per draw from the arcsine law")
    run.add_argument("--workers", type=int, default=1)

    opt = sub.add_parser("optimize", help="optimize the training/data power split")
    opt.add_argument("--scheme", required=True, choices=SCHEMES)
    opt.add_argument("--detector", default="mrc", choices=("mrc", "zf"))
    opt.add_argument("--selection", default="none",
                     choices=("none", "global", "subarray", "bound"))
    opt.add_argument("--bits", type=int, default=None,
                     help="resolution for the uniform scheme")
    opt.add_argument("--snr-db", type=float, default=0.0)
    opt.add_argument("--M", type=int, default=100)
    opt.add_argument("--N", type=int, default=20)
    opt.add_argument("--K", type=int, default=10)
    opt.add_argument("--T", type=int, default=400)
    opt.add_argument("--trials", type=int, default=500)
    opt.add_argument("--seed", type=int, default=1)
    opt.add_argument("--config", default=None)
    return parser


def _cmd_run(args) -> int:
    overrides = {}
    if args.config:
        cfg = load_config(args.config)
        overrides = {"M": cfg.M, "K": cfg.K, "sigma_n2": cfg.sigma_n2}
    spec = FigureSpec(figure=args.figure, snr_db=args.snr, T_list=args.T,
                      N_list=args.N, trials=args.trials, seed=args.seed,
                      outdir=args.out, power_opt=not args.no_power_opt,
                      exact_cqd=args.exact_cqd, workers=args.workers,
                      overrides=overrides)
    csv_path, meta_path = run_figure(spec)
    print(f"wrote {csv_path}")
    print(f"wrote {meta_path}")
    return 0


def _cmd_optimize(args) -> int:
    if args.config:
        config = load_config(args.config)
    else:
        config = make_config(M=args.M, N=args.N, K=args.K, T=args.T,
                             snr_db=args.snr_db)
    curve = CurveSpec(name=args.scheme, est=args.scheme, detector=args.detector,
                      selection=args.selection, bits=args.bits,
                      trials=args.trials, seed=args.seed)
    p_t, p_d, eta_eff, sum_se = optimize_power_split(config, curve)
    equal = evaluate_curve(split_config(config, eta_eff / config.T, eta_eff),
                           curve).sum_se
    print(json.dumps({
        "scheme": args.scheme, "detector": args.detector,
        "selection": args.selection, "snr_db": config.snr_db,
        "M": config.M, "N": config.N, "K": config.K, "T": config.T,
        "eta_eff": eta_eff, "p_t": p_t, "p_d": p_d,
        "sum_se": sum_se, "sum_se_equal_split": equal,
    }, indent=2))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_optimize(args)


if __name__ == "__main__":
    sys.exit(main())
