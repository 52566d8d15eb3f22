"""Shared test helpers: batched Monte Carlo MSE oracle for the estimators."""

import numpy as np

from mixedadc.estimation import estimate, simulate_training
from mixedadc.sysmodel import draw_channel, generate_pilots, make_config


def empirical_mse(scheme, M, N, K, snr_db, draws, seed=0, rho_mode="exact",
                  batch=500, T=20000):
    """Empirical per-coefficient estimator MSE over ``draws`` channel draws.

    Antenna rows are i.i.d., so independent draws are batched by stacking
    them along the antenna axis (scaling M and N together keeps the
    round-robin group structure and the per-antenna statistics unchanged).

    Returns ``(empirical, closed_form)``.
    """
    rng = np.random.default_rng(seed)
    pilots = generate_pilots(K, K)
    acc = 0.0
    done = 0
    closed = None
    while done < draws:
        b = min(batch, draws - done)
        cfg = make_config(M=b * M, N=b * N, K=K, T=T, snr_db=snr_db)
        ch = draw_channel(cfg, rng)
        obs = simulate_training(ch, cfg, pilots, rng, scheme=scheme)
        res = estimate(obs, cfg, pilots, rho_mode=rho_mode)
        acc += float(np.sum(np.abs(res.ghat - ch.g) ** 2))
        closed = float(np.mean(res.var_err))
        done += b
    return acc / (draws * M * K), closed
