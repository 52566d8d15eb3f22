"""LMMSE channel estimators for one-bit, round-robin and joint training.

Three estimators are provided, all linear in the observations and all with
closed-form estimate/error variances:

* ``estimate_onebit``      -- all antennas one-bit quantized, single pilot block;
* ``estimate_fullres_rr``  -- round-robin training, high-resolution snapshots only;
* ``estimate_joint``       -- round-robin training combining the high-resolution
  snapshot of each antenna with its M/N - 1 one-bit snapshots.

The joint estimator needs the correlation ``rho`` of the one-bit distortion
across training sub-intervals.  Two models are exposed:

* ``rho_mode="exact"`` (default): the arcsine-law cross-covariance with the
  quantizer input correlation normalized by the true input variances (signal
  plus noise).  This is the correlation an empirical average reproduces, so
  the closed-form variances match Monte Carlo estimates of the estimator MSE.
* ``rho_mode="noiseless"``: normalization by the signal-only variances, i.e.
  the saturation (high-SNR) value of the correlation.  Under power control
  with unitary pilots this reproduces the simplified closed form
  ``varsigma(p) = (M/N - 1) / ((pi/2) sigma_n2/(K p) + (pi/2 - 1)(M/N - 1))``
  and is the convention used by the figure-reproduction curves.

Both models agree as the SNR grows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .quantization import (
    arcsine_covariance,
    arcsine_cross_covariance,
    one_bit_quantize,
    pilot_autocorrelation,
    signal_autocorrelation,
)
from .sysmodel import ChannelMatrix, PilotMatrix, SystemConfig

__all__ = [
    "Scheme",
    "TrainingObservations",
    "EstimationResult",
    "JointWeights",
    "simulate_training",
    "simulate_round_robin",
    "estimate_onebit",
    "estimate_fullres_rr",
    "joint_weights",
    "estimate_joint",
    "estimate",
    "sigma_hhat2",
]


class Scheme(str, enum.Enum):
    """Training / estimation scheme."""

    ONE_BIT_ONLY = "one_bit_only"
    FULL_RES_RR = "full_res_rr"
    JOINT_RR = "joint_rr"


@dataclass(frozen=True, eq=False)
class TrainingObservations:
    """Pilot-phase observations of one coherence block.

    ``X`` holds the full-resolution rows (each antenna's row filled during
    the sub-interval it was connected to a high-resolution ADC).  ``Ybank``
    holds, for the joint scheme, the M/N - 1 one-bit snapshot matrices; the
    t-th matrix contains each antenna's t-th one-bit snapshot.  For
    ``ONE_BIT_ONLY``, ``X`` is None and ``Ybank`` has the single quantized
    observation.
    """

    X: np.ndarray | None
    Ybank: tuple[np.ndarray, ...]
    scheme: Scheme


@dataclass(frozen=True, eq=False)
class EstimationResult:
    """Channel estimate with its closed-form second-order statistics."""

    ghat: np.ndarray | None   # M x K estimates (None for closed-form-only calls)
    var_est: np.ndarray       # per-user sigma_ghat^2
    var_err: np.ndarray       # per-user sigma_eps^2
    sigma_hhat2: np.ndarray   # normalized sigma_ghat^2 / beta_k
    eta_eff: int              # training symbols consumed
    scheme: Scheme


@dataclass(frozen=True, eq=False)
class JointWeights:
    """Combining weights and noise statistics of the joint LMMSE estimator."""

    w_inf: np.ndarray      # weight on the full-resolution observation, per user
    w_one: np.ndarray      # weight on each one-bit block, per user
    varsigma: np.ndarray   # per-user varsigma_k(p_k)
    rho: np.ndarray        # per-user cross-sub-interval distortion correlation
    sigma_w2: np.ndarray   # per-user effective one-bit observation noise power


# ---------------------------------------------------------------------------
# training-phase simulation
# ---------------------------------------------------------------------------

def _pilot_signal(channel: ChannelMatrix, config: SystemConfig, pilots: PilotMatrix) -> np.ndarray:
    """Noise-free M x eta training signal ``sum_k sqrt(eta p_k) g_k phi_k^T``."""
    amps = np.sqrt(config.eta * config.train_powers)
    return (channel.g * amps) @ pilots.phi.T


def _noise(config: SystemConfig, rng: np.random.Generator) -> np.ndarray:
    scale = math.sqrt(config.sigma_n2 / 2.0)
    return scale * (rng.standard_normal((config.M, config.eta))
                    + 1j * rng.standard_normal((config.M, config.eta)))


def simulate_training(channel: ChannelMatrix, config: SystemConfig,
                      pilots: PilotMatrix, rng: np.random.Generator,
                      scheme: Scheme = Scheme.JOINT_RR) -> TrainingObservations:
    """Simulate the pilot phase for any scheme.

    For the round-robin schemes the pilot block is repeated M/N times with
    fresh noise each sub-interval; antennas of the active group record
    unquantized rows into ``X`` while (for ``JOINT_RR``) all other antennas
    record one-bit rows.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.ONE_BIT_ONLY:
        Y = one_bit_quantize(_pilot_signal(channel, config, pilots) + _noise(config, rng))
        return TrainingObservations(X=None, Ybank=(Y,), scheme=scheme)
    return simulate_round_robin(channel, config, pilots, rng, scheme=scheme)


def simulate_round_robin(channel: ChannelMatrix, config: SystemConfig,
                         pilots: PilotMatrix, rng: np.random.Generator,
                         scheme: Scheme = Scheme.JOINT_RR) -> TrainingObservations:
    """Round-robin pilot phase (``FULL_RES_RR`` or ``JOINT_RR``).

    Noise is drawn independently per sub-interval.  Sub-interval ``s``
    connects the high-resolution ADCs to antennas ``s*N .. (s+1)*N - 1``.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.ONE_BIT_ONLY:
        raise ValueError("use simulate_training for the one-bit-only scheme")
    if config.N == 0:
        raise ValueError("round-robin training requires N >= 1 high-resolution ADC pairs")
    n_sub = config.n_subintervals
    if n_sub * config.eta > config.T:
        raise ValueError("round-robin training exceeds the coherence interval")
    signal = _pilot_signal(channel, config, pilots)
    M, eta = signal.shape
    X = np.zeros((M, eta), dtype=complex)
    bank = [np.zeros((M, eta), dtype=complex) for _ in range(n_sub - 1)]
    onebit_count = np.zeros(M, dtype=int)
    for s in range(n_sub):
        Z = signal + _noise(config, rng)
        active = slice(s * config.N, (s + 1) * config.N)
        X[active] = Z[active]
        if scheme is Scheme.JOINT_RR and n_sub > 1:
            quantized = one_bit_quantize(Z)
            idle = np.ones(M, dtype=bool)
            idle[active] = False
            rows = np.flatnonzero(idle)
            bank_idx = onebit_count[rows]
            for t in range(n_sub - 1):
                sel = rows[bank_idx == t]
                bank[t][sel] = quantized[sel]
            onebit_count[rows] += 1
    if scheme is Scheme.FULL_RES_RR:
        bank = []
    return TrainingObservations(X=X, Ybank=tuple(bank), scheme=scheme)


# ---------------------------------------------------------------------------
# closed-form building blocks
# ---------------------------------------------------------------------------

def _effective_pilots(Cx: np.ndarray, pilots: PilotMatrix) -> np.ndarray:
    """Effective pilots ``sqrt(pi/2) Dx^{1/2} phi_k`` as an eta x K matrix."""
    Dx = np.sqrt(np.real(np.diag(Cx)))
    return math.sqrt(math.pi / 2.0) * (Dx[:, None] * pilots.phi)


def _sigma_w2(config: SystemConfig, pilots: PilotMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-user one-bit observation noise power (Theorem-1 form).

    Returns ``(sigma_w2, Cx, phibar)``.
    """
    Cx = pilot_autocorrelation(config, pilots)
    Cq = arcsine_covariance(Cx)
    phibar = _effective_pilots(Cx, pilots)
    quad = np.real(np.einsum("ik,ij,jk->k", phibar, Cq, phibar.conj()))
    eta_pk = config.eta * config.train_powers
    return (config.sigma_n2 + quad) / eta_pk, Cx, phibar


def _cross_rho(config: SystemConfig, pilots: PilotMatrix, Cx: np.ndarray,
               phibar: np.ndarray, rho_mode: str) -> np.ndarray:
    """Cross-sub-interval distortion correlation ``rho_k`` per user."""
    if rho_mode == "aqnm":
        # the additive-noise model ignores the distortion correlation entirely
        return np.zeros(config.K)
    Cs = signal_autocorrelation(config, pilots)
    eta_pk = config.eta * config.train_powers
    if rho_mode == "exact":
        Cq = arcsine_cross_covariance(Cs, np.real(np.diag(Cx)))
        eff = phibar
    elif rho_mode == "noiseless":
        Dbar = np.real(np.diag(Cs))
        if np.any(Dbar <= 0):
            raise ValueError("noiseless rho mode needs positive signal variances on every pilot symbol")
        Cq = arcsine_cross_covariance(Cs, Dbar, unit_diagonal=True)
        eff = math.sqrt(math.pi / 2.0) * (np.sqrt(Dbar)[:, None] * pilots.phi)
    else:
        raise ValueError(f"unknown rho_mode {rho_mode!r}")
    return np.real(np.einsum("ik,ij,jk->k", eff, Cq, eff.conj())) / eta_pk


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------

def _check_unit_modulus(Y: np.ndarray):
    if not np.allclose(np.abs(Y), 1.0, atol=1e-9):
        raise ValueError("one-bit observations must have unit-modulus entries")


def estimate_onebit(Y: np.ndarray, config: SystemConfig, pilots: PilotMatrix) -> EstimationResult:
    """LMMSE estimate from one-bit quantized observations only.

    ``ghat_k = beta_k/(beta_k + sigma_w2_k) (eta p_k)^{-1/2} Y phibar_k*``.
    """
    sw2, _, phibar = _sigma_w2(config, pilots)
    beta = config.beta
    var_est = beta**2 / (beta + sw2)
    var_err = sw2 * beta / (beta + sw2)
    ghat = None
    if Y is not None:
        Y = np.asarray(Y)
        _check_unit_modulus(Y)
        coeff = beta / (beta + sw2) / np.sqrt(config.eta * config.train_powers)
        ghat = Y @ (phibar.conj() * coeff)
    return EstimationResult(ghat=ghat, var_est=var_est, var_err=var_err,
                            sigma_hhat2=var_est / beta, eta_eff=config.eta,
                            scheme=Scheme.ONE_BIT_ONLY)


def estimate_fullres_rr(obs: TrainingObservations | None, config: SystemConfig,
                        pilots: PilotMatrix) -> EstimationResult:
    """LMMSE estimate from the round-robin high-resolution snapshots only."""
    if config.N == 0:
        raise ValueError("full-resolution round robin requires N >= 1")
    beta = config.beta
    eta_pk_beta = config.eta * config.train_powers * beta  # eta p_k beta_k
    s = config.sigma_n2
    var_est = beta / (1.0 + s / eta_pk_beta)
    var_err = beta / (1.0 + eta_pk_beta / s)
    ghat = None
    if obs is not None:
        if obs.scheme not in (Scheme.FULL_RES_RR, Scheme.JOINT_RR):
            raise ValueError(f"scheme {obs.scheme} has no full-resolution snapshot matrix")
        coeff = 1.0 / (1.0 + s / eta_pk_beta) / np.sqrt(config.eta * config.train_powers)
        ghat = obs.X @ (pilots.phi.conj() * coeff)
    return EstimationResult(ghat=ghat, var_est=var_est, var_err=var_err,
                            sigma_hhat2=var_est / beta,
                            eta_eff=config.n_subintervals * config.eta,
                            scheme=Scheme.FULL_RES_RR)


def joint_weights(config: SystemConfig, pilots: PilotMatrix,
                  rho_mode: str = "exact") -> JointWeights:
    """Combining weights of the joint full-resolution/one-bit LMMSE estimator.

    ``varsigma_k = (M/N - 1) / (sigma_w2_k + (M/N - 2) rho_k)`` and

    ``w_inf = (eta p_k / sigma_n2) / den``,
    ``w_one = varsigma_k / ((M/N - 1) den)``,
    ``den = 1/beta_k + eta p_k / sigma_n2 + varsigma_k``.

    With ``M == N`` there are no one-bit blocks: ``varsigma = 0, w_one = 0``.
    """
    sw2, Cx, phibar = _sigma_w2(config, pilots)
    K = config.K
    n_sub = config.n_subintervals
    eta_pk = config.eta * config.train_powers
    if n_sub == 1:
        rho = np.zeros(K)
        varsigma = np.zeros(K)
    else:
        rho = _cross_rho(config, pilots, Cx, phibar, rho_mode)
        varsigma = (n_sub - 1) / (sw2 + (n_sub - 2) * rho)
    den = 1.0 / config.beta + eta_pk / config.sigma_n2 + varsigma
    w_inf = (eta_pk / config.sigma_n2) / den
    w_one = np.zeros(K) if n_sub == 1 else varsigma / ((n_sub - 1) * den)
    return JointWeights(w_inf=w_inf, w_one=w_one, varsigma=varsigma,
                        rho=rho, sigma_w2=sw2)


def estimate_joint(obs: TrainingObservations | None, config: SystemConfig,
                   pilots: PilotMatrix, rho_mode: str = "exact") -> EstimationResult:
    """Joint LMMSE estimate from high-resolution and one-bit snapshots.

    ``ghat_k = (eta p_k)^{-1/2} (w_inf X phi_k* + w_one sum_t Y_t phibar_k*)``.
    """
    w = joint_weights(config, pilots, rho_mode=rho_mode)
    beta = config.beta
    eta_pk = config.eta * config.train_powers
    den = 1.0 / beta + eta_pk / config.sigma_n2 + w.varsigma
    var_err = 1.0 / den
    var_est = beta - var_err
    ghat = None
    if obs is not None:
        if obs.scheme is not Scheme.JOINT_RR:
            raise ValueError(f"joint estimation requires JOINT_RR observations, got {obs.scheme}")
        Cx = pilot_autocorrelation(config, pilots)
        phibar = _effective_pilots(Cx, pilots)
        inv_amp = 1.0 / np.sqrt(eta_pk)
        ghat = obs.X @ (pilots.phi.conj() * (w.w_inf * inv_amp))
        if obs.Ybank:
            Ysum = np.add.reduce(obs.Ybank)
            ghat = ghat + Ysum @ (phibar.conj() * (w.w_one * inv_amp))
    return EstimationResult(ghat=ghat, var_est=var_est, var_err=var_err,
                            sigma_hhat2=var_est / beta,
                            eta_eff=config.n_subintervals * config.eta,
                            scheme=Scheme.JOINT_RR)


def estimate(obs: TrainingObservations, config: SystemConfig, pilots: PilotMatrix,
             rho_mode: str = "exact") -> EstimationResult:
    """Dispatch to the estimator matching ``obs.scheme``."""
    if obs.scheme is Scheme.ONE_BIT_ONLY:
        return estimate_onebit(obs.Ybank[0], config, pilots)
    if obs.scheme is Scheme.FULL_RES_RR:
        return estimate_fullres_rr(obs, config, pilots)
    return estimate_joint(obs, config, pilots, rho_mode=rho_mode)


def sigma_hhat2(config: SystemConfig, scheme: Scheme, pilots: PilotMatrix | None = None,
                rho_mode: str = "exact") -> tuple[np.ndarray, int]:
    """Closed-form normalized estimate variance and eta_eff for a scheme."""
    from .sysmodel import generate_pilots

    if pilots is None:
        pilots = generate_pilots(config.eta, config.K)
    scheme = Scheme(scheme)
    if scheme is Scheme.ONE_BIT_ONLY:
        res = estimate_onebit(None, config, pilots)
    elif scheme is Scheme.FULL_RES_RR:
        res = estimate_fullres_rr(None, config, pilots)
    else:
        res = estimate_joint(None, config, pilots, rho_mode=rho_mode)
    return res.sigma_hhat2, res.eta_eff
