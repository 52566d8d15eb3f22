"""SQINR and spectral-efficiency evaluation for the mixed-ADC uplink.

Closed forms are provided for MRC detection (random high-resolution ADC
assignment and the order-statistic antenna-selection bound) and for uniform
AQNM arrays; ZF detection and generic detectors are evaluated by Monte Carlo
over channel/estimate draws via the five-term SQINR

    SQINR_k = p |E{w_k^H h_k}|^2 /
              ( p sum_i E{|w_k^H h_i|^2} - p |E{w_k^H h_k}|^2
                + sigma_n2 E{||w_k||^2} + E{w_k^H A^-1 C_qd A^-1 w_k} ).

All rates pass through ``R(theta) = (1 - eta_eff/T) log2(1 + theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import estimation
from .montecarlo import TrialPlan, run_trials
from .orderstats import chi_prefix_sum
from .quantization import aqnm_alpha
from .sysmodel import SystemConfig

__all__ = [
    "NumericalError",
    "DataPhaseModel",
    "SeReport",
    "CsiModel",
    "rate_wrapper",
    "data_phase_model",
    "fixed_highres_set",
    "se_mrc_mixed",
    "se_mrc_heterogeneous",
    "se_mrc_selection",
    "antenna_selection",
    "zf_detector",
    "csi_model",
    "sqinr_empirical",
    "se_uniform_mrc",
    "se_uniform_zf",
]

ONE_BIT_DISTORTION = 1.0 - 2.0 / math.pi


class NumericalError(RuntimeError):
    """Linear-algebra or convergence failure in an SE evaluation."""


# ---------------------------------------------------------------------------
# report containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SeReport:
    """Per-user SQINR decomposition and spectral efficiency."""

    sqinr: np.ndarray             # per-user effective SQINR
    se: np.ndarray                # per-user SE, bits/s/Hz
    sum_se: float
    eta_eff: float
    method: str                   # CLOSED_FORM | MONTE_CARLO
    trials: int | None = None
    stderr_se: np.ndarray | None = None
    stderr_sum_se: float | None = None


@dataclass(frozen=True, eq=False)
class DataPhaseModel:
    """Hardened data-phase quantization model for a mixed array.

    ``A`` is the per-row Bussgang gain (alpha on one-bit rows, 1 on
    high-resolution rows); ``Cqd`` the diagonal of the quantization-noise
    covariance; ``quant_eff = Cqd / A^2`` the per-row effective distortion
    power after the A^-1 premultiplication.
    """

    alpha: float
    A: np.ndarray
    Cqd: np.ndarray
    quant_eff: np.ndarray
    highres_set: np.ndarray


@dataclass(frozen=True, eq=False)
class CsiModel:
    """Statistical CSI model driving SE evaluation.

    ``sigma_hhat2_rows`` is the per-antenna normalized estimate variance: a
    constant vector for the round-robin and one-bit schemes, two-level for
    the fixed mixed assignment without ADC switching.  ``eta_eff`` is the
    training overhead the scheme consumed.
    """

    sigma_hhat2_rows: np.ndarray
    eta_eff: float


# ---------------------------------------------------------------------------
# rate wrapper and closed forms
# ---------------------------------------------------------------------------

def rate_wrapper(theta, eta_eff: float, T: int):
    """SE in bits/s/Hz: ``(1 - eta_eff/T) log2(1 + theta)``."""
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0):
        raise ValueError("SQINR must be nonnegative")
    if not 0 <= eta_eff <= T:
        raise ValueError(f"eta_eff must lie in [0, T], got {eta_eff} with T={T}")
    out = (1.0 - eta_eff / T) * np.log2(1.0 + theta)
    return float(out) if out.ndim == 0 else out


def _alpha(config: SystemConfig) -> float:
    """Data-phase Bussgang gain under channel hardening."""
    return math.sqrt((2.0 / math.pi) / (config.K * config.p_d + config.sigma_n2))


def data_phase_model(config: SystemConfig, highres_set: np.ndarray,
                     highres_bits: int | None = None) -> DataPhaseModel:
    """Hardened diagonal data-phase model for a given high-resolution set.

    High-resolution rows are ideal by default; with ``highres_bits`` they
    carry the AQNM gain ``alpha0`` and distortion ``alpha0 (1-alpha0) D``
    of that resolution instead.
    """
    highres_set = np.asarray(highres_set, dtype=int)
    alpha = _alpha(config)
    A = np.full(config.M, alpha)
    Cqd = np.full(config.M, ONE_BIT_DISTORTION)
    if highres_bits is None:
        A[highres_set] = 1.0
        Cqd[highres_set] = 0.0
    else:
        a0 = aqnm_alpha(highres_bits).alpha0
        hardened = config.K * config.p_d + config.sigma_n2
        A[highres_set] = a0
        Cqd[highres_set] = a0 * (1.0 - a0) * hardened
    return DataPhaseModel(alpha=alpha, A=A, Cqd=Cqd, quant_eff=Cqd / A**2,
                          highres_set=highres_set)


def _closed_report(config: SystemConfig, sqinr: float, eta_eff: float) -> SeReport:
    se = rate_wrapper(sqinr, eta_eff, config.T)
    sqinr_vec = np.full(config.K, sqinr)
    se_vec = np.full(config.K, se)
    return SeReport(sqinr=sqinr_vec, se=se_vec, sum_se=float(np.sum(se_vec)),
                    eta_eff=eta_eff, method="CLOSED_FORM")


def se_mrc_mixed(config: SystemConfig, sigma_hhat2: float, eta_eff: float,
                 n_highres: int | None = None) -> SeReport:
    """Closed-form MRC SE of the mixed array, arbitrary fixed ADC assignment.

    ``S = R( p M s2 / (p K + sigma_n2 + (1 - 2/pi)/alpha^2 (1 - N/M)) )``
    with ``s2`` the normalized channel-estimate variance.
    """
    if not 0 < sigma_hhat2 <= 1:
        raise ValueError("sigma_hhat2 must lie in (0, 1]")
    N = config.N if n_highres is None else n_highres
    p = config.p_d
    quant = ONE_BIT_DISTORTION / _alpha(config) ** 2 * (1.0 - N / config.M)
    sqinr = p * config.M * sigma_hhat2 / (p * config.K + config.sigma_n2 + quant)
    return _closed_report(config, sqinr, eta_eff)


def se_mrc_heterogeneous(config: SystemConfig, sigma_hhat2_rows: np.ndarray,
                         quant_eff_rows: np.ndarray, eta_eff: float) -> SeReport:
    """Closed-form MRC SE with per-row estimate quality and distortion power.

    Generalizes the mixed-array closed form to rows of unequal estimate
    variance ``s2_m`` and unequal effective quantization noise ``c_m``:

        SQINR = p S1 / (p K + sigma_n2 + sum_m s2_m c_m / S1),  S1 = sum_m s2_m.

    With a common ``s2`` and ``c_m = (1-2/pi)/alpha^2`` on M - N rows this
    reduces to :func:`se_mrc_mixed`.
    """
    s2 = np.asarray(sigma_hhat2_rows, dtype=float)
    c = np.asarray(quant_eff_rows, dtype=float)
    if s2.shape != (config.M,) or c.shape != (config.M,):
        raise ValueError("need one estimate variance and one distortion power per antenna")
    S1 = float(np.sum(s2))
    p = config.p_d
    sqinr = p * S1 / (p * config.K + config.sigma_n2 + float(np.sum(s2 * c)) / S1)
    return _closed_report(config, sqinr, eta_eff)


def se_mrc_selection(config: SystemConfig, sigma_hhat2: float, eta_eff: float,
                     n_highres: int | None = None) -> SeReport:
    """Order-statistic lower bound on the MRC SE with antenna selection.

    The quantization term keeps only the M - N smallest expected row
    energies: ``(1 - 2/pi)/(M K alpha^2) sum_{m=1}^{M-N} chi_m``.
    """
    if not 0 < sigma_hhat2 <= 1:
        raise ValueError("sigma_hhat2 must lie in (0, 1]")
    N = config.N if n_highres is None else n_highres
    p = config.p_d
    chi_sum = chi_prefix_sum(config.M - N, config.M, config.K)
    quant = (ONE_BIT_DISTORTION / (config.M * config.K * _alpha(config) ** 2)) * chi_sum
    sqinr = p * config.M * sigma_hhat2 / (p * config.K + config.sigma_n2 + quant)
    return _closed_report(config, sqinr, eta_eff)


# ---------------------------------------------------------------------------
# detectors and selection
# ---------------------------------------------------------------------------

def antenna_selection(Hhat: np.ndarray, N: int, mode: str = "global") -> np.ndarray:
    """Indices (0-based, sorted) of the antennas given high-resolution ADCs.

    ``global``: the N rows of largest energy ``sum_k |h_mk|^2``;
    ``subarray``: the single largest-energy row within each of N contiguous
    groups of M/N antennas.  Ties break toward the lowest index.
    """
    Hhat = np.asarray(Hhat)
    M = Hhat.shape[0]
    if not 0 <= N <= M:
        raise ValueError(f"N must lie in [0, M], got {N}")
    if N == 0:
        return np.empty(0, dtype=int)
    energy = np.sum(np.abs(Hhat) ** 2, axis=1)
    if mode == "global":
        order = np.argsort(-energy, kind="stable")  # stable: ties keep low index
        return np.sort(order[:N])
    if mode == "subarray":
        if M % N != 0:
            raise ValueError("subarray selection needs contiguous groups of M/N antennas")
        group = M // N
        picks = [g * group + int(np.argmax(energy[g * group:(g + 1) * group]))
                 for g in range(N)]
        return np.asarray(picks, dtype=int)
    raise ValueError(f"unknown selection mode {mode!r}")


def zf_detector(Hhat: np.ndarray, model: DataPhaseModel, sigma_n2: float) -> np.ndarray:
    """Mixed-ADC ZF detector ``W = C^-1 H (H^H C^-1 H)^-1``.

    ``C = sigma_n2 I + A^-2 Cqd`` is the effective (diagonal) noise
    covariance after the A^-1 premultiplication; ``W^H Hhat = I`` to 1e-8.
    """
    Hhat = np.asarray(Hhat)
    c = sigma_n2 + model.quant_eff
    B = Hhat / c[:, None]
    G = Hhat.conj().T @ B
    try:
        W = np.linalg.solve(G.T, B.T).T
    except np.linalg.LinAlgError as exc:
        raise NumericalError("channel estimate is rank deficient") from exc
    resid = np.abs(W.conj().T @ Hhat - np.eye(Hhat.shape[1])).max()
    if not np.isfinite(resid) or resid > 1e-8:
        raise NumericalError(f"ZF inversion failed, residual {resid:.2e}")
    return W


# ---------------------------------------------------------------------------
# CSI models
# ---------------------------------------------------------------------------

def csi_model(config: SystemConfig, scheme, rho_mode: str = "exact",
              highres_bits: int | None = None) -> CsiModel:
    """Per-row CSI statistics for a named scheme.

    ``scheme`` is an :class:`estimation.Scheme`, the string ``"perfect"``,
    ``"non_rr"`` (fixed mixed assignment, single pilot block: N rows at
    full-resolution quality, M - N rows at one-bit quality), or an explicit
    :class:`CsiModel`, returned unchanged.  For ``non_rr`` with
    ``highres_bits`` set, the high-resolution rows use the AQNM estimate
    quality of that resolution instead of being ideal.
    """
    M = config.M
    if isinstance(scheme, CsiModel):
        return scheme
    if scheme == "perfect":
        return CsiModel(sigma_hhat2_rows=np.ones(M), eta_eff=config.eta)
    if scheme == "non_rr":
        one_bit_cfg = config
        s2_one, _ = estimation.sigma_hhat2(one_bit_cfg, estimation.Scheme.ONE_BIT_ONLY)
        if highres_bits is None:
            etapb = config.eta * config.p_t
            s2_hi = 1.0 / (1.0 + config.sigma_n2 / etapb)
        else:
            s2_hi = _aqnm_sigma_hhat2(config, highres_bits)
        rows = np.full(M, float(np.mean(s2_one)))
        rows[fixed_highres_set(config)] = s2_hi
        return CsiModel(sigma_hhat2_rows=rows, eta_eff=config.eta)
    scheme = estimation.Scheme(scheme)
    s2, eta_eff = estimation.sigma_hhat2(config, scheme, rho_mode=rho_mode)
    return CsiModel(sigma_hhat2_rows=np.full(M, float(np.mean(s2))), eta_eff=eta_eff)


def fixed_highres_set(config: SystemConfig, n_highres: int | None = None) -> np.ndarray:
    """Arbitrary fixed assignment: the last N antennas are high resolution."""
    N = config.N if n_highres is None else n_highres
    return np.arange(config.M - N, config.M)


def _aqnm_sigma_hhat2(config: SystemConfig, bits: int) -> float:
    """AQNM normalized estimate variance for uniform b-bit quantization."""
    a0 = aqnm_alpha(bits).alpha0
    ep = config.eta * config.p_t
    return (a0**2 * ep) / (a0**2 * ep + a0**2 * config.sigma_n2
                           + a0 * (1.0 - a0) * (config.p_t * config.K + config.sigma_n2))


# ---------------------------------------------------------------------------
# Monte Carlo SQINR
# ---------------------------------------------------------------------------

def _draw_csi(csi: CsiModel, M: int, K: int, rng: np.random.Generator):
    s2 = csi.sigma_hhat2_rows[:, None]
    scale = 1.0 / math.sqrt(2.0)
    z1 = scale * (rng.standard_normal((M, K)) + 1j * rng.standard_normal((M, K)))
    z2 = scale * (rng.standard_normal((M, K)) + 1j * rng.standard_normal((M, K)))
    Hhat = np.sqrt(s2) * z1
    H = Hhat + np.sqrt(1.0 - s2) * z2
    return Hhat, H


def _exact_quant_eff(config: SystemConfig, H: np.ndarray, onebit: np.ndarray):
    """Per-draw arcsine-law distortion on the one-bit block (validation mode).

    Returns the dense effective distortion matrix ``A^-1 Cqd A^-1`` over the
    one-bit rows, with per-row gains from the draw's true received variances.
    """
    Hb = H[onebit]
    Cr = config.p_d * (Hb @ Hb.conj().T) + config.sigma_n2 * np.eye(Hb.shape[0])
    d = np.real(np.diag(Cr))
    R = Cr / np.sqrt(np.outer(d, d))
    re = np.arcsin(np.clip(R.real, -1, 1))
    im = np.arcsin(np.clip(R.imag, -1, 1))
    Cqd = (2.0 / math.pi) * ((re + 1j * im) - R)
    # A^-1 = sqrt(d / (2/pi)) per row
    scale = np.sqrt(d / (2.0 / math.pi))
    return Cqd * np.outer(scale, scale)


def sqinr_empirical(config: SystemConfig, scheme, detector: str = "mrc",
                    selection: str = "none", trials: int = 1000, seed: int = 0,
                    rho_mode: str = "exact", n_highres: int | None = None,
                    highres_bits: int | None = None, exact_cqd: bool = False,
                    workers: int = 1) -> SeReport:
    """Monte Carlo estimate of the five-term SQINR and the resulting SE.

    Draws channel/estimate pairs from the scheme's CSI statistics, applies
    the chosen detector and high-resolution assignment, and averages the
    SQINR numerator/denominator terms across trials.  Standard errors come
    from a batch jackknife over the trial axis.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    if detector not in ("mrc", "zf"):
        raise ValueError(f"unknown detector {detector!r}")
    csi = csi_model(config, scheme, rho_mode=rho_mode, highres_bits=highres_bits)
    M, K = config.M, config.K
    N = config.N if n_highres is None else n_highres
    fixed_set = fixed_highres_set(config, N)
    hardened = data_phase_model(config, fixed_set, highres_bits)

    def kernel(t: int, rng: np.random.Generator) -> np.ndarray:
        Hhat, H = _draw_csi(csi, M, K, rng)
        if selection == "none":
            sel = fixed_set
            model = hardened
        else:
            sel = antenna_selection(Hhat, N, mode=selection)
            model = data_phase_model(config, sel, highres_bits)
        W = Hhat if detector == "mrc" else zf_detector(Hhat, model, config.sigma_n2)
        WH = W.conj().T @ H                       # K x K, entry (k, i) = w_k^H h_i
        d = np.diagonal(WH)
        i2 = np.abs(WH) ** 2
        nrm = np.real(np.sum(W.conj() * W, axis=0))
        if exact_cqd:
            onebit = np.setdiff1d(np.arange(M), sel, assume_unique=True)
            Q = _exact_quant_eff(config, H, onebit)
            Wb = W[onebit]
            q = np.real(np.einsum("mk,mn,nk->k", Wb.conj(), Q, Wb))
        else:
            q = np.real(np.sum((np.abs(W) ** 2) * model.quant_eff[:, None], axis=0))
        return np.concatenate([d.real, d.imag, i2.ravel(), nrm, q])

    agg = run_trials(TrialPlan(seed=seed, trials=trials, workers=workers),
                     kernel, keep_records=True)

    def report_from(mean: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        d_re, d_im = mean[:K], mean[K:2 * K]
        i2 = mean[2 * K:2 * K + K * K].reshape(K, K)
        nrm = mean[2 * K + K * K:3 * K + K * K]
        q = mean[3 * K + K * K:]
        p = config.p_d
        desired = d_re**2 + d_im**2
        den = (p * np.sum(i2, axis=1) - p * desired
               + config.sigma_n2 * nrm + q)
        sqinr = p * desired / den
        return sqinr, rate_wrapper(sqinr, csi.eta_eff, config.T)

    sqinr, se = report_from(agg.mean)
    stderr_se, stderr_sum = _jackknife_se(agg.records, report_from)
    return SeReport(sqinr=sqinr, se=se, sum_se=float(np.sum(se)), eta_eff=csi.eta_eff,
                    method="MONTE_CARLO", trials=trials, stderr_se=stderr_se,
                    stderr_sum_se=stderr_sum)


def _jackknife_se(records: np.ndarray, stat, n_batches: int = 10):
    """Batch-jackknife standard errors of the per-user and sum SE.

    ``stat`` maps a record-mean vector to ``(sqinr, se)``; leave-one-batch-out
    replicates give the variance of both the per-user SEs and (jointly) of
    their sum.
    """
    n = records.shape[0]
    B = min(n_batches, n)
    edges = np.linspace(0, n, B + 1, dtype=int)
    total = np.sum(records, axis=0)
    se_batches = []
    for b in range(B):
        lo, hi = edges[b], edges[b + 1]
        part = total - np.sum(records[lo:hi], axis=0)
        _, se_b = stat(part / (n - (hi - lo)))
        se_batches.append(np.atleast_1d(se_b))
    se_batches = np.asarray(se_batches)          # B x K
    factor = (B - 1) / B
    center = np.mean(se_batches, axis=0)
    var_user = factor * np.sum((se_batches - center) ** 2, axis=0)
    sums = np.sum(se_batches, axis=1)
    var_sum = factor * np.sum((sums - np.mean(sums)) ** 2)
    return np.sqrt(var_user), float(math.sqrt(var_sum))


# ---------------------------------------------------------------------------
# uniform-resolution baselines (AQNM)
# ---------------------------------------------------------------------------

def se_uniform_mrc(config: SystemConfig, bits: int) -> SeReport:
    """AQNM closed-form MRC SE for an array of uniform b-bit ADCs."""
    a0 = aqnm_alpha(bits).alpha0
    s2 = _aqnm_sigma_hhat2(config, bits)
    p = config.p_d
    quant = (1.0 - a0) / a0**2 * (p * (s2 + config.K) + config.sigma_n2)
    sqinr = p * config.M * s2 / (p * config.K + config.sigma_n2 + quant)
    return _closed_report(config, sqinr, config.eta)


def se_uniform_zf(config: SystemConfig, bits: int, trials: int = 1000,
                  seed: int = 0, workers: int = 1) -> SeReport:
    """AQNM ZF SE for a uniform b-bit array.

    The distortion term ``E{w^H C0 w}`` is estimated by Monte Carlo with the
    per-draw AQNM covariance ``C0 = alpha0 (1 - alpha0) diag(E{r r^H | H})``.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    a0 = aqnm_alpha(bits).alpha0
    s2 = _aqnm_sigma_hhat2(config, bits)
    M, K = config.M, config.K
    csi = CsiModel(sigma_hhat2_rows=np.full(M, s2), eta_eff=config.eta)
    p = config.p_d

    def kernel(t: int, rng: np.random.Generator) -> np.ndarray:
        Hhat, H = _draw_csi(csi, M, K, rng)
        G = Hhat.conj().T @ Hhat
        try:
            W = np.linalg.solve(G.T, Hhat.T).T       # Hhat (Hhat^H Hhat)^-1
        except np.linalg.LinAlgError as exc:
            raise NumericalError("rank-deficient estimate draw") from exc
        c0 = a0 * (1.0 - a0) * (p * np.sum(np.abs(H) ** 2, axis=1) + config.sigma_n2)
        return np.real(np.sum((np.abs(W) ** 2) * c0[:, None], axis=0))

    agg = run_trials(TrialPlan(seed=seed, trials=trials, workers=workers),
                     kernel, keep_records=True)

    def report_from(qmean: np.ndarray):
        num = p * (M - K) * s2
        den = (p * K * (1.0 - s2) + config.sigma_n2
               + (M - K) * s2 * qmean / a0**2)
        sqinr = num / den
        return sqinr, rate_wrapper(sqinr, csi.eta_eff, config.T)

    sqinr, se = report_from(agg.mean)
    stderr_se, stderr_sum = _jackknife_se(agg.records, report_from)
    return SeReport(sqinr=sqinr, se=se, sum_se=float(np.sum(se)), eta_eff=csi.eta_eff,
                    method="MONTE_CARLO", trials=trials, stderr_se=stderr_se,
                    stderr_sum_se=stderr_sum)
