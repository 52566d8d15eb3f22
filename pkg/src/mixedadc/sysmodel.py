"""System configuration, pilot construction, channel generation, power control.

Conventions
-----------
* ``sigma_n2`` is the receiver noise power; all powers are linear.
* ``p`` is the nominal post-power-control received power per user, so the
  per-user transmit power is ``p / beta_k``.  ``p_t`` / ``p_d`` are the
  training / data received powers and default to ``p`` (no power split).
* ``snr_db = 10 log10(p / sigma_n2)``.
* ``N = 0`` is allowed and denotes an all-one-bit receiver (no
  high-resolution ADC pairs); round-robin schemes then do not apply.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

__all__ = [
    "SystemConfig",
    "PilotMatrix",
    "ChannelMatrix",
    "make_config",
    "load_config",
    "generate_pilots",
    "draw_channel",
    "power_control",
]


@dataclass(frozen=True, eq=False)
class SystemConfig:
    """All scalar system parameters of the uplink model.

    Attributes
    ----------
    M : int
        Number of BS antennas.
    N : int
        Number of high-resolution ADC pairs (0 = all one-bit).
    K : int
        Number of single-antenna users.
    T : int
        Coherence interval in symbols.
    eta : int
        Pilot sequence length in symbols, ``K <= eta <= T``.
    snr_db : float
        Nominal SNR ``p / sigma_n2`` in dB.
    sigma_n2 : float
        Noise power (linear).
    p : float
        Nominal post-power-control received power per user.
    beta : np.ndarray
        Per-user large-scale gains, shape ``(K,)``.
    p_t, p_d : float
        Received power per user during training / data transmission.
    """

    M: int
    N: int
    K: int
    T: int
    eta: int
    snr_db: float
    sigma_n2: float
    p: float
    beta: np.ndarray
    p_t: float
    p_d: float

    def __post_init__(self):
        if self.M <= 0 or self.K <= 0 or self.T <= 0:
            raise ValueError("M, K and T must be positive integers")
        if self.N < 0 or self.N > self.M:
            raise ValueError(f"N must lie in [0, M], got N={self.N}")
        if self.N > 0 and self.M % self.N != 0:
            raise ValueError(f"M/N must be an integer, got M={self.M}, N={self.N}")
        if not (self.K <= self.eta <= self.T):
            raise ValueError(f"need K <= eta <= T, got K={self.K}, eta={self.eta}, T={self.T}")
        if self.N > 0 and (self.M // self.N) * self.eta > self.T:
            raise ValueError(
                f"round-robin training (M/N)*eta = {(self.M // self.N) * self.eta} "
                f"exceeds the coherence interval T = {self.T}"
            )
        for name in ("sigma_n2", "p", "p_t", "p_d"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        beta = np.asarray(self.beta, dtype=float)
        if beta.shape != (self.K,) or np.any(beta <= 0):
            raise ValueError("beta must be a length-K vector of positive gains")
        object.__setattr__(self, "beta", beta)

    @property
    def n_subintervals(self) -> int:
        """Number of round-robin sub-intervals M/N (1 when N in {0, M})."""
        return self.M // self.N if self.N > 0 else 1

    @property
    def snr_linear(self) -> float:
        return self.p / self.sigma_n2

    @property
    def p_k(self) -> np.ndarray:
        """Per-user nominal transmit powers ``p / beta_k``."""
        return power_control(self.beta, self.p)

    @property
    def train_powers(self) -> np.ndarray:
        """Per-user transmit powers during training, ``p_t / beta_k``."""
        return power_control(self.beta, self.p_t)

    def with_powers(self, p_t: float | None = None, p_d: float | None = None) -> "SystemConfig":
        """Copy of this config with a different training/data power split."""
        return replace(self, p_t=self.p_t if p_t is None else p_t,
                       p_d=self.p_d if p_d is None else p_d)


def make_config(M: int, N: int, K: int, T: int, *, eta: int | None = None,
                snr_db: float = 0.0, sigma_n2: float = 1.0,
                beta: np.ndarray | None = None,
                p_t: float | None = None, p_d: float | None = None) -> SystemConfig:
    """Build a validated :class:`SystemConfig`.

    ``p`` is derived from ``snr_db`` and ``sigma_n2``; ``eta`` defaults to the
    minimum orthogonal pilot length ``K`` and ``beta`` to all ones.
    """
    p = sigma_n2 * 10.0 ** (snr_db / 10.0)
    if eta is None:
        eta = K
    if beta is None:
        beta = np.ones(K)
    return SystemConfig(M=M, N=N, K=K, T=T, eta=eta, snr_db=snr_db,
                        sigma_n2=sigma_n2, p=p, beta=beta,
                        p_t=p if p_t is None else p_t,
                        p_d=p if p_d is None else p_d)


_DB_CONVERTIBLE = {"p", "p_t", "p_d", "sigma_n2"}


def load_config(path: str | Path) -> SystemConfig:
    """Read a config from a JSON or TOML key-value file.

    Keys mirror :class:`SystemConfig` / :func:`make_config` fields.  Values
    are linear unless the key ends in ``_db``; for example ``p_t_db = -3``
    sets ``p_t = 10**(-0.3)``.  ``snr_db`` itself stays in dB.
    """
    path = Path(path)
    if path.suffix.lower() == ".toml":
        raw = tomllib.loads(path.read_text())
    else:
        raw = json.loads(path.read_text())
    data: dict = {}
    for key, value in raw.items():
        base = key[:-3]
        if key.endswith("_db") and base in _DB_CONVERTIBLE:
            data[base] = 10.0 ** (float(value) / 10.0)
        else:
            data[key] = value
    if "beta" in data:
        data["beta"] = np.asarray(data["beta"], dtype=float)
    known = {"M", "N", "K", "T", "eta", "snr_db", "sigma_n2", "beta", "p_t", "p_d"}
    unknown = set(data) - known - {"p"}
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    p = data.pop("p", None)
    cfg = make_config(**data)
    if p is not None:
        cfg = replace(cfg, p=float(p),
                      p_t=float(p) if "p_t" not in data else cfg.p_t,
                      p_d=float(p) if "p_d" not in data else cfg.p_d)
    return cfg


@dataclass(frozen=True, eq=False)
class PilotMatrix:
    """Orthonormal pilot matrix Phi (eta x K), columns are user pilots."""

    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=complex)
        if phi.ndim != 2:
            raise ValueError("phi must be a 2-D matrix")
        gram = phi.conj().T @ phi
        if not np.allclose(gram, np.eye(phi.shape[1]), atol=1e-12):
            raise ValueError("pilot columns must be orthonormal (Phi^H Phi = I)")
        object.__setattr__(self, "phi", phi)

    @property
    def eta(self) -> int:
        return self.phi.shape[0]

    @property
    def K(self) -> int:
        return self.phi.shape[1]

    def column(self, k: int) -> np.ndarray:
        return self.phi[:, k]


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """One block-fading realization: fast fading ``h`` and scaled ``g``."""

    h: np.ndarray          # M x K, unit-variance CSCG entries
    g: np.ndarray          # M x K, g_k = sqrt(beta_k) h_k
    beta: np.ndarray       # length K

    @property
    def M(self) -> int:
        return self.h.shape[0]

    @property
    def K(self) -> int:
        return self.h.shape[1]


def generate_pilots(eta: int, K: int) -> PilotMatrix:
    """Mutually orthogonal unit-norm pilots from a scaled DFT matrix.

    Returns the first ``K`` columns of the ``eta``-point DFT matrix scaled by
    ``1/sqrt(eta)``; when ``eta == K`` the matrix is unitary so both
    ``Phi^H Phi = I`` and ``Phi Phi^H = I`` hold.
    """
    if K <= 0:
        raise ValueError("K must be positive")
    if K > eta:
        raise ValueError(f"pilot length eta={eta} must be >= number of users K={K}")
    n = np.arange(eta)
    F = np.exp(-2j * np.pi * np.outer(n, n) / eta)
    return PilotMatrix(F[:, :K] / math.sqrt(eta))


def draw_channel(config: SystemConfig, rng: np.random.Generator) -> ChannelMatrix:
    """Draw one i.i.d. Rayleigh block-fading realization."""
    h = (rng.standard_normal((config.M, config.K))
         + 1j * rng.standard_normal((config.M, config.K))) / math.sqrt(2)
    g = h * np.sqrt(config.beta)
    return ChannelMatrix(h=h, g=g, beta=config.beta)


def power_control(beta: np.ndarray, p: float) -> np.ndarray:
    """Statistics-aware power control: ``p_k = p / beta_k`` so ``p_k beta_k = p``."""
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0):
        raise ValueError("large-scale gains beta must be strictly positive")
    if p <= 0:
        raise ValueError("target received power p must be strictly positive")
    return p / beta
