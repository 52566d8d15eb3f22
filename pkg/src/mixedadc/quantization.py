"""One-bit quantizer, Bussgang linearization, arcsine law, AQNM gains.

The one-bit quantizer maps each complex entry to ``(+-1 +- 1j)/sqrt(2)``.
For a Gaussian input vector ``x`` with autocorrelation ``Cx`` the Bussgang
decomposition writes the quantizer output as

    Q(x) = sqrt(2/pi) * Dx^{-1/2} x + q,      Dx = diag{Cx},

with distortion ``q`` uncorrelated with ``x`` whose covariance follows the
arcsine law.  ``arcsin`` acts on real and imaginary parts separately
(``arcsin(c) = arcsin(Re c) + 1j arcsin(Im c)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .sysmodel import PilotMatrix, SystemConfig

__all__ = [
    "BussgangModel",
    "AqnmGain",
    "one_bit_quantize",
    "pilot_autocorrelation",
    "signal_autocorrelation",
    "arcsine_covariance",
    "arcsine_cross_covariance",
    "bussgang_model",
    "aqnm_alpha",
]

SQRT_HALF = 1.0 / math.sqrt(2.0)


def one_bit_quantize(x: np.ndarray) -> np.ndarray:
    """Element-wise one-bit quantization of a complex array.

    Each output entry is ``(sign(Re x) + 1j sign(Im x)) / sqrt(2)`` with the
    tie ``sign(0) = +1``, so every entry has unit modulus.
    """
    x = np.asarray(x)
    re = np.where(x.real >= 0, SQRT_HALF, -SQRT_HALF)
    im = np.where(x.imag >= 0, SQRT_HALF, -SQRT_HALF)
    return re + 1j * im


def signal_autocorrelation(config: SystemConfig, pilots: PilotMatrix) -> np.ndarray:
    """Noise-free training autocorrelation ``sum_k eta p_k beta_k phi_k* phi_k^T``."""
    received = config.p_t  # p_k beta_k under power control
    phi = pilots.phi
    return config.eta * received * (phi @ phi.conj().T).conj()


def pilot_autocorrelation(config: SystemConfig, pilots: PilotMatrix) -> np.ndarray:
    """Autocorrelation ``Cx`` of one antenna's training-phase row.

    ``Cx = sum_k eta p_k beta_k phi_k* phi_k^T + sigma_n2 I`` (Hermitian PD).
    """
    if pilots.K != config.K or pilots.eta != config.eta:
        raise ValueError("pilot matrix dimensions do not match the config")
    return signal_autocorrelation(config, pilots) + config.sigma_n2 * np.eye(config.eta)


def _check_psd(C: np.ndarray, name: str) -> np.ndarray:
    C = np.asarray(C, dtype=complex)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if not np.allclose(C, C.conj().T, atol=1e-10 * max(1.0, np.abs(C).max())):
        raise ValueError(f"{name} must be Hermitian")
    d = np.real(np.diag(C))
    if np.any(d <= 0):
        raise ValueError(f"{name} must have a strictly positive diagonal")
    w = np.linalg.eigvalsh(C)
    if w.min() < -1e-10 * max(1.0, w.max()):
        raise ValueError(f"{name} must be positive (semi)definite")
    return C


def arcsine_covariance(Cx: np.ndarray) -> np.ndarray:
    """Quantization-noise covariance of the one-bit quantizer (arcsine law).

    ``Cq = (2/pi) arcsin(R) - (2/pi) R`` with ``R = D^{-1/2} Cx D^{-1/2}`` and
    ``D = diag{Cx}``; the diagonal equals ``1 - 2/pi`` exactly.
    """
    Cx = _check_psd(Cx, "Cx")
    d = np.sqrt(np.real(np.diag(Cx)))
    R = Cx / np.outer(d, d)
    # the normalized diagonal is 1 by construction; pin it exactly, since
    # arcsin has unbounded slope there and would amplify rounding noise
    np.fill_diagonal(R, 1.0)
    return (2.0 / math.pi) * (_arcsin_c(R) - R)


def arcsine_cross_covariance(Cs: np.ndarray, Dx: np.ndarray,
                             unit_diagonal: bool = False) -> np.ndarray:
    """Cross-covariance of the quantization noise between two snapshots.

    For two quantizer inputs that share the signal part (cross-covariance
    ``Cs``) but have independent noise, each with total per-entry variance
    ``diag(Dx)``, the distortion cross-covariance is

        (2/pi) arcsin(R) - (2/pi) R,   R = Dx^{-1/2} Cs Dx^{-1/2}.

    Normalizing by the full input variances (signal plus noise) gives the
    correlation the quantizer actually sees.  ``unit_diagonal=True`` states
    that ``Dx == diag(Cs)`` analytically (signal-only normalization), so the
    normalized diagonal is pinned to exactly 1 before the arcsine.
    """
    Cs = np.asarray(Cs, dtype=complex)
    d = np.sqrt(np.asarray(Dx, dtype=float))
    if np.any(d <= 0):
        raise ValueError("input variances must be strictly positive")
    R = Cs / np.outer(d, d)
    if unit_diagonal:
        np.fill_diagonal(R, 1.0)
    return (2.0 / math.pi) * (_arcsin_c(R) - R)


def _arcsin_c(R: np.ndarray) -> np.ndarray:
    # clip shields arcsin from +-1 overshoot at floating-point noise level
    re = np.arcsin(np.clip(R.real, -1.0, 1.0))
    im = np.arcsin(np.clip(R.imag, -1.0, 1.0))
    return re + 1j * im


@dataclass(frozen=True, eq=False)
class BussgangModel:
    """Bussgang linearization of the one-bit quantizer for one training row."""

    Dx: np.ndarray      # diagonal entries of diag{Cx}
    gain: np.ndarray    # sqrt(2/pi) * Dx^{-1/2}, diagonal entries
    Cq: np.ndarray      # quantization-noise covariance


def bussgang_model(Cx: np.ndarray) -> BussgangModel:
    """Build the Bussgang gain and arcsine-law distortion covariance for Cx."""
    Cq = arcsine_covariance(Cx)
    Dx = np.real(np.diag(np.asarray(Cx)))
    gain = math.sqrt(2.0 / math.pi) / np.sqrt(Dx)
    return BussgangModel(Dx=Dx, gain=gain, Cq=Cq)


@dataclass(frozen=True)
class AqnmGain:
    """AQNM linear gain ``alpha0 = 1 - rho(b)`` for a b-bit ADC."""

    bits: int
    alpha0: float


_NORM_PDF = lambda x: np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


@lru_cache(maxsize=None)
def _lloyd_max_distortion(bits: int) -> float:
    """Minimum MSE of a b-bit Lloyd-Max quantizer for a unit-variance Gaussian.

    Fixed-point iteration on the centroid condition with closed-form Gaussian
    interval centroids; for the converged quantizer the distortion reduces to
    ``1 - E{q(x)^2}``.
    """
    if bits == 1:
        return 1.0 - 2.0 / math.pi  # levels +-sqrt(2/pi), exact
    levels = 2 ** bits
    # initialize boundaries at equal-probability quantiles
    edges = special.ndtri(np.linspace(0.0, 1.0, levels + 1))
    edges[0], edges[-1] = -np.inf, np.inf
    x = np.zeros(levels)
    for _ in range(20000):
        lo, hi = edges[:-1], edges[1:]
        pdf_lo = np.where(np.isfinite(lo), _NORM_PDF(np.where(np.isfinite(lo), lo, 0.0)), 0.0)
        pdf_hi = np.where(np.isfinite(hi), _NORM_PDF(np.where(np.isfinite(hi), hi, 0.0)), 0.0)
        mass = special.ndtr(hi) - special.ndtr(lo)
        x_new = (pdf_lo - pdf_hi) / mass
        edges_new = edges.copy()
        edges_new[1:-1] = 0.5 * (x_new[:-1] + x_new[1:])
        delta = np.max(np.abs(x_new - x))
        x, edges = x_new, edges_new
        if delta < 1e-14:
            break
    mass = special.ndtr(edges[1:]) - special.ndtr(edges[:-1])
    return float(1.0 - np.sum(mass * x * x))


def aqnm_alpha(bits: int) -> AqnmGain:
    """AQNM gain ``alpha0`` of an optimal (Lloyd-Max) scalar b-bit quantizer.

    ``alpha0 = 1 - rho(b)`` where ``rho(b)`` is the minimum normalized MSE for
    a unit-variance Gaussian input; ``alpha0(1) = 2/pi`` exactly and
    ``alpha0 -> 1`` as the resolution grows.
    """
    if not isinstance(bits, (int, np.integer)):
        raise ValueError("bits must be an integer")
    if not 1 <= bits <= 12:
        raise ValueError(f"bits must lie in [1, 12], got {bits}")
    return AqnmGain(bits=int(bits), alpha0=1.0 - _lloyd_max_distortion(int(bits)))
