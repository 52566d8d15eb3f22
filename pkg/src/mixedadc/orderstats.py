"""Expectations of Gamma order statistics and the antenna-selection coefficients.

Row energies of an M x K i.i.d. Rayleigh channel-estimate matrix are
Gamma(K, scale) distributed with ``scale`` the per-coefficient variance.  The
mean of the m-th smallest of M such energies is

    E{E_(m)} = M binom(M-1, m-1) Int x [F(x)]^{m-1} [1-F(x)]^{M-m} dF(x),

evaluated here by substituting ``u = F(x)`` and integrating the Beta-kernel
weighted quantile function over (0, 1) with an adaptive rule.  The
dimensionless coefficient ``chi_m`` is this mean at unit scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, special

__all__ = [
    "OrderStatSpec",
    "QuadratureError",
    "gamma_cdf",
    "order_stat_mean",
    "chi_m",
    "chi_prefix_sum",
    "order_stat_mc_oracle",
]


class QuadratureError(RuntimeError):
    """Raised when the order-statistic quadrature fails to converge."""


@dataclass(frozen=True)
class OrderStatSpec:
    """Order-statistic query: rank m (1 = smallest) out of M Gamma(K, scale)."""

    m: int
    M: int
    K: int
    scale: float = 1.0

    def __post_init__(self):
        if not 1 <= self.m <= self.M:
            raise ValueError(f"rank m must lie in [1, M], got m={self.m}, M={self.M}")
        if self.K < 1:
            raise ValueError("Gamma shape K must be >= 1")
        if self.scale <= 0:
            raise ValueError("scale must be strictly positive")


def gamma_cdf(x, K: int, scale: float = 1.0):
    """Regularized lower incomplete Gamma CDF ``P(K, x/scale)``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("gamma_cdf requires x >= 0")
    if scale <= 0:
        raise ValueError("scale must be strictly positive")
    out = special.gammainc(K, x / scale)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=4096)
def _order_stat_mean_unit(m: int, M: int, K: int) -> float:
    """E{E_(m)} at unit scale via the Beta-kernel quantile integral.

    The combinatorial prefactor ``M binom(M-1, m-1)`` is folded into the
    integrand in log space so that adaptive-rule tolerances stay meaningful
    for large populations, where the raw Beta kernel underflows.
    """
    log_coeff = math.lgamma(M + 1) - math.lgamma(m) - math.lgamma(M - m + 1)

    def integrand(u: float) -> float:
        if u <= 0.0 or u >= 1.0:
            return 0.0
        x = special.gammaincinv(K, u)
        return x * math.exp(log_coeff + (m - 1) * math.log(u) + (M - m) * math.log1p(-u))

    # The quantile diverges logarithmically at u -> 1, so the right tail is
    # integrated in the substituted variable u = 1 - exp(-t), under which the
    # integrand decays like t exp(-(M - m + 1) t).
    u_split = 0.9

    def tail_integrand(t: float) -> float:
        u = -special.expm1(-t)
        if u >= 1.0:  # beyond double resolution of 1 - e^-t; contribution is nil
            return 0.0
        log_factor = log_coeff + (m - 1) * math.log(u) - (M - m + 1) * t
        if log_factor < -745.0:
            return 0.0
        return special.gammaincinv(K, u) * math.exp(log_factor)

    mode = (m - 1) / (M - 1) if M > 1 else 0.5
    points = [mode] if 0.0 < mode < u_split else None
    left, err_left = integrate.quad(integrand, 0.0, u_split, epsabs=1e-12,
                                    epsrel=1e-11, limit=1000, points=points)
    right, err_right = integrate.quad(tail_integrand, -math.log1p(-u_split), np.inf,
                                      epsabs=1e-12, epsrel=1e-11, limit=1000)
    val = left + right
    err = err_left + err_right
    if not math.isfinite(val) or err > max(1e-10, 1e-9 * abs(val)):
        raise QuadratureError(
            f"order-statistic quadrature did not converge for m={m}, M={M}, K={K}: "
            f"value={val}, abs err={err}")
    return val


def order_stat_mean(spec: OrderStatSpec) -> float:
    """Expected value of the m-th smallest of M i.i.d. Gamma(K, scale) draws."""
    return spec.scale * _order_stat_mean_unit(spec.m, spec.M, spec.K)


def chi_m(m: int, M: int, K: int) -> float:
    """Dimensionless coefficient ``chi_m = E{E_(m)} / scale`` at unit scale.

    Satisfies ``sum_m chi_m = M K`` (sum of order statistics equals the sum
    of the unordered variables).
    """
    return order_stat_mean(OrderStatSpec(m=m, M=M, K=K))


@lru_cache(maxsize=512)
def chi_prefix_sum(upto: int, M: int, K: int) -> float:
    """``sum_{m=1}^{upto} chi_m`` for the M-antenna, shape-K population."""
    if upto < 0 or upto > M:
        raise ValueError(f"prefix length must lie in [0, M], got {upto}")
    return float(sum(chi_m(m, M, K) for m in range(1, upto + 1)))


def order_stat_mc_oracle(spec: OrderStatSpec, trials: int,
                         rng: np.random.Generator,
                         batch: int = 1_000_000) -> tuple[float, float]:
    """Monte Carlo estimate of ``order_stat_mean`` with its standard error.

    Draws ``trials`` populations of M i.i.d. Gamma(K, scale) variables and
    averages the m-th smallest; processes in batches to bound memory.
    """
    if trials < 10_000:
        raise ValueError("need at least 10^4 trials for a meaningful oracle")
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < trials:
        n = min(batch, trials - done)
        draws = rng.gamma(shape=spec.K, scale=spec.scale, size=(n, spec.M))
        kth = np.partition(draws, spec.m - 1, axis=1)[:, spec.m - 1]
        total += float(np.sum(kth))
        total_sq += float(np.sum(kth * kth))
        done += n
    mean = total / trials
    var = (total_sq - trials * mean * mean) / (trials - 1)
    return mean, math.sqrt(max(var, 0.0) / trials)
