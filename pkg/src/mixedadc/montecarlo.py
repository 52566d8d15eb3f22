"""Deterministic, schedule-invariant Monte Carlo trial engine.

Every trial derives its own random stream from ``(seed, trial_index)``
through NumPy's SeedSequence, so streams are statistically independent and
results do not depend on execution order.  Per-trial records are written
into a preallocated array indexed by trial and reduced with NumPy's pairwise
summation over the trial axis, a fixed tree keyed by trial index; the
aggregate is therefore bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["TrialPlan", "TrialAggregate", "TrialFailure", "trial_rng", "run_trials"]


class TrialFailure(RuntimeError):
    """A kernel raised; carries the failing trial index."""

    def __init__(self, trial_index: int, cause: BaseException):
        super().__init__(f"trial {trial_index} failed: {cause!r}")
        self.trial_index = trial_index
        self.__cause__ = cause


@dataclass(frozen=True)
class TrialPlan:
    """Seeded plan for a batch of independent trials."""

    seed: int
    trials: int
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Independent substream for one trial, derived from (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                        spawn_key=(trial_index,)))


@dataclass(frozen=True, eq=False)
class TrialAggregate:
    """Mean, sample variance and standard error per record component."""

    mean: np.ndarray
    var: np.ndarray
    stderr: np.ndarray
    trials: int
    records: np.ndarray | None = None

    def component(self, i: int) -> tuple[float, float]:
        return float(self.mean[i]), float(self.stderr[i])


def run_trials(plan: TrialPlan, kernel: Callable[[int, np.random.Generator], np.ndarray],
               keep_records: bool = False) -> TrialAggregate:
    """Run ``kernel(trial_index, rng)`` for every trial and aggregate.

    The kernel must be pure given its stream and return a 1-D float array of
    fixed length.  Aggregates are reduced in a fixed tree order keyed by
    trial index, so equal plans give bit-identical results for any number of
    workers.
    """
    first = _run_one(plan.seed, 0, kernel)
    dim = first.shape[0]
    out = np.empty((plan.trials, dim))
    out[0] = first

    def block(lo: int, hi: int):
        for t in range(lo, hi):
            out[t] = _run_one(plan.seed, t, kernel)

    if plan.workers == 1 or plan.trials <= 2:
        block(1, plan.trials)
    else:
        step = math.ceil((plan.trials - 1) / plan.workers)
        spans = [(lo, min(lo + step, plan.trials))
                 for lo in range(1, plan.trials, step)]
        with ThreadPoolExecutor(max_workers=plan.workers) as pool:
            for fut in [pool.submit(block, lo, hi) for lo, hi in spans]:
                fut.result()

    mean = np.sum(out, axis=0) / plan.trials
    if plan.trials > 1:
        var = np.sum((out - mean) ** 2, axis=0) / (plan.trials - 1)
    else:
        var = np.zeros(dim)
    stderr = np.sqrt(var / plan.trials)
    return TrialAggregate(mean=mean, var=var, stderr=stderr, trials=plan.trials,
                          records=out if keep_records else None)


def _run_one(seed: int, t: int, kernel) -> np.ndarray:
    try:
        rec = np.asarray(kernel(t, trial_rng(seed, t)), dtype=float)
    except Exception as exc:
        raise TrialFailure(t, exc) from exc
    if rec.ndim != 1:
        raise TrialFailure(t, ValueError("kernel must return a 1-D record"))
    return rec
