"""Collapse-style sampling baselines: Born-rule trials versus observer counting.

Randomness is pinned to the Philox4x64-10 counter-based generator (as
shipped by numpy) keyed by the run seed. Trial t consumes the counter block
holding uniforms [t*n, (t+1)*n), so outcomes are bit-exact across platforms
and across any parallel schedule over trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .branches import MaverickCriterion, measure_report_analytic, typical_set_bounds
from .errors import ValidationError
from .measurement import SpinPreparation

_SEED_LIMIT = 1 << 64

# Counting-run trials use the same uniform-threshold draw with a fair coin;
# compare derives its counting seed from the born seed with this offset.
COUNTING_SEED_OFFSET = 1


@dataclass(frozen=True)
class SampleRun:
    """Outcome histogram of repeated n-spin trials under one sampling mode."""

    mode: str
    n: int
    trials: int
    seed: int
    plus_frequency: float
    outcome_histogram: dict[int, int]

    def __post_init__(self):
        if sum(self.outcome_histogram.values()) != self.trials:
            raise ValidationError("histogram counts must sum to the number of trials")
        if not 0.0 <= self.plus_frequency <= 1.0:
            raise ValidationError(f"plus_frequency {self.plus_frequency} outside [0, 1]")

    def maverick_fraction(self, crit: MaverickCriterion) -> float:
        """Fraction of trials whose plus count falls outside the typical window."""
        k_min, k_max = typical_set_bounds(crit.p, crit.epsilon, self.n)
        bad = sum(c for k, c in self.outcome_histogram.items() if not k_min <= k <= k_max)
        return bad / self.trials

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "plus_frequency": self.plus_frequency,
            "histogram": [[k, self.outcome_histogram[k]] for k in sorted(self.outcome_histogram)],
        }


def _validate_run_args(n: int, trials: int, seed: int) -> None:
    if n < 1:
        raise ValidationError(f"spins per trial must be at least 1, got {n}")
    if trials < 1:
        raise ValidationError(f"trials must be at least 1, got {trials}")
    if not 0 <= seed < _SEED_LIMIT:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")


def _plus_count_per_trial(p: float, n: int, trials: int, seed: int) -> np.ndarray:
    """Draw n uniforms per trial from the keyed Philox stream; count u < p.

    Chunking over trials only batches the sequential counter reads, so the
    result is independent of the chunk size.
    """
    gen = np.random.Generator(np.random.Philox(key=seed))
    ks = np.empty(trials, dtype=np.int64)
    chunk = max(1, (1 << 23) // n)
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        u = gen.random((m, n))
        ks[done : done + m] = np.count_nonzero(u < p, axis=1)
        done += m
    return ks


def _run_from_counts(mode: str, n: int, trials: int, seed: int, ks: np.ndarray) -> SampleRun:
    values, counts = np.unique(ks, return_counts=True)
    histogram = {int(k): int(c) for k, c in zip(values, counts)}
    return SampleRun(
        mode=mode,
        n=n,
        trials=trials,
        seed=seed,
        plus_frequency=float(int(ks.sum()) / (n * trials)),
        outcome_histogram=histogram,
    )


def sample_born(prep: SpinPreparation, n: int, trials: int, seed: int) -> SampleRun:
    """Conventional-collapse baseline: each spin lands plus with probability p.

    This is the one place objective randomness enters the package; every
    trial is an independent draw with Born frequencies.
    """
    _validate_run_args(n, trials, seed)
    ks = _plus_count_per_trial(prep.p, n, trials, seed)
    return _run_from_counts("born", n, trials, seed, ks)


def sample_counting(n: int, trials: int, seed: int) -> SampleRun:
    """Sample an observer uniformly: a uniform random bit-string per trial.

    Takes no preparation at all; the counting measure never sees the
    amplitudes. Only the per-trial plus count is stored, so n may exceed 63.
    """
    _validate_run_args(n, trials, seed)
    ks = _plus_count_per_trial(0.5, n, trials, seed)
    return _run_from_counts("counting", n, trials, seed, ks)


@dataclass(frozen=True)
class RunComparison:
    """Empirical maverick fractions of a Born run and a counting run, with the
    analytic measures they estimate and normal-approximation z-scores."""

    n: int
    p: float
    epsilon: float
    born_trials: int
    counting_trials: int
    born_empirical_maverick: float
    born_expected_maverick: float
    born_zscore: float
    counting_empirical_maverick: float
    counting_expected_maverick: float
    counting_zscore: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "epsilon": self.epsilon,
            "born_trials": self.born_trials,
            "counting_trials": self.counting_trials,
            "born_empirical_maverick": self.born_empirical_maverick,
            "born_expected_maverick": self.born_expected_maverick,
            "born_zscore": self.born_zscore,
            "counting_empirical_maverick": self.counting_empirical_maverick,
            "counting_expected_maverick": self.counting_expected_maverick,
            "counting_zscore": self.counting_zscore,
        }


def _zscore(empirical: float, expected: float, trials: int) -> float:
    stderr = math.sqrt(expected * (1.0 - expected) / trials)
    if stderr == 0.0:
        return 0.0 if empirical == expected else float("inf")
    return (empirical - expected) / stderr


def compare_runs(
    born: SampleRun, counting: SampleRun, crit: MaverickCriterion
) -> RunComparison:
    """Contrast a Born run against a counting run under one maverick criterion.

    The Born run's maverick fraction estimates the Born maverick weight; the
    counting run's estimates the counting maverick fraction. For p away from
    one half and large n the two part ways completely.
    """
    if born.n != counting.n:
        raise ValidationError(f"spin counts differ: {born.n} vs {counting.n}")
    if born.mode != "born" or counting.mode != "counting":
        raise ValidationError(
            f"expected modes (born, counting), got ({born.mode}, {counting.mode})"
        )
    report = measure_report_analytic(crit.p, born.n, crit.epsilon)
    born_emp = born.maverick_fraction(crit)
    counting_emp = counting.maverick_fraction(crit)
    return RunComparison(
        n=born.n,
        p=crit.p,
        epsilon=crit.epsilon,
        born_trials=born.trials,
        counting_trials=counting.trials,
        born_empirical_maverick=born_emp,
        born_expected_maverick=report.born_maverick_weight,
        born_zscore=_zscore(born_emp, report.born_maverick_weight, born.trials),
        counting_empirical_maverick=counting_emp,
        counting_expected_maverick=report.counting_maverick_fraction,
        counting_zscore=_zscore(
            counting_emp, report.counting_maverick_fraction, counting.trials
        ),
    )
