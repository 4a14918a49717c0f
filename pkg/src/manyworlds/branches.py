"""Branch enumeration and the counting-measure versus Born-measure contrast.

An N-spin measurement realizes all 2**N outcome bit-strings at once. This
module enumerates them with amplitudes, splits them into Born-typical and
maverick sets by frequency deviation, and weighs each set two ways: the
counting measure (every branch counts once) and the Born measure (squared
amplitude). Small N is handled by literal enumeration, large N by log-domain
binomial sums, and the two routes are required to agree where they overlap.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, xlogy

from . import kernels
from .errors import CapacityError, ValidationError
from .measurement import SpinPreparation

DEFAULT_ENUMERATION_CAP = 26

# Branch counts are reported as exact integers up to this register size and
# as log2 counts beyond it (2**63 no longer fits a machine word).
EXACT_COUNT_LIMIT = 63

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class Branch:
    """One outcome bit-string with its amplitude and Born weight.

    Bit i holds the result of spin i: '0' for plus, '1' for minus.
    """

    outcome_bits: str
    amplitude: complex
    born_weight: float
    plus_count: int

    def __post_init__(self):
        if set(self.outcome_bits) - {"0", "1"}:
            raise ValidationError(f"outcome bits must be 0/1, got {self.outcome_bits!r}")
        if self.plus_count != self.outcome_bits.count("0"):
            raise ValidationError("plus_count does not match the zero bits of the outcome")
        if abs(self.born_weight - abs(self.amplitude) ** 2) > 1e-14:
            raise ValidationError("born_weight deviates from |amplitude|^2 beyond 1e-14")


@dataclass(frozen=True)
class MaverickCriterion:
    """Frequency-deviation threshold: typical means |k/N - p| <= epsilon."""

    epsilon: float
    p: float

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"p must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class MeasureReport:
    """Typical/maverick statistics of the 2**n branches at given (n, p, epsilon).

    The log fields carry the information even when the plain floats underflow
    (a maverick weight of exp(-5000) prints as 0.0 but keeps a finite log).
    typical_branch_count is an exact integer up to n = 63 and log2 of the
    count beyond that.
    """

    n: int
    p: float
    epsilon: float
    k_min: int
    k_max: int
    counting_maverick_fraction: float
    born_maverick_weight: float
    typical_branch_count: int | float
    hoeffding_bound: float
    log_counting_maverick_fraction: float
    log_born_maverick_weight: float
    log_counting_typical_fraction: float
    log_born_typical_weight: float

    def __post_init__(self):
        for name in ("counting_maverick_fraction", "born_maverick_weight"):
            value = getattr(self, name)
            if not -1e-12 <= value <= 1.0 + 1e-12:
                raise ValidationError(f"{name} = {value} is outside [0, 1]")
        if self.born_maverick_weight > self.hoeffding_bound + 1e-12:
            raise ValidationError(
                f"born maverick weight {self.born_maverick_weight} exceeds the "
                f"Hoeffding bound {self.hoeffding_bound}"
            )

    @property
    def typical_branch_count_is_log2(self) -> bool:
        return self.n > EXACT_COUNT_LIMIT

    @property
    def log10_born_maverick_weight(self) -> float:
        return self.log_born_maverick_weight / math.log(10.0)

    @property
    def log10_counting_maverick_fraction(self) -> float:
        return self.log_counting_maverick_fraction / math.log(10.0)

    @property
    def counting_typical_fraction(self) -> float:
        return math.exp(self.log_counting_typical_fraction)

    @property
    def born_typical_weight(self) -> float:
        return math.exp(self.log_born_typical_weight)

    def to_row(self) -> dict:
        """The report's external schema, shared by the CSV and JSON outputs."""
        return {
            "n": self.n,
            "p": self.p,
            "epsilon": self.epsilon,
            "counting_maverick_fraction": self.counting_maverick_fraction,
            "born_maverick_weight": self.born_maverick_weight,
            "log10_born_maverick_weight": self.log10_born_maverick_weight,
            "hoeffding_bound": self.hoeffding_bound,
        }


def _as_preparations(prep, n: int | None) -> list[SpinPreparation]:
    if isinstance(prep, SpinPreparation):
        if n is None or n < 1:
            raise ValidationError("spin count n must be at least 1")
        return [prep] * n
    preps = list(prep)
    if not preps:
        raise ValidationError("need at least one preparation")
    if n is not None and n != len(preps):
        raise ValidationError(f"n = {n} does not match {len(preps)} preparations")
    return preps


def enumerate_branches(
    prep: SpinPreparation | Sequence[SpinPreparation],
    n: int | None = None,
    max_bits: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[Branch]:
    """Yield all 2**n branches in ascending bit-string order.

    The amplitude of bit-string m is the product over spins of c_plus (bit 0)
    or c_minus (bit 1). Every branch is produced regardless of its weight;
    a deterministic preparation still spans the full set of outcomes.
    """
    preps = _as_preparations(prep, n)
    count = len(preps)
    if count > max_bits:
        raise CapacityError(
            f"enumerating 2**{count} branches is above the cap of 2**{max_bits}"
        )
    for m in range(1 << count):
        bits = format(m, f"0{count}b")
        amp = complex(1.0)
        for i, b in enumerate(bits):
            amp *= preps[i].c_plus if b == "0" else preps[i].c_minus
        yield Branch(
            outcome_bits=bits,
            amplitude=amp,
            born_weight=abs(amp) ** 2,
            plus_count=bits.count("0"),
        )


def typical_set_bounds(p: float, epsilon: float, n: int) -> tuple[int, int]:
    """Integer window [k_min, k_max] of plus counts satisfying |k/n - p| <= epsilon.

    Starts from ceil(n(p - eps)) and floor(n(p + eps)) clamped to [0, n], then
    snaps each edge to the deviation predicate itself: float rounding can land
    the formula one step off the closed window the classifier uses, and every
    consumer must agree on the same integer window. An empty window is
    returned with k_min > k_max.
    """
    MaverickCriterion(epsilon=epsilon, p=p)
    if n < 1:
        raise ValidationError(f"spin count n must be at least 1, got {n}")

    def typical(k: int) -> bool:
        return abs(k / n - p) <= epsilon

    lo_guess = max(0, min(n, math.ceil(n * (p - epsilon))))
    hi_guess = max(0, min(n, math.floor(n * (p + epsilon))))
    k_min = next(
        (k for k in range(max(0, lo_guess - 2), min(n, lo_guess + 2) + 1) if typical(k)),
        None,
    )
    k_max = next(
        (k for k in range(min(n, hi_guess + 2), max(0, hi_guess - 2) - 1, -1) if typical(k)),
        None,
    )
    if k_min is None or k_max is None or k_min > k_max:
        return lo_guess, lo_guess - 1
    while k_min > 0 and typical(k_min - 1):
        k_min -= 1
    while k_max < n and typical(k_max + 1):
        k_max += 1
    return k_min, k_max


def classify(branch: Branch, crit: MaverickCriterion) -> str:
    """'typical' when the branch's plus frequency is within epsilon of p."""
    n = len(branch.outcome_bits)
    k_min, k_max = typical_set_bounds(crit.p, crit.epsilon, n)
    return "typical" if k_min <= branch.plus_count <= k_max else "maverick"


def _window_sum(values: Sequence[float], k_min: int, k_max: int, inside: bool) -> float:
    picked = [
        v for k, v in enumerate(values) if (k_min <= k <= k_max) == inside
    ]
    return math.fsum(picked)


def measure_report_exact(
    prep: SpinPreparation | Sequence[SpinPreparation],
    n: int | None = None,
    epsilon: float = 0.05,
    max_bits: int = DEFAULT_ENUMERATION_CAP,
) -> MeasureReport:
    """Measure statistics by full enumeration of the 2**n branches.

    The enumeration kernels visit every bit-string and bucket it by plus
    count, so branch counts are exact integers. With identical preparations
    each bucket's Born weight is its exact count times p**k (1-p)**(n-k);
    with per-spin preparations the kernel accumulates the product weights
    branch by branch. The criterion frequency for a mixed list is the mean
    of the per-spin plus probabilities.
    """
    preps = _as_preparations(prep, n)
    count = len(preps)
    if count > max_bits:
        raise CapacityError(
            f"enumerating 2**{count} branches is above the cap of 2**{max_bits}"
        )
    identical = all(q is preps[0] or q == preps[0] for q in preps[1:])
    p = preps[0].p if identical else math.fsum(q.p for q in preps) / count
    k_min, k_max = typical_set_bounds(p, epsilon, count)

    counts = kernels.plus_count_histogram(count)
    total = 1 << count
    typical_count = int(counts[k_min : k_max + 1].sum()) if k_min <= k_max else 0
    maverick_count = total - typical_count

    if identical:
        q = 1.0 - p
        weights = [int(counts[k]) * p**k * q ** (count - k) for k in range(count + 1)]
    else:
        probs = np.array([q.p for q in preps], dtype=np.float64)
        weights = list(kernels.weighted_plus_count_histogram(probs))
    born_typical = min(_window_sum(weights, k_min, k_max, inside=True), 1.0)
    born_maverick = min(_window_sum(weights, k_min, k_max, inside=False), 1.0)

    def _log(x: float) -> float:
        return math.log(x) if x > 0.0 else float("-inf")

    counting_maverick = maverick_count / total
    return MeasureReport(
        n=count,
        p=p,
        epsilon=epsilon,
        k_min=k_min,
        k_max=k_max,
        counting_maverick_fraction=counting_maverick,
        born_maverick_weight=born_maverick,
        typical_branch_count=typical_count,
        hoeffding_bound=2.0 * math.exp(-2.0 * count * epsilon * epsilon),
        log_counting_maverick_fraction=_log(counting_maverick),
        log_born_maverick_weight=_log(born_maverick),
        log_counting_typical_fraction=_log(typical_count / total),
        log_born_typical_weight=_log(born_typical),
    )


def _logsumexp(values: np.ndarray) -> float:
    if values.size == 0:
        return float("-inf")
    peak = float(np.max(values))
    if peak == float("-inf"):
        return peak
    return peak + math.log(float(np.sum(np.exp(values - peak))))


def measure_report_analytic(p: float, n: int, epsilon: float) -> MeasureReport:
    """Measure statistics from log-domain binomial sums; no enumeration cap.

    log C(n, k) comes from log-gamma and each measure is a log-sum-exp over
    its side of the typical window, evaluated directly (never as one minus a
    quantity that has rounded to 1), so n = 10**6 neither overflows nor loses
    the small tails.
    """
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    k_min, k_max = typical_set_bounds(p, epsilon, n)

    ks = np.arange(n + 1, dtype=np.float64)
    log_choose = gammaln(n + 1.0) - gammaln(ks + 1.0) - gammaln(n - ks + 1.0)

    inside = np.zeros(n + 1, dtype=bool)
    if k_min <= k_max:
        inside[k_min : k_max + 1] = True

    n_ln2 = n * _LN2
    log_count_typical = _logsumexp(log_choose[inside]) - n_ln2
    log_count_maverick = _logsumexp(log_choose[~inside]) - n_ln2
    if p == 0.5:
        # at the symmetric point every branch weighs exactly 2**-n, so the
        # Born measure coincides with the counting measure term for term
        log_born_typical = log_count_typical
        log_born_maverick = log_count_maverick
    else:
        with np.errstate(invalid="ignore"):
            log_pmf = log_choose + xlogy(ks, p) + xlogy(n - ks, 1.0 - p)
        log_born_typical = _logsumexp(log_pmf[inside])
        log_born_maverick = _logsumexp(log_pmf[~inside])

    if n <= EXACT_COUNT_LIMIT:
        typical_count: int | float = sum(math.comb(n, k) for k in range(k_min, k_max + 1))
    else:
        typical_count = _logsumexp(log_choose[inside]) / _LN2

    return MeasureReport(
        n=n,
        p=p,
        epsilon=epsilon,
        k_min=k_min,
        k_max=k_max,
        counting_maverick_fraction=min(math.exp(log_count_maverick), 1.0),
        born_maverick_weight=min(math.exp(log_born_maverick), 1.0),
        typical_branch_count=typical_count,
        hoeffding_bound=2.0 * math.exp(-2.0 * n * epsilon * epsilon),
        log_counting_maverick_fraction=log_count_maverick,
        log_born_maverick_weight=log_born_maverick,
        log_counting_typical_fraction=log_count_typical,
        log_born_typical_weight=log_born_typical,
    )


def everett_limit_scan(
    p: float, epsilon: float, n_values: Sequence[int]
) -> list[MeasureReport]:
    """Analytic reports across an ascending list of spin counts.

    As n grows the Born weight of the maverick set dies exponentially while,
    for p away from one half, the counting measure concentrates on it: the
    two measures disagree about almost every observer.
    """
    ns = list(n_values)
    if not ns:
        raise ValidationError("n_values must be nonempty")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValidationError(f"n_values must be strictly ascending, got {ns}")
    return [measure_report_analytic(p, n, epsilon) for n in ns]
