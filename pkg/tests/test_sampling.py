import math

import numpy as np
import pytest
from scipy import stats

from manyworlds.branches import MaverickCriterion, measure_report_analytic
from manyworlds.errors import ValidationError
from manyworlds.measurement import SpinPreparation
from manyworlds.sampling import (
    SampleRun,
    _plus_count_per_trial,
    compare_runs,
    sample_born,
    sample_counting,
)

SEED = 0x5EED_0001


class TestSampleBorn:
    def test_deterministic_preparations(self):
        up = sample_born(SpinPreparation.from_probability(1.0), 8, 1000, SEED)
        assert up.plus_frequency == 1.0
        assert up.outcome_histogram == {8: 1000}
        down = sample_born(SpinPreparation.from_probability(0.0), 8, 1000, SEED)
        assert down.plus_frequency == 0.0
        assert down.outcome_histogram == {0: 1000}

    def test_frequency_within_four_sigma(self):
        n, trials, p = 10, 10**5, 0.3
        run = sample_born(SpinPreparation.from_probability(p), n, trials, SEED)
        sigma = math.sqrt(p * (1 - p) / (n * trials))
        assert abs(run.plus_frequency - p) < 4 * sigma

    def test_bit_exact_reproducibility(self):
        prep = SpinPreparation.from_probability(0.3)
        a = sample_born(prep, 10, 5000, SEED)
        b = sample_born(prep, 10, 5000, SEED)
        assert a == b
        c = sample_born(prep, 10, 5000, SEED + 1)
        assert c != a

    def test_histogram_sums_to_trials(self):
        run = sample_born(SpinPreparation.from_probability(0.42), 7, 12345, SEED)
        assert sum(run.outcome_histogram.values()) == 12345

    def test_histogram_matches_binomial_at_a_million_trials(self):
        # chi-square against binomial(n, p) at the 99.9% quantile; the fixed
        # seed is the flake guard
        n, trials, p = 10, 10**6, 0.3
        run = sample_born(SpinPreparation.from_probability(p), n, trials, SEED)
        expected = np.array(
            [math.comb(n, k) * p**k * (1 - p) ** (n - k) * trials for k in range(n + 1)]
        )
        observed = np.array([run.outcome_histogram.get(k, 0) for k in range(n + 1)])
        chi2 = float(np.sum((observed - expected) ** 2 / expected))
        assert chi2 < stats.chi2.ppf(0.999, df=n)

    def test_chunking_does_not_change_the_stream(self):
        # per-trial counter blocks: any batching over trials yields the same draws
        a = _plus_count_per_trial(0.3, 129, 401, SEED)
        gen = np.random.Generator(np.random.Philox(key=SEED))
        expected = np.count_nonzero(gen.random((401, 129)) < 0.3, axis=1)
        np.testing.assert_array_equal(a, expected)

    def test_validation(self):
        prep = SpinPreparation.from_probability(0.5)
        with pytest.raises(ValidationError):
            sample_born(prep, 0, 10, SEED)
        with pytest.raises(ValidationError):
            sample_born(prep, 1, 0, SEED)
        with pytest.raises(ValidationError):
            sample_born(prep, 1, 10, -1)
        with pytest.raises(ValidationError):
            sample_born(prep, 1, 10, 1 << 64)


class TestSampleCounting:
    def test_takes_no_preparation_and_centers_on_half(self):
        run = sample_counting(1, 10**5, SEED)
        sigma = math.sqrt(0.25 / 10**5)
        assert abs(run.plus_frequency - 0.5) < 4 * sigma

    def test_histogram_matches_fair_binomial(self):
        # chi-square against binomial(n, 1/2) at the 99.9% quantile; the fixed
        # seed makes the check deterministic
        n, trials = 10, 10**5
        run = sample_counting(n, trials, SEED)
        expected = np.array([math.comb(n, k) * 0.5**n * trials for k in range(n + 1)])
        observed = np.array([run.outcome_histogram.get(k, 0) for k in range(n + 1)])
        chi2 = float(np.sum((observed - expected) ** 2 / expected))
        assert chi2 < stats.chi2.ppf(0.999, df=n)

    def test_reproducibility(self):
        assert sample_counting(12, 4000, SEED) == sample_counting(12, 4000, SEED)

    def test_large_n_histogram_only(self):
        run = sample_counting(1000, 50, SEED)
        assert sum(run.outcome_histogram.values()) == 50
        assert all(0 <= k <= 1000 for k in run.outcome_histogram)


class TestSampleRunType:
    def test_rejects_inconsistent_histogram(self):
        with pytest.raises(ValidationError):
            SampleRun(
                mode="born",
                n=2,
                trials=5,
                seed=0,
                plus_frequency=0.5,
                outcome_histogram={0: 1},
            )

    def test_maverick_fraction_counts_outside_window(self):
        run = SampleRun(
            mode="born",
            n=10,
            trials=10,
            seed=0,
            plus_frequency=0.5,
            outcome_histogram={3: 2, 5: 5, 8: 3},
        )
        crit = MaverickCriterion(epsilon=0.2, p=0.5)
        assert run.maverick_fraction(crit) == pytest.approx(0.3)

    def test_json_dict_schema(self):
        run = sample_born(SpinPreparation.from_probability(0.3), 4, 100, SEED)
        data = run.to_dict()
        assert set(data) == {"mode", "n", "trials", "seed", "plus_frequency", "histogram"}
        assert data["histogram"] == sorted(data["histogram"])
        assert sum(count for _, count in data["histogram"]) == 100


class TestCompareRuns:
    def test_symmetric_distributions_agree(self):
        n, trials = 20, 10**5
        crit = MaverickCriterion(epsilon=0.1, p=0.5)
        born = sample_born(SpinPreparation.from_probability(0.5), n, trials, SEED)
        counting = sample_counting(n, trials, SEED + 1)
        result = compare_runs(born, counting, crit)
        sigma = 4 * math.sqrt(0.25 / trials)
        assert abs(result.born_empirical_maverick - result.counting_empirical_maverick) < 2 * sigma
        assert result.born_expected_maverick == pytest.approx(
            result.counting_expected_maverick, abs=1e-12
        )

    def test_skewed_preparation_matches_analytic_measures(self):
        n, trials, p, epsilon = 100, 10**4, 0.9, 0.05
        crit = MaverickCriterion(epsilon=epsilon, p=p)
        born = sample_born(SpinPreparation.from_probability(p), n, trials, SEED)
        counting = sample_counting(n, trials, SEED + 1)
        result = compare_runs(born, counting, crit)
        assert abs(result.born_zscore) < 4.0
        assert abs(result.counting_zscore) < 4.0
        report = measure_report_analytic(p, n, epsilon)
        assert result.born_expected_maverick == report.born_maverick_weight
        assert result.counting_expected_maverick == report.counting_maverick_fraction

    def test_counting_run_ignores_preparation_by_construction(self):
        # the counting sampler has no preparation argument at all; two runs
        # with the same seed agree no matter what the born run saw
        a = sample_counting(6, 1000, SEED)
        b = sample_counting(6, 1000, SEED)
        assert a == b

    def test_mismatched_n_rejected(self):
        born = sample_born(SpinPreparation.from_probability(0.5), 4, 10, SEED)
        counting = sample_counting(5, 10, SEED)
        with pytest.raises(ValidationError):
            compare_runs(born, counting, MaverickCriterion(epsilon=0.1, p=0.5))

    def test_swapped_modes_rejected(self):
        born = sample_born(SpinPreparation.from_probability(0.5), 4, 10, SEED)
        counting = sample_counting(4, 10, SEED)
        with pytest.raises(ValidationError):
            compare_runs(counting, born, MaverickCriterion(epsilon=0.1, p=0.5))
