import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stegoscope.rng import generator
from stegoscope.stats import (
    Confusion,
    acc_f1,
    aggregate,
    betainc_regularized,
    mann_whitney_u,
    welch_t,
)

scipy_stats = pytest.importorskip("scipy.stats")


class TestAccF1:
    def test_worked_example(self):
        acc, f1 = acc_f1(Confusion(tp=3, fp=1, tn=4, fn=2))
        assert acc == pytest.approx(0.7)
        assert f1 == pytest.approx(2 * 0.75 * 0.6 / (0.75 + 0.6))

    def test_all_cover_collapse(self):
        acc, f1 = acc_f1(Confusion(tp=0, fp=0, tn=5, fn=5))
        assert acc == 0.5
        assert f1 == 0.0

    def test_perfect(self):
        acc, f1 = acc_f1(Confusion(tp=5, fp=0, tn=5, fn=0))
        assert acc == 1.0 and f1 == 1.0

    def test_from_predictions(self):
        conf = Confusion.from_predictions([1, 1, 0, 0], [1, 0, 0, 1])
        assert (conf.tp, conf.fp, conf.tn, conf.fn) == (1, 1, 1, 1)

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            Confusion(tp=-1, fp=0, tn=0, fn=0)


class TestBetainc:
    def test_endpoints(self):
        assert betainc_regularized(2.0, 3.0, 0.0) == 0.0
        assert betainc_regularized(2.0, 3.0, 1.0) == 1.0

    def test_symmetry(self):
        for a, b, x in [(1.5, 2.5, 0.3), (4.0, 0.5, 0.7), (10.0, 10.0, 0.42)]:
            assert betainc_regularized(a, b, x) == pytest.approx(
                1.0 - betainc_regularized(b, a, 1.0 - x), abs=1e-12
            )

    def test_against_scipy(self):
        rng = generator(7, "betainc")
        for _ in range(100):
            a = float(rng.uniform(0.2, 20.0))
            b = float(rng.uniform(0.2, 20.0))
            x = float(rng.uniform(0.0, 1.0))
            assert betainc_regularized(a, b, x) == pytest.approx(
                float(scipy_stats.beta.cdf(x, a, b)), abs=1e-10
            )


class TestWelch:
    def test_against_scipy_random_pairs(self):
        rng = generator(11, "welch")
        for _ in range(50):
            n = int(rng.integers(3, 30))
            m = int(rng.integers(3, 30))
            a = rng.normal(rng.uniform(-2, 2), rng.uniform(0.5, 3), size=n)
            b = rng.normal(rng.uniform(-2, 2), rng.uniform(0.5, 3), size=m)
            t, p = welch_t(a.tolist(), b.tolist())
            ref = scipy_stats.ttest_ind(a, b, equal_var=False)
            assert t == pytest.approx(float(ref.statistic), abs=1e-9)
            assert p == pytest.approx(float(ref.pvalue), abs=1e-6)

    def test_identical_constant_samples(self):
        t, p = welch_t([0.5, 0.5, 0.5], [0.5, 0.5])
        assert t == 0.0
        assert p == 1.0

    def test_constant_samples_different_means(self):
        _, p = welch_t([1.0, 1.0], [2.0, 2.0])
        assert p == 0.0

    def test_symmetry(self):
        a = [0.1, 0.4, 0.35]
        b = [0.9, 0.7, 0.6, 0.8]
        t_ab, p_ab = welch_t(a, b)
        t_ba, p_ba = welch_t(b, a)
        assert t_ab == pytest.approx(-t_ba)
        assert p_ab == pytest.approx(p_ba)

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            welch_t([1.0], [2.0, 3.0])


def brute_force_mwu(a, b):
    """Independent exact two-sided Mann-Whitney p via full enumeration."""
    combined = sorted(a) + sorted(b)
    # fractional ranks over the pooled sample
    pooled = sorted(combined)
    ranks = {}
    i = 0
    rank_list = [0.0] * len(pooled)
    while i < len(pooled):
        j = i
        while j < len(pooled) and pooled[j] == pooled[i]:
            j += 1
        avg = (i + 1 + j) / 2.0
        for k in range(i, j):
            rank_list[k] = avg
        i = j

    def u_min_for(indices):
        n, m = len(a), len(b)
        r1 = sum(rank_list[k] for k in indices)
        u1 = r1 - n * (n + 1) / 2.0
        return min(u1, n * m - u1)

    observed = None
    # observed u_min: ranks of the first sample within the pooled order
    used = [False] * len(pooled)
    obs_idx = []
    for value in sorted(a):
        for k, pv in enumerate(pooled):
            if not used[k] and pv == value:
                used[k] = True
                obs_idx.append(k)
                break
    observed = u_min_for(obs_idx)
    total = 0
    at_most = 0
    for subset in itertools.combinations(range(len(pooled)), len(a)):
        total += 1
        if u_min_for(subset) <= observed + 1e-9:
            at_most += 1
    return observed, at_most / total


class TestMannWhitney:
    def test_worked_example(self):
        u, p = mann_whitney_u([1.0, 2.0], [3.0, 4.0])
        assert u == 0.0
        assert p == pytest.approx(1.0 / 3.0)

    def test_identical_samples(self):
        _, p = mann_whitney_u([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert p == 1.0

    def test_exact_matches_brute_force(self):
        rng = generator(13, "mwu-exact")
        cases = 0
        for n in range(2, 7):
            for m in range(2, 7):
                if n + m > 12:
                    continue
                for _ in range(3):
                    a = np.round(rng.uniform(0, 5, size=n), 1).tolist()
                    b = np.round(rng.uniform(0, 5, size=m), 1).tolist()
                    u, p = mann_whitney_u(a, b)
                    bu, bp = brute_force_mwu(a, b)
                    assert u == pytest.approx(bu), (a, b)
                    assert p == pytest.approx(bp), (a, b)
                    cases += 1
        assert cases >= 50

    def test_exact_against_scipy_at_boundary(self):
        rng = generator(17, "mwu-approx")
        for _ in range(10):
            a = rng.normal(0.0, 1.0, size=10).tolist()
            b = rng.normal(0.5, 1.0, size=10).tolist()
            _, p_exact = mann_whitney_u(a, b)
            ref = scipy_stats.mannwhitneyu(
                a, b, alternative="two-sided", method="exact"
            )
            assert p_exact == pytest.approx(float(ref.pvalue), abs=1e-9)

    def test_large_sample_against_scipy(self):
        rng = generator(19, "mwu-large")
        a = rng.normal(0.0, 1.0, size=30).tolist()
        b = rng.normal(0.3, 1.0, size=25).tolist()
        _, p = mann_whitney_u(a, b)
        ref = scipy_stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
        assert p == pytest.approx(float(ref.pvalue), abs=1e-6)

    @given(
        st.lists(st.floats(-5, 5), min_size=2, max_size=8),
        st.lists(st.floats(-5, 5), min_size=2, max_size=8),
    )
    @settings(max_examples=50, deadline=None)
    def test_p_in_unit_interval_and_symmetric(self, a, b):
        u_ab, p_ab = mann_whitney_u(a, b)
        u_ba, p_ba = mann_whitney_u(b, a)
        assert 0.0 <= p_ab <= 1.0
        assert u_ab == pytest.approx(u_ba)
        assert p_ab == pytest.approx(p_ba)


class TestAggregate:
    def test_worked_example(self):
        mean, std = aggregate([0.8, 1.0])
        assert mean == pytest.approx(0.9)
        assert std == pytest.approx(math.sqrt(0.02))

    def test_single_value(self):
        mean, std = aggregate([0.7])
        assert mean == 0.7
        assert std == 0.0

    def test_permutation_invariant(self):
        values = [0.1, 0.9, 0.4, 0.6]
        assert aggregate(values) == aggregate(list(reversed(values)))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])
