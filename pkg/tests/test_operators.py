import math

import numpy as np
import pytest
from helpers import lumped_chisquare
from scipy import stats

from ollga import (
    BitString,
    ConditionalBinomial,
    best_of_uar,
    crossover_biased,
    derive_seed,
    hamming,
    mutate_exact,
    nint,
    onemax,
    rng_from_seed,
)


def test_nint_examples():
    assert nint(2.49) == 2
    assert nint(2.5) == 3  # halves round up
    assert nint(3.0) == 3
    assert nint(0.0) == 0
    assert nint(0.5) == 1
    with pytest.raises(ValueError):
        nint(-0.1)


def test_seed_derivation_distinct_and_stable():
    seeds = [derive_seed(12345, i) for i in range(1000)]
    assert len(set(seeds)) == 1000
    assert seeds[0] == derive_seed(12345, 0)
    assert all(0 <= s < 2**64 for s in seeds)
    with pytest.raises(ValueError):
        derive_seed(1, -1)


class TestConditionalBinomial:
    def test_pmf_analytic_n2(self):
        # P(1) = 2pq / (1-q^2), P(2) = p^2 / (1-q^2); at p=1/2: 2/3 and 1/3
        d = ConditionalBinomial(2, 0.5)
        assert d.pmf(1) == pytest.approx(2 / 3)
        assert d.pmf(2) == pytest.approx(1 / 3)
        assert d.pmf(0) == 0.0
        assert d.pmf(3) == 0.0

    @pytest.mark.parametrize("n,p", [(2, 0.5), (10, 0.1), (100, 0.05), (7, 0.9)])
    def test_pmf_sums_to_one(self, n, p):
        d = ConditionalBinomial(n, p)
        assert sum(d.pmf(k) for k in range(1, n + 1)) == pytest.approx(1.0)

    def test_n1_always_one(self):
        d = ConditionalBinomial(1, 0.3)
        assert d.pmf(1) == pytest.approx(1.0)
        rng = rng_from_seed(5)
        assert all(d.sample(rng) == 1 for _ in range(100))

    def test_conditional_mean_formula(self):
        d = ConditionalBinomial(100, 0.05)
        assert d.mean() == pytest.approx(100 * 0.05 / (1 - 0.95**100))
        assert d.mean() == pytest.approx(5.0298, abs=5e-4)

    def test_empirical_mean_matches_formula(self):
        d = ConditionalBinomial(100, 0.05)
        rng = rng_from_seed(6)
        draws = d.sample(rng, size=200_000)
        assert draws.min() >= 1
        assert float(draws.mean()) == pytest.approx(d.mean(), abs=0.02)

    def test_chi_square_small(self):
        # smoke-scale version of the acceptance-level goodness-of-fit check
        d = ConditionalBinomial(10, 0.1)
        rng = rng_from_seed(7)
        draws = d.sample(rng, size=100_000)
        counts = np.bincount(draws, minlength=11)[1:]
        expected = np.array([d.pmf(k) for k in range(1, 11)]) * draws.size
        assert lumped_chisquare(counts, expected) > 0.001

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            ConditionalBinomial(5, 0.0)
        with pytest.raises(ValueError):
            ConditionalBinomial(5, 1.0)
        with pytest.raises(ValueError):
            ConditionalBinomial(0, 0.5)


class TestMutateExact:
    def test_exact_radius(self):
        rng = rng_from_seed(8)
        x = BitString.random(40, rng)
        for ell in (1, 3, 17, 40):
            y = mutate_exact(x, ell, rng)
            assert hamming(x, y) == ell

    def test_full_flip_is_complement(self):
        rng = rng_from_seed(9)
        x = BitString.random(12, rng)
        assert mutate_exact(x, 12, rng) == x.complement()

    def test_never_returns_input(self):
        rng = rng_from_seed(10)
        x = BitString.random(9, rng)
        assert all(mutate_exact(x, 1, rng) != x for _ in range(200))

    def test_domain_errors(self):
        rng = rng_from_seed(11)
        x = BitString([0, 1, 0, 1])
        with pytest.raises(ValueError):
            mutate_exact(x, 0, rng)
        with pytest.raises(ValueError):
            mutate_exact(x, 5, rng)

    def test_pair_uniformity_n4(self):
        # n=4, ell=2: all 6 position pairs equally likely
        rng = rng_from_seed(12)
        x = BitString([0, 0, 0, 0])
        counts = {}
        trials = 60_000
        for _ in range(trials):
            y = mutate_exact(x, 2, rng)
            key = tuple(np.flatnonzero(y.bits))
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 6
        chi2, p = stats.chisquare(list(counts.values()))
        assert p > 0.001


class TestCrossoverBiased:
    def test_equal_parents_fixed_point(self):
        rng = rng_from_seed(13)
        x = BitString.random(25, rng)
        for c in (0.01, 0.5, 0.99):
            assert crossover_biased(x, x, c, rng) == x

    def test_agreeing_positions_are_fixed_exhaustive(self):
        # every difference pattern for n <= 8; uint masks enumerate the xp side
        rng = rng_from_seed(14)
        for n in range(1, 9):
            x = BitString.random(n, rng)
            for pattern in range(2**n):
                flip = np.array([(pattern >> i) & 1 for i in range(n)], dtype=np.uint8)
                xp = BitString(x.bits ^ flip)
                out = crossover_biased(x, xp, 0.3, rng)
                agree = x.bits == xp.bits
                assert np.array_equal(out.bits[agree], x.bits[agree])

    def test_expected_take_count(self):
        rng = rng_from_seed(15)
        x = BitString([0] * 50)
        xp = BitString([1] * 50)
        c = 0.3
        total = sum(onemax(crossover_biased(x, xp, c, rng)) for _ in range(20_000))
        assert total / 20_000 == pytest.approx(c * 50, rel=0.02)

    def test_all_copy_probability(self):
        # d=10 differing positions, c=0.01: P(output == x) = 0.99^10
        rng = rng_from_seed(16)
        x = BitString([0] * 10)
        xp = BitString([1] * 10)
        hits = sum(crossover_biased(x, xp, 0.01, rng) == x for _ in range(30_000))
        assert hits / 30_000 == pytest.approx(0.99**10, abs=0.006)

    def test_domain_errors(self):
        rng = rng_from_seed(17)
        with pytest.raises(ValueError):
            crossover_biased(BitString([0, 1]), BitString([0, 1, 1]), 0.5, rng)
        with pytest.raises(ValueError):
            crossover_biased(BitString([0, 1]), BitString([1, 1]), 0.0, rng)


class TestBestOfUar:
    def test_single_candidate(self):
        rng = rng_from_seed(18)
        assert best_of_uar([("a", 3)], rng) == ("a", 3)

    def test_unique_maximum(self):
        rng = rng_from_seed(19)
        cands = [("a", 5), ("b", 2), ("c", 1)]
        assert all(best_of_uar(cands, rng) == ("a", 5) for _ in range(50))

    def test_tie_uniformity(self):
        rng = rng_from_seed(20)
        cands = [("a", 3), ("b", 7), ("c", 7)]
        trials = 40_000
        wins = {"b": 0, "c": 0}
        for _ in range(trials):
            name, _ = best_of_uar(cands, rng)
            assert name != "a"
            wins[name] += 1
        # within 3 standard deviations of the fair coin
        sd = math.sqrt(trials * 0.25)
        assert abs(wins["b"] - trials / 2) < 3 * sd

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            best_of_uar([], rng_from_seed(21))


def test_bin_gt0_matches_rejection_definition():
    # the sampler and the pmf must describe the same law (dual route)
    d = ConditionalBinomial(6, 0.25)
    rng = rng_from_seed(22)
    draws = d.sample(rng, size=150_000)
    counts = np.bincount(draws, minlength=7)[1:]
    expected = np.array([d.pmf(k) for k in range(1, 7)]) * draws.size
    assert lumped_chisquare(counts, expected) > 0.001


def test_mutate_exact_matches_hypergeometric_overlap():
    # overlap of the flipped set with the one-bits follows the hypergeometric
    # law the run loops rely on
    rng = rng_from_seed(23)
    n, ones, ell = 12, 7, 5
    x = BitString([1] * ones + [0] * (n - ones))
    overlaps = []
    for _ in range(40_000):
        y = mutate_exact(x, ell, rng)
        overlaps.append(int((x.bits & (x.bits ^ y.bits)).sum()))
    counts = np.bincount(overlaps, minlength=ell + 1)
    expected = stats.hypergeom.pmf(np.arange(ell + 1), n, ones, ell) * len(overlaps)
    assert lumped_chisquare(counts, expected) > 0.001
