"""Shared oracle utilities for the test suite."""

import numpy as np
from scipy import stats


def lumped_chisquare(counts, expected, min_expected=5.0):
    """Goodness-of-fit p-value with low-expectation bins lumped together."""
    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(expected, dtype=float)
    keep = expected >= min_expected
    if not keep.all():
        counts = np.append(counts[keep], counts[~keep].sum())
        expected = np.append(expected[keep], expected[~keep].sum())
    # guard tiny normalization drift so scipy's sum check cannot trip
    expected = expected * counts.sum() / expected.sum()
    return stats.chisquare(counts, expected).pvalue


def rls_expected_evaluations(n):
    """Level-sum oracle: 1 + E[ sum_{i=f0}^{n-1} n/(n-i) ], f0 ~ Binomial(n, 1/2).

    Whenever the current fitness is i, the waiting time for the single-bit
    flip to hit one of the n - i zero positions has mean n/(n - i).
    """
    harmonic = np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, n + 1))))
    pmf = stats.binom.pmf(np.arange(n + 1), n, 0.5)
    cost = n * harmonic[n - np.arange(n + 1)]
    return 1.0 + float((pmf * cost).sum())


def rls_gradient_oracle(n, v):
    """Expected evaluations per fitness unit for single-bit local search."""
    return n / (n - v)


def synthetic_convex_target(x_opt=3.0, y_opt=7.0, base=1000.0, noise=40.0):
    """Noisy convex tuning target with a known optimum.

    Returns (evaluate, true_value): evaluate has the racing-tuner signature
    (params, seed, cap) -> (score, censored, cost); the noise is bounded and
    depends on both the instance seed and the configuration.
    """
    from ollga.operators import mix64, rng_from_seed

    def true_value(params):
        dx = params["x"] - x_opt
        dy = params["y"] - y_opt
        return base * (1.0 + 0.1 * (dx * dx + dy * dy))

    def evaluate(params, seed, cap):
        salt = hash((round(params["x"], 12), round(params["y"], 12)))
        rng = rng_from_seed(mix64(seed ^ (salt & (2**64 - 1))))
        score = true_value(params) + noise * (2.0 * rng.random() - 1.0)
        if score >= cap:
            return float(cap), True, float(cap)
        return float(score), False, float(score)

    return evaluate, true_value
