"""Derived statistics: run summaries, reference formulas, fixed-target
gradients and crossing points, and paired significance tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import stdtr

from .trace import FixedTargetTable

SIGNIFICANCE_LEVELS = (0.05, 0.01, 0.001)


@dataclass(frozen=True)
class RunStats:
    count: int
    mean: float
    q20: float
    q25: float
    q50: float
    q75: float
    q98: float
    rsd: float  # percent: 100 * sample sd / mean
    normalized_mean: float  # mean / n


@dataclass(frozen=True)
class TestReport:
    statistic: float
    p_value: float
    significant_at: tuple[float, ...]
    direction: int  # sign of the a-minus-b effect


def _levels(p: float) -> tuple[float, ...]:
    return tuple(a for a in SIGNIFICANCE_LEVELS if p < a)


def summarize(samples, n: int) -> RunStats:
    """Mean, interpolated quantiles, relative standard deviation, mean/n."""
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ValueError("at least one sample is required")
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    q20, q25, q50, q75, q98 = (
        float(v) for v in np.quantile(arr, [0.20, 0.25, 0.50, 0.75, 0.98])
    )
    rsd = 100.0 * sd / mean if mean != 0 else 0.0
    return RunStats(int(arr.size), mean, q20, q25, q50, q75, q98, rsd, mean / n)


def success_rate(A: float, b: float) -> float:
    """Stationarity point of the multiplicative update: 1 - ln(b)/ln(A).

    The parameter lambda is stable when one out of this many iterations
    succeeds; (A, b) = ((3/2)^(1/4), 2/3) gives exactly 5.
    """
    if not A > 1:
        raise ValueError(f"A must exceed 1, got {A}")
    if not 0 < b < 1:
        raise ValueError(f"b must lie in (0, 1), got {b}")
    return 1.0 - math.log(b) / math.log(A)


def lambda_star(n: int, fitness: int) -> float:
    """Fitness-dependent reference offspring size sqrt(n / (n - fitness))."""
    if not 0 <= fitness < n:
        raise ValueError(f"fitness must lie in [0, {n}), got {fitness}")
    return math.sqrt(n / (n - fitness))


def _defined_block(values: np.ndarray) -> tuple[int, int]:
    """Start and end (inclusive) of the contiguous defined prefix block."""
    defined = np.flatnonzero(~np.isnan(values))
    if defined.size == 0:
        raise ValueError("table has no defined targets")
    start = int(defined[0])
    end = start
    while end + 1 <= values.size - 1 and not math.isnan(values[end + 1]):
        end += 1
    return start, end


def _moving_average(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average of exact width `window`, truncated at edges."""
    m = values.size
    h_lo = (window - 1) // 2
    h_hi = window // 2
    csum = np.concatenate(([0.0], np.cumsum(values)))
    idx = np.arange(m)
    lo = np.maximum(0, idx - h_lo)
    hi = np.minimum(m, idx + h_hi + 1)
    return (csum[hi] - csum[lo]) / (hi - lo)


def ft_gradient(table: FixedTargetTable, window: int = 25) -> np.ndarray:
    """Smoothed slope of average first-hit evaluations per fitness unit.

    Centered finite differences over the contiguous covered target range,
    then a moving average of width `window`. Entries outside the interior
    of the covered range are NaN.
    """
    if window < 1:
        raise ValueError(f"window must be at least 1, got {window}")
    start, end = _defined_block(table.avg_evals)
    if end - start + 1 < 3:
        raise ValueError("gradient needs at least three consecutive targets")
    vals = table.avg_evals[start : end + 1]
    grad = (vals[2:] - vals[:-2]) / 2.0
    smooth = _moving_average(grad, window)
    out = np.full(table.n + 1, np.nan)
    out[start + 1 : end] = smooth
    return out


def ft_crossing(
    a: FixedTargetTable,
    b: FixedTargetTable,
    mode: str = "first_hit",
    window: int = 25,
):
    """Smallest target from which a stays at or below b for every later target.

    mode "first_hit" compares average first-hit evaluations, mode "gradient"
    compares smoothed gradients. Returns None when no such target exists.
    """
    if mode == "first_hit":
        va, vb = a.avg_evals, b.avg_evals
    elif mode == "gradient":
        va, vb = ft_gradient(a, window), ft_gradient(b, window)
    else:
        raise ValueError(f"unknown crossing mode: {mode!r}")
    sa, ea = _defined_block(va)
    sb, eb = _defined_block(vb)
    start, end = max(sa, sb), min(ea, eb)
    if start > end:
        raise ValueError("tables share no targets")
    ok = va[start : end + 1] <= vb[start : end + 1]
    if not ok[-1]:
        return None
    bad = np.flatnonzero(~ok)
    return start if bad.size == 0 else start + int(bad[-1]) + 1


def paired_t_test(a, b) -> TestReport:
    """Two-sided paired Student t-test on common-seed samples."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("samples must be one-dimensional and of equal length")
    m = a.size
    if m < 2:
        raise ValueError("paired t-test needs at least 2 pairs")
    d = a - b
    md = float(d.mean())
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        if md == 0.0:
            return TestReport(0.0, 1.0, (), 0)
        stat = math.inf if md > 0 else -math.inf
        return TestReport(stat, 0.0, SIGNIFICANCE_LEVELS, 1 if md > 0 else -1)
    t = md / (sd / math.sqrt(m))
    p = 2.0 * float(stdtr(m - 1, -abs(t)))
    return TestReport(t, p, _levels(p), int(np.sign(md)))


def _ranks_with_ties(values: np.ndarray) -> np.ndarray:
    """Ranks 1..m with tied values receiving their average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=float)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _wilcoxon_exact_cdf(double_ranks: np.ndarray, w2: int) -> float:
    """P(rank sum of a uniform sign assignment <= w2), in doubled-rank units."""
    total = int(double_ranks.sum())
    counts = np.zeros(total + 1, dtype=float)
    counts[0] = 1.0
    for r in double_ranks:
        r = int(r)
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: counts.size - r]
        counts += shifted
    return float(counts[: w2 + 1].sum()) / (2.0 ** double_ranks.size)


def wilcoxon_signed_rank(a, b) -> TestReport:
    """Two-sided Wilcoxon signed-rank test on common-seed samples.

    Zero differences are dropped. Exact null distribution below 20 retained
    pairs, tie-corrected normal approximation (no continuity correction)
    from 20 on. All-zero differences yield the degenerate p = 1 report.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("samples must be one-dimensional and of equal length")
    d = a - b
    d = d[d != 0]
    m = d.size
    if m == 0:
        return TestReport(0.0, 1.0, (), 0)
    if m < 5:
        raise ValueError(
            f"need at least 5 nonzero differences, got {m}"
        )
    ranks = _ranks_with_ties(np.abs(d))
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w = min(w_plus, w_minus)
    direction = int(np.sign(w_plus - w_minus))
    if m < 20:
        double_ranks = np.rint(2.0 * ranks).astype(int)
        p = 2.0 * _wilcoxon_exact_cdf(double_ranks, int(round(2.0 * w)))
    else:
        mu = m * (m + 1) / 4.0
        var = m * (m + 1) * (2 * m + 1) / 24.0
        _, tie_counts = np.unique(np.abs(d), return_counts=True)
        var -= float((tie_counts**3 - tie_counts).sum()) / 48.0
        if var <= 0:
            return TestReport(w, 1.0, (), direction)
        z = (w - mu) / math.sqrt(var)
        p = math.erfc(abs(z) / math.sqrt(2.0))
    p = min(1.0, p)
    return TestReport(w, p, _levels(p), direction)
