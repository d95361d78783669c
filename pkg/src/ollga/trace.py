"""First-hitting-time instrumentation and fixed-target aggregation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class TraceSink:
    """Per-run record of when each fitness target was first reached.

    ``first_hit[v]`` is the evaluation count at which the parent fitness first
    satisfied f(x) >= v; ``lambda_at_hit[v]`` is the mutation offspring count
    of the iteration that produced it. Entries are written once and never
    overwritten.
    """

    __slots__ = ("first_hit", "lambda_at_hit", "_best")

    def __init__(self) -> None:
        self.first_hit: dict[int, int] = {}
        self.lambda_at_hit: dict[int, float] = {}
        self._best = -1

    def record_hit(self, fitness: int, evaluations: int, lambda1: float) -> None:
        """Fill every target in (previous fitness, fitness] not yet recorded."""
        if fitness <= self._best:
            return
        for v in range(self._best + 1, fitness + 1):
            self.first_hit[v] = evaluations
            self.lambda_at_hit[v] = lambda1
        self._best = fitness

    @property
    def best_fitness(self) -> int:
        return self._best


@dataclass(frozen=True)
class FixedTargetTable:
    """Per-target averages over a batch of runs.

    Arrays are indexed by target value 0..n; entries where no run reached the
    target are NaN (hit_count 0).
    """

    n: int
    runs: int
    avg_evals: np.ndarray
    hit_count: np.ndarray
    avg_lambda1: np.ndarray

    def covered(self) -> np.ndarray:
        """Boolean mask of targets reached by at least one run."""
        return self.hit_count > 0


def aggregate_fixed_target(traces, n: int) -> FixedTargetTable:
    """Average first-hit data per target over runs that reached the target."""
    traces = list(traces)
    if not traces:
        raise ValueError("at least one trace is required")
    sums = np.zeros(n + 1)
    lam_sums = np.zeros(n + 1)
    counts = np.zeros(n + 1, dtype=np.int64)
    for t in traces:
        for v, e in t.first_hit.items():
            sums[v] += e
            lam_sums[v] += t.lambda_at_hit[v]
            counts[v] += 1
    with np.errstate(invalid="ignore"):
        avg = np.where(counts > 0, sums / np.maximum(counts, 1), np.nan)
        avg_lam = np.where(counts > 0, lam_sums / np.maximum(counts, 1), np.nan)
    return FixedTargetTable(
        n=n, runs=len(traces), avg_evals=avg, hit_count=counts, avg_lambda1=avg_lam
    )
