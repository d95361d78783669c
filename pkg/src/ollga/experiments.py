"""Batches of independent seeded runs, optionally spread over worker processes."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat
from typing import Optional

from .algorithms import (
    DynConfig,
    RunResult,
    StaticConfig,
    run_dyn,
    run_rls,
    run_static,
    run_switch,
)
from .operators import derive_seed, rng_from_seed
from .trace import TraceSink

ALGORITHMS = ("dyn", "static", "rls", "switch")


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce a batch of runs."""

    algo: str
    n: int
    runs: int
    budget: int = 150_000
    master_seed: int = 1
    dyn: Optional[DynConfig] = None
    static: Optional[StaticConfig] = None
    switch_target: Optional[int] = None
    trace: bool = False
    record_lambda: bool = False

    def __post_init__(self) -> None:
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}; expected one of {ALGORITHMS}")
        if self.runs < 1:
            raise ValueError(f"runs must be at least 1, got {self.runs}")
        if self.algo in ("dyn", "switch") and self.dyn is None:
            raise ValueError(f"algorithm {self.algo!r} needs a dyn configuration")
        if self.algo == "static" and self.static is None:
            raise ValueError("algorithm 'static' needs a static configuration")
        if self.algo == "switch" and self.switch_target is None:
            raise ValueError("algorithm 'switch' needs a switch target")


def execute_run(spec: ExperimentSpec, index: int) -> tuple[int, RunResult]:
    """Run number `index` of the batch; the seed is derived, not sequential."""
    seed = derive_seed(spec.master_seed, index)
    rng = rng_from_seed(seed)
    sink = TraceSink() if spec.trace else None
    if spec.algo == "dyn":
        result = run_dyn(spec.dyn, spec.n, spec.budget, rng, sink, spec.record_lambda)
    elif spec.algo == "static":
        result = run_static(spec.static, spec.n, spec.budget, rng, sink)
    elif spec.algo == "rls":
        result = run_rls(spec.n, spec.budget, rng, sink)
    else:
        result = run_switch(
            spec.switch_target, spec.dyn, spec.n, spec.budget, rng, sink, spec.record_lambda
        )
    return seed, result


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list[tuple[int, RunResult]]:
    """All runs of the batch, ordered by run index regardless of completion order."""
    if jobs <= 1:
        return [execute_run(spec, i) for i in range(spec.runs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, spec.runs // (8 * jobs))
        return list(pool.map(execute_run, repeat(spec), range(spec.runs), chunksize=chunk))
