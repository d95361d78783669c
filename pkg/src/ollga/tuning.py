"""Hyper-parameter search: exhaustive update-strength sweeps and a compact
iterated race with adaptive capping.

The racer samples a population of configurations, evaluates all alive
configurations on one shared, growing seed list (common random numbers, so
comparisons are paired), eliminates configurations that are significantly
worse than the incumbent by a paired Wilcoxon test, and then resamples the
next population around the survivors with a truncated-normal spread that is
halved every iteration. Runs are stopped early ("censored") once they exceed
kappa times the incumbent mean; censored runs are scored at that bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .algorithms import DynConfig, StaticConfig, run_dyn, run_static
from .analysis import success_rate, wilcoxon_signed_rank
from .operators import RandomSource, derive_seed, mix64, rng_from_seed


@dataclass(frozen=True)
class Param:
    """One tunable parameter: bounds and kind ("real" or "int")."""

    name: str
    lower: float
    upper: float
    kind: str = "real"

    def __post_init__(self) -> None:
        if self.kind not in ("real", "int"):
            raise ValueError(f"unknown parameter kind: {self.kind!r}")
        if self.lower > self.upper:
            raise ValueError(f"{self.name}: lower bound exceeds upper bound")
        if self.kind == "int" and (
            self.lower != int(self.lower) or self.upper != int(self.upper)
        ):
            raise ValueError(f"{self.name}: integer parameter needs integral bounds")


@dataclass(frozen=True)
class ParamSpace:
    params: tuple[Param, ...]

    def __post_init__(self) -> None:
        if not self.params:
            raise ValueError("parameter space must be nonempty")

    def sample_uniform(self, rng: RandomSource) -> dict[str, float]:
        out = {}
        for p in self.params:
            if p.lower == p.upper:
                out[p.name] = p.lower
            elif p.kind == "int":
                out[p.name] = float(rng.integers(int(p.lower), int(p.upper) + 1))
            else:
                out[p.name] = p.lower + (p.upper - p.lower) * rng.random()
        return out

    def sample_near(
        self, center: dict[str, float], spread_frac: float, rng: RandomSource
    ) -> dict[str, float]:
        """Truncated normal around `center`, sd = spread_frac * range per axis."""
        out = {}
        for p in self.params:
            if p.lower == p.upper:
                out[p.name] = p.lower
                continue
            sd = (p.upper - p.lower) * spread_frac
            while True:
                val = center[p.name] + sd * rng.standard_normal()
                if p.lower <= val <= p.upper:
                    break
            out[p.name] = float(round(val)) if p.kind == "int" else float(val)
        return out


@dataclass(frozen=True)
class SweepSpec:
    """Equally spaced (A, b) grid, runs per cell, and per-run budget."""

    a_count: int
    a_min: float
    a_max: float
    b_count: int
    b_min: float
    b_max: float
    runs: int
    n: int
    budget: int = 150_000
    display_cap: Optional[float] = None

    def __post_init__(self) -> None:
        if self.a_count < 1 or self.b_count < 1:
            raise ValueError("grid counts must be at least 1")
        if self.runs < 1 or self.budget < 1:
            raise ValueError("runs and budget must be at least 1")
        if not self.a_min > 1:
            raise ValueError("A values must exceed 1")
        if not (0 < self.b_min and self.b_max < 1):
            raise ValueError("b values must lie in (0, 1)")
        if self.a_min > self.a_max or self.b_min > self.b_max:
            raise ValueError("grid bounds are inverted")

    def a_values(self) -> np.ndarray:
        return np.linspace(self.a_min, self.a_max, self.a_count)

    def b_values(self) -> np.ndarray:
        return np.linspace(self.b_min, self.b_max, self.b_count)


@dataclass(frozen=True)
class SweepCell:
    A: float
    b: float
    success_rate: float
    mean_successful: float
    success_count: int
    runs: int


def _sweep_cell(args) -> SweepCell:
    a, bval, template, n, runs, budget, master_seed = args
    cfg = replace(template, A=a, b=bval)
    successful = []
    for i in range(runs):
        rng = rng_from_seed(derive_seed(master_seed, i))
        result = run_dyn(cfg, n, budget, rng)
        if result.success:
            successful.append(result.evaluations)
    mean = float(np.mean(successful)) if successful else float(budget)
    return SweepCell(
        A=float(a),
        b=float(bval),
        success_rate=success_rate(a, bval),
        mean_successful=mean,
        success_count=len(successful),
        runs=runs,
    )


def grid_sweep(
    spec: SweepSpec,
    cfg_template: DynConfig,
    master_seed: int,
    jobs: int = 1,
) -> list[SweepCell]:
    """Run every (A, b) grid cell on a common seed list.

    Cell means cover successful runs only; a cell with no successful run
    reports the budget as its mean. Sharing one seed list across cells makes
    the whole sweep deterministic and the cells directly comparable.
    """
    tasks = [
        (float(a), float(b), cfg_template, spec.n, spec.runs, spec.budget, master_seed)
        for a in spec.a_values()
        for b in spec.b_values()
    ]
    if jobs <= 1:
        return [_sweep_cell(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_cell, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))


# ---------------------------------------------------------------------------
# iterated racing


@dataclass
class Candidate:
    config_id: int
    params: dict[str, float]
    scores: list[float] = field(default_factory=list)
    censored: list[bool] = field(default_factory=list)

    def mean(self) -> float:
        return sum(self.scores) / len(self.scores) if self.scores else math.inf


@dataclass(frozen=True)
class AuditRow:
    iteration: int
    config_id: int
    params: dict[str, float]
    seed: int
    evaluations: float  # true evaluations consumed by this run
    censored: bool
    cap: int


@dataclass
class TunerState:
    alive: list[Candidate]
    spread_frac: float
    consumed: float
    cap_bound: int
    instances: int


@dataclass
class RaceResult:
    best: dict[str, float]
    best_mean: float
    best_id: int
    state: TunerState
    audit: list[AuditRow]
    warning: bool


# evaluate(params, seed, cap) -> (score, censored, evaluations_consumed)
EvaluateFn = Callable[[dict[str, float], int, int], tuple[float, bool, int]]


def race(
    space: ParamSpace,
    evaluate: EvaluateFn,
    *,
    total_eval_budget: float,
    run_budget: int,
    master_seed: int,
    population: int = 16,
    t_first: int = 5,
    signif: float = 0.05,
    kappa: float = 2.0,
    rounds_per_iteration: int = 25,
    max_instances: int = 40,
    min_alive: int = 4,
    iterations: int = 8,
) -> RaceResult:
    """Iterated race over `space` with budget measured in evaluations.

    Returns the surviving configuration with the lowest mean, the final
    tuner state, and an audit row for every run performed. If the budget ran
    out before any configuration gathered t_first instances, the result is
    flagged as a best-effort warning.
    """
    sampler = rng_from_seed(mix64(master_seed ^ 0xD1B54A32D192ED03))
    alive: list[Candidate] = []
    next_id = 0
    for _ in range(population):
        alive.append(Candidate(next_id, space.sample_uniform(sampler)))
        next_id += 1
    seeds: list[int] = []
    audit: list[AuditRow] = []
    consumed = 0.0
    spread = 1.0
    out_of_budget = False

    def cap_bound() -> int:
        means = [c.mean() for c in alive if c.scores]
        if not means:
            return run_budget
        return max(1, min(run_budget, math.ceil(kappa * min(means))))

    def run_one(cand: Candidate, t: int, iteration: int) -> bool:
        nonlocal consumed
        if consumed >= total_eval_budget:
            return False
        cap = cap_bound()
        score, was_censored, cost = evaluate(cand.params, seeds[t], cap)
        consumed += cost
        cand.scores.append(float(score))
        cand.censored.append(bool(was_censored))
        audit.append(
            AuditRow(iteration, cand.config_id, dict(cand.params), seeds[t], cost, was_censored, cap)
        )
        return True

    def eliminate() -> None:
        incumbent = min(alive, key=Candidate.mean)
        kept = []
        for cand in alive:
            if cand is incumbent or cand.mean() <= incumbent.mean():
                kept.append(cand)
                continue
            diffs = np.asarray(cand.scores) - np.asarray(incumbent.scores)
            if np.count_nonzero(diffs) < 5:
                kept.append(cand)
                continue
            report = wilcoxon_signed_rank(cand.scores, incumbent.scores)
            if report.p_value >= signif:
                kept.append(cand)
        alive[:] = kept

    t = 0
    for iteration in range(iterations):
        if iteration > 0:
            spread = 0.5**iteration
            survivors = list(alive)
            while len(alive) < population:
                parent = survivors[int(sampler.integers(len(survivors)))]
                alive.append(
                    Candidate(next_id, space.sample_near(parent.params, spread, sampler))
                )
                next_id += 1
            # newcomers catch up on the shared seed list before racing resumes
            for cand in alive:
                while len(cand.scores) < t:
                    if not run_one(cand, len(cand.scores), iteration):
                        out_of_budget = True
                        break
                if out_of_budget:
                    break
            if out_of_budget:
                alive[:] = [c for c in alive if len(c.scores) == t]
                break
        rounds = 0
        while rounds < rounds_per_iteration and t < max_instances:
            if len(alive) <= min_alive and t >= t_first:
                break
            if consumed >= total_eval_budget:
                out_of_budget = True
                break
            seeds.append(derive_seed(master_seed, t))
            finished = []
            for cand in alive:
                if not run_one(cand, t, iteration):
                    out_of_budget = True
                    break
                finished.append(cand)
            if out_of_budget:
                # roll the partial round back so all alive share one seed list
                for cand in finished:
                    cand.scores.pop()
                    cand.censored.pop()
                seeds.pop()
                break
            t += 1
            rounds += 1
            if t >= t_first and len(alive) > 1:
                eliminate()
        if out_of_budget:
            break
        # once the instance cap is reached, newcomers still face elimination
        if t >= t_first and len(alive) > 1:
            eliminate()

    ranked = [c for c in alive if len(c.scores) >= t_first]
    warning = not ranked
    if warning:
        ranked = [c for c in alive if c.scores] or alive
    best = min(ranked, key=Candidate.mean)
    state = TunerState(alive, spread, consumed, cap_bound(), t)
    return RaceResult(dict(best.params), best.mean(), best.config_id, state, audit, warning)


def _merge_dyn(base: DynConfig, params: dict[str, float]) -> DynConfig:
    allowed = {"alpha", "beta", "gamma", "A", "b"}
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"unknown dyn parameters: {sorted(unknown)}")
    return replace(base, **params)


def _merge_static(base: StaticConfig, params: dict[str, float]) -> StaticConfig:
    allowed = {"lambda1", "lambda2", "k", "c"}
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"unknown static parameters: {sorted(unknown)}")
    merged = {k: (int(v) if k != "c" else float(v)) for k, v in params.items()}
    return replace(base, **merged)


def make_algorithm_target(
    family: str,
    n: int,
    base_dyn: Optional[DynConfig] = None,
    base_static: Optional[StaticConfig] = None,
) -> EvaluateFn:
    """Evaluation function scoring a configuration by evaluations to optimum.

    Unsuccessful runs are censored at the cap and scored at that bound.
    """
    if family == "dyn":
        base = base_dyn if base_dyn is not None else DynConfig(1, 1, 1, (3 / 2) ** 0.25, 2 / 3)

        def evaluate(params, seed, cap):
            result = run_dyn(_merge_dyn(base, params), n, cap, rng_from_seed(seed))
            if result.success:
                return float(result.evaluations), False, result.evaluations
            return float(cap), True, result.evaluations

    elif family == "static":
        if base_static is None:
            raise ValueError("static tuning needs a base static configuration")

        def evaluate(params, seed, cap):
            result = run_static(
                _merge_static(base_static, params), n, cap, rng_from_seed(seed)
            )
            if result.success:
                return float(result.evaluations), False, result.evaluations
            return float(cap), True, result.evaluations

    else:
        raise ValueError(f"unknown algorithm family: {family!r}")
    return evaluate


def race_tune(
    space: ParamSpace,
    family: str,
    n: int,
    run_budget: int,
    total_eval_budget: float,
    master_seed: int,
    base_dyn: Optional[DynConfig] = None,
    base_static: Optional[StaticConfig] = None,
    **race_options,
) -> RaceResult:
    """Race the given algorithm family's hyper-parameters on OneMax."""
    if family == "static" and base_static is None:
        missing = {"lambda1", "lambda2", "k", "c"} - {p.name for p in space.params}
        if missing:
            raise ValueError(
                f"static tuning without a base configuration must tune all four "
                f"parameters; missing {sorted(missing)}"
            )
        base_static = StaticConfig(1, 1, 1, 0.5)  # fully overwritten per candidate
    evaluate = make_algorithm_target(family, n, base_dyn, base_static)
    return race(
        space,
        evaluate,
        total_eval_budget=total_eval_budget,
        run_budget=run_budget,
        master_seed=master_seed,
        **race_options,
    )
