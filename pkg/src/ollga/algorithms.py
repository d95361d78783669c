"""The four OneMax optimizers and their evaluation-accounting rules.

Run loops operate in fitness space. OneMax is coordinate-symmetric and both
variation operators are unbiased, so conditioned on its fitness the parent is
always uniformly distributed over strings of that weight, and every
observable quantity (charged evaluations, success, fitness and lambda
trajectories) depends on the parent only through its fitness:

  * a mutant flipping a uniform ``ell``-subset flips a hypergeometric number
    k of one-bits and has fitness f(x) + ell - 2k;
  * crossover offspring differ from the parent only inside the mutant
    winner's flipped set, so their fitness gain is a difference of two
    binomial counts, and an offspring equals the parent (all flips dropped)
    or the mutant winner (all flips kept) exactly when those counts are
    degenerate.

This is distribution-identical to materializing every bitstring (the test
suite checks it against a literal reimplementation) and makes large batches
cheap. The bit-level operators in ``operators`` implement the same semantics
on explicit genomes.

Accounting conventions, applied uniformly:

  * the initial sample is charged one evaluation;
  * every mutant is charged; crossover offspring identical to the parent or
    to the mutant winner are free (their fitness is already known);
  * budget is checked between iterations, so the final iteration may overrun
    the nominal budget; ``RunResult.evaluations`` reports the true count;
  * improvements are recorded in the trace with the evaluation counter at the
    end of the iteration that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .operators import RandomSource, nint
from .trace import TraceSink


@dataclass(frozen=True)
class DynConfig:
    """Hyper-parameters of the self-adjusting GA.

    Per iteration with current offspring size lambda: mutation rate
    p = alpha * lambda / n, crossover offspring count lambda2 = nint(beta *
    lambda), crossover bias c = gamma / lambda; lambda is multiplied by b
    after a strict improvement and by A otherwise.
    """

    alpha: float
    beta: float
    gamma: float
    A: float
    b: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0 and self.gamma > 0):
            raise ValueError("alpha, beta, gamma must be positive")
        if not self.A > 1:
            raise ValueError(f"increase factor A must exceed 1, got {self.A}")
        if not 0 < self.b < 1:
            raise ValueError(f"decrease factor b must lie in (0, 1), got {self.b}")


@dataclass(frozen=True)
class StaticConfig:
    """Fixed parameters of the static GA: offspring counts, p = k/n, bias c."""

    lambda1: int
    lambda2: int
    k: int
    c: float

    def __post_init__(self) -> None:
        if self.lambda1 < 1 or self.lambda2 < 1:
            raise ValueError("offspring counts must be at least 1")
        if self.k < 1:
            raise ValueError(f"mutation strength k must be at least 1, got {self.k}")
        if not 0 < self.c < 1:
            raise ValueError(f"crossover bias must lie in (0, 1), got {self.c}")


@dataclass
class RunResult:
    evaluations: int
    success: bool
    final_fitness: int
    trace: Optional[TraceSink] = None
    lambda_trace: Optional[list] = None


def _check_problem(n: int, budget: int) -> None:
    if n < 2:
        raise ValueError(f"dimension must be at least 2, got {n}")
    if budget < 1:
        raise ValueError(f"budget must be at least 1, got {budget}")


def _dyn_phase(
    cfg: DynConfig,
    n: int,
    budget: int,
    rng: RandomSource,
    fx: int,
    evaluations: int,
    trace: Optional[TraceSink],
    lambda_trace: Optional[list],
) -> tuple[int, int]:
    lam = 1.0
    lam_max = float(n - 1)
    lo = 1.0 / n
    alpha_over_n = cfg.alpha / n
    beta, gamma, big_a, small_b = cfg.beta, cfg.gamma, cfg.A, cfg.b
    binomial = rng.binomial
    hypergeometric = rng.hypergeometric
    while fx < n and evaluations < budget:
        lam1 = nint(lam)
        lam2 = nint(beta * lam)
        if lam2 < 1:
            lam2 = 1
        p = alpha_over_n * lam
        p = lo if p < lo else (0.99 if p > 0.99 else p)
        c = gamma / lam
        c = lo if c < lo else (0.99 if c > 0.99 else c)
        if lambda_trace is not None:
            lambda_trace.append(lam)

        # mutation phase: one radius per iteration, shared by all mutants;
        # each mutant flips a hypergeometric number of one-bits
        ell = int(binomial(n, p))
        while ell == 0:
            ell = int(binomial(n, p))
        if lam1 == 1:
            k_star = int(hypergeometric(fx, n - fx, ell))
        else:
            k_star = int(hypergeometric(fx, n - fx, ell, size=lam1).min())
        evaluations += lam1
        f_mut = fx + ell - 2 * k_star

        # crossover phase: offspring keep a c-subset of the winner's flips;
        # keeping nothing reproduces the parent, keeping all reproduces the
        # winner, and only the remaining offspring are charged
        gains = ell - k_star
        if lam2 == 1:
            u = int(binomial(gains, c)) if gains else 0
            v = int(binomial(k_star, c)) if k_star else 0
            taken = u + v
            if 0 < taken < ell:
                evaluations += 1
            fy = f_mut if f_mut >= fx + u - v else fx + u - v
        else:
            u = binomial(gains, c, size=lam2)
            v = binomial(k_star, c, size=lam2)
            taken = u + v
            evaluations += int(((taken > 0) & (taken < ell)).sum())
            best_off = int((u - v).max())
            fy = f_mut if f_mut >= fx + best_off else fx + best_off

        if fy > fx:
            fx = fy
            lam = small_b * lam
            if lam < 1.0:
                lam = 1.0
            if trace is not None:
                trace.record_hit(fx, evaluations, lam1)
        else:
            # equal-fitness winners replace the parent too, but that changes
            # nothing observable; both cases increase lambda
            lam = big_a * lam
            if lam > lam_max:
                lam = lam_max
        assert 1.0 <= lam <= lam_max
    return fx, evaluations


def run_dyn(
    cfg: DynConfig,
    n: int,
    budget: int,
    rng: RandomSource,
    trace: Optional[TraceSink] = None,
    record_lambda: bool = False,
) -> RunResult:
    """Self-adjusting GA run; stops at the optimum or once the budget is spent."""
    _check_problem(n, budget)
    fx = int(rng.binomial(n, 0.5))  # fitness of a uniform random string
    evaluations = 1
    if trace is not None:
        trace.record_hit(fx, evaluations, 1)
    lambda_trace: Optional[list] = [] if record_lambda else None
    fx, evaluations = _dyn_phase(
        cfg, n, budget, rng, fx, evaluations, trace, lambda_trace
    )
    return RunResult(evaluations, fx == n, fx, trace, lambda_trace)


def run_static(
    cfg: StaticConfig,
    n: int,
    budget: int,
    rng: RandomSource,
    trace: Optional[TraceSink] = None,
) -> RunResult:
    """Static GA run.

    The selection step picks the best of the mutation winner and the
    crossover offspring (same candidate set as the self-adjusting variant)
    and replaces the parent whenever the pick is at least as good.
    """
    _check_problem(n, budget)
    if cfg.k > n:
        raise ValueError(f"mutation strength k={cfg.k} exceeds dimension {n}")
    lo = 1.0 / n
    p = min(max(cfg.k / n, lo), 0.99)
    c = min(max(cfg.c, lo), 0.99)
    lam1, lam2 = cfg.lambda1, cfg.lambda2
    binomial = rng.binomial
    hypergeometric = rng.hypergeometric
    fx = int(binomial(n, 0.5))
    evaluations = 1
    if trace is not None:
        trace.record_hit(fx, evaluations, lam1)
    while fx < n and evaluations < budget:
        ell = int(binomial(n, p))
        while ell == 0:
            ell = int(binomial(n, p))
        if lam1 == 1:
            k_star = int(hypergeometric(fx, n - fx, ell))
        else:
            k_star = int(hypergeometric(fx, n - fx, ell, size=lam1).min())
        evaluations += lam1
        f_mut = fx + ell - 2 * k_star

        u = binomial(ell - k_star, c, size=lam2)
        v = binomial(k_star, c, size=lam2)
        taken = u + v
        evaluations += int(((taken > 0) & (taken < ell)).sum())
        fy = fx + int((u - v).max())
        if f_mut > fy:
            fy = f_mut
        if fy >= fx:
            improved = fy > fx
            fx = fy
            if improved and trace is not None:
                trace.record_hit(fx, evaluations, lam1)
    return RunResult(evaluations, fx == n, fx, trace)


def _rls_phase(
    n: int,
    budget: int,
    rng: RandomSource,
    fx: int,
    evaluations: int,
    stop_fitness: int,
    trace: Optional[TraceSink],
) -> tuple[int, int]:
    """Single-bit local search in fitness space.

    A one-bit flip helps exactly when it hits a 0-bit, so the waiting time to
    the next improvement is geometric with success probability (n - fx)/n;
    drawing it directly is distribution-identical to flipping bit by bit.
    """
    while fx < stop_fitness and evaluations < budget:
        t = int(rng.geometric((n - fx) / n))
        if evaluations + t > budget:
            evaluations = budget
            break
        evaluations += t
        fx += 1
        if trace is not None:
            trace.record_hit(fx, evaluations, 1)
    return fx, evaluations


def run_rls(
    n: int,
    budget: int,
    rng: RandomSource,
    trace: Optional[TraceSink] = None,
) -> RunResult:
    """Randomized local search: flip one uniform position, accept if not worse."""
    _check_problem(n, budget)
    fx = int(rng.binomial(n, 0.5))
    evaluations = 1
    if trace is not None:
        trace.record_hit(fx, evaluations, 1)
    fx, evaluations = _rls_phase(n, budget, rng, fx, evaluations, n, trace)
    return RunResult(evaluations, fx == n, fx, trace)


def run_switch(
    switch_target: int,
    cfg: DynConfig,
    n: int,
    budget: int,
    rng: RandomSource,
    trace: Optional[TraceSink] = None,
    record_lambda: bool = False,
) -> RunResult:
    """Run local search until fitness reaches switch_target, then hand the
    current parent to the self-adjusting GA with lambda reset to 1."""
    _check_problem(n, budget)
    if not 0 <= switch_target <= n:
        raise ValueError(f"switch target must lie in [0, {n}], got {switch_target}")
    fx = int(rng.binomial(n, 0.5))
    evaluations = 1
    if trace is not None:
        trace.record_hit(fx, evaluations, 1)
    fx, evaluations = _rls_phase(n, budget, rng, fx, evaluations, switch_target, trace)
    lambda_trace: Optional[list] = [] if record_lambda else None
    if fx < n and evaluations < budget:
        fx, evaluations = _dyn_phase(
            cfg, n, budget, rng, fx, evaluations, trace, lambda_trace
        )
    return RunResult(evaluations, fx == n, fx, trace, lambda_trace)
