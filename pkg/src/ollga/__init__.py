"""Self-adjusting and static two-phase genetic algorithms on OneMax, with the
full experimental toolkit: grid sweeps, an iterated racing tuner with adaptive
capping, fixed-target analysis, and runtime-distribution statistics."""

from .algorithms import (
    DynConfig,
    RunResult,
    StaticConfig,
    run_dyn,
    run_rls,
    run_static,
    run_switch,
)
from .analysis import (
    RunStats,
    TestReport,
    ft_crossing,
    ft_gradient,
    lambda_star,
    paired_t_test,
    success_rate,
    summarize,
    wilcoxon_signed_rank,
)
from .experiments import ExperimentSpec, execute_run, run_experiment
from .genome import BitString, hamming, onemax
from .operators import (
    ConditionalBinomial,
    RandomSource,
    best_of_uar,
    crossover_biased,
    derive_seed,
    mutate_exact,
    nint,
    rng_from_seed,
    sample_bin_gt0,
)
from .presets import PRESETS, get_preset
from .trace import FixedTargetTable, TraceSink, aggregate_fixed_target
from .tuning import (
    Param,
    ParamSpace,
    RaceResult,
    SweepCell,
    SweepSpec,
    grid_sweep,
    race,
    race_tune,
)

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "ConditionalBinomial",
    "DynConfig",
    "ExperimentSpec",
    "FixedTargetTable",
    "PRESETS",
    "Param",
    "ParamSpace",
    "RaceResult",
    "RandomSource",
    "RunResult",
    "RunStats",
    "StaticConfig",
    "SweepCell",
    "SweepSpec",
    "TestReport",
    "TraceSink",
    "aggregate_fixed_target",
    "best_of_uar",
    "crossover_biased",
    "derive_seed",
    "execute_run",
    "ft_crossing",
    "ft_gradient",
    "get_preset",
    "grid_sweep",
    "hamming",
    "lambda_star",
    "mutate_exact",
    "nint",
    "onemax",
    "paired_t_test",
    "race",
    "race_tune",
    "rng_from_seed",
    "run_dyn",
    "run_experiment",
    "run_rls",
    "run_static",
    "run_switch",
    "sample_bin_gt0",
    "success_rate",
    "summarize",
    "wilcoxon_signed_rank",
]
