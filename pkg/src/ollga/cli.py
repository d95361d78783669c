"""Command-line interface: run, sweep, tune, fixed-target, compare, stats."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import csvio, plots
from .algorithms import DynConfig, StaticConfig
from .analysis import (
    RunStats,
    TestReport,
    ft_crossing,
    ft_gradient,
    paired_t_test,
    success_rate,
    summarize,
    wilcoxon_signed_rank,
)
from .experiments import ExperimentSpec, run_experiment
from .presets import PRESETS, get_preset
from .trace import aggregate_fixed_target
from .tuning import Param, ParamSpace, SweepSpec, grid_sweep, race_tune

DYN_FIELDS = ("alpha", "beta", "gamma", "A", "b")
STATIC_FIELDS = ("lambda1", "lambda2", "k", "c")


def _add_config_flags(parser: argparse.ArgumentParser, prefix: str = "") -> None:
    g = parser.add_argument_group(f"{prefix or 'algorithm'} configuration")
    g.add_argument(f"--{prefix}preset", choices=sorted(PRESETS), default=None)
    g.add_argument(
        f"--{prefix}algo", choices=("dyn", "static", "rls", "switch"), default=None
    )
    for name in DYN_FIELDS:
        g.add_argument(f"--{prefix}{name}", type=float, default=None)
    for name in ("lambda1", "lambda2", "k"):
        g.add_argument(f"--{prefix}{name}", type=int, default=None)
    g.add_argument(f"--{prefix}c", type=float, default=None)
    g.add_argument(f"--{prefix}switch-target", type=int, default=None)


def _add_batch_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="problem dimension")
    parser.add_argument("--runs", type=int, default=100)
    parser.add_argument("--budget", type=int, default=150_000)
    parser.add_argument("--seed", type=int, default=1, help="master seed")
    parser.add_argument("--jobs", type=int, default=1)


def _flag_value(args, prefix: str, name: str):
    return getattr(args, f"{prefix}{name}".replace("-", "_"))


def _resolve_config(args, prefix: str = ""):
    """Turn preset/flag soup into (algo, dyn_cfg, static_cfg, switch_target)."""
    preset_name = _flag_value(args, prefix, "preset")
    algo = _flag_value(args, prefix, "algo")
    dyn_cfg = None
    static_cfg = None
    if preset_name is not None:
        payload = get_preset(preset_name)
        if isinstance(payload, DynConfig):
            dyn_cfg = payload
        else:
            static_cfg = payload
    dyn_overrides = {
        f: _flag_value(args, prefix, f)
        for f in DYN_FIELDS
        if _flag_value(args, prefix, f) is not None
    }
    static_overrides = {
        f: _flag_value(args, prefix, f)
        for f in STATIC_FIELDS
        if _flag_value(args, prefix, f) is not None
    }
    if dyn_overrides and static_overrides:
        raise ValueError("cannot mix dyn and static configuration flags")
    if algo is None:
        if static_cfg is not None or static_overrides:
            algo = "static"
        else:
            algo = "dyn"
    if algo in ("dyn", "switch"):
        if static_cfg is not None:
            raise ValueError(f"algorithm {algo!r} cannot use a static preset")
        base = dyn_cfg if dyn_cfg is not None else get_preset("dyn-default")
        dyn_cfg = dataclasses.replace(base, **dyn_overrides) if dyn_overrides else base
        static_cfg = None
    elif algo == "static":
        if static_cfg is None:
            missing = [f for f in STATIC_FIELDS if f not in static_overrides]
            if missing:
                raise ValueError(
                    f"static configuration needs {missing} (flags or a static preset)"
                )
            static_cfg = StaticConfig(**static_overrides)
        elif static_overrides:
            static_cfg = dataclasses.replace(static_cfg, **static_overrides)
        dyn_cfg = None
    else:  # rls
        dyn_cfg = None
        static_cfg = None
    switch_target = _flag_value(args, prefix, "switch_target")
    if algo == "switch" and switch_target is None:
        raise ValueError("algorithm 'switch' needs --switch-target")
    return algo, dyn_cfg, static_cfg, switch_target


def format_run_stats(stats: RunStats) -> str:
    return (
        f"count {stats.count}  mean {stats.mean:.6g}  rsd% {stats.rsd:.6g}  "
        f"mean/n {stats.normalized_mean:.6g}\n"
        f"q20 {stats.q20:.6g}  q25 {stats.q25:.6g}  q50 {stats.q50:.6g}  "
        f"q75 {stats.q75:.6g}  q98 {stats.q98:.6g}"
    )


def format_test_report(name: str, report: TestReport) -> str:
    levels = ",".join(str(a) for a in report.significant_at) or "none"
    arrow = {1: "a > b", -1: "a < b", 0: "a = b"}[report.direction]
    return (
        f"{name}: statistic {report.statistic:.6g}  p {report.p_value:.6g}  "
        f"significant at [{levels}]  direction {arrow}"
    )


def _spec_from_args(args, trace: bool = False) -> ExperimentSpec:
    algo, dyn_cfg, static_cfg, switch_target = _resolve_config(args)
    return ExperimentSpec(
        algo=algo,
        n=args.n,
        runs=args.runs,
        budget=args.budget,
        master_seed=args.seed,
        dyn=dyn_cfg,
        static=static_cfg,
        switch_target=switch_target,
        trace=trace or getattr(args, "trace", False),
    )


def _write_runs(path, spec: ExperimentSpec, outcomes) -> None:
    rows = [
        csvio.runs_row(
            spec.algo, spec.n, seed, spec.budget, result, spec.dyn, spec.static
        )
        for seed, result in outcomes
    ]
    csvio.write_runs_csv(path, rows)


def cmd_run(args) -> int:
    spec = _spec_from_args(args)
    outcomes = run_experiment(spec, jobs=args.jobs)
    _write_runs(args.out, spec, outcomes)
    stats = summarize([r.evaluations for _, r in outcomes], spec.n)
    print(format_run_stats(stats))
    if spec.trace:
        table = aggregate_fixed_target([r.trace for _, r in outcomes], spec.n)
        gradient = ft_gradient(table, window=args.window)
        out = Path(args.out)
        ft_path = out.with_name(out.stem + "_fixed_target.csv")
        csvio.write_fixed_target_csv(ft_path, table, gradient)
        print(f"fixed-target table written to {ft_path}")
    if args.plot:
        fig_path = Path(args.out).with_suffix(".png")
        plots.save_runtime_distribution(
            {spec.algo: [r.evaluations for _, r in outcomes]}, fig_path
        )
        print(f"figure written to {fig_path}")
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        a_count=args.a_count,
        a_min=args.a_min,
        a_max=args.a_max,
        b_count=args.b_count,
        b_min=args.b_min,
        b_max=args.b_max,
        runs=args.runs,
        n=args.n,
        budget=args.budget,
        display_cap=args.cap,
    )
    algo, dyn_cfg, _, _ = _resolve_config(args)
    if algo != "dyn" or dyn_cfg is None:
        raise ValueError("sweep requires a dyn configuration template")
    cells = grid_sweep(spec, dyn_cfg, args.seed, jobs=args.jobs)
    csvio.write_sweep_csv(args.out, cells)
    best = min(cells, key=lambda cell: cell.mean_successful)
    print(
        f"{len(cells)} cells; best A {best.A:.6g}  b {best.b:.6g}  "
        f"success rate {best.success_rate:.6g}  mean {best.mean_successful:.6g}  "
        f"successes {best.success_count}/{best.runs}"
    )
    if args.plot:
        fig_path = Path(args.out).with_suffix(".png")
        plots.save_sweep_heatmap(cells, fig_path, cap=spec.display_cap)
        print(f"figure written to {fig_path}")
    return 0


def _parse_param(text: str) -> Param:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(
            f"parameter spec {text!r} must look like name:low:high or name:low:high:int"
        )
    kind = "real"
    if len(parts) == 4:
        if parts[3] != "int":
            raise ValueError(f"unknown parameter kind {parts[3]!r} in {text!r}")
        kind = "int"
    return Param(parts[0], float(parts[1]), float(parts[2]), kind)


def cmd_tune(args) -> int:
    space = ParamSpace(tuple(_parse_param(p) for p in args.param))
    algo, dyn_cfg, static_cfg, _ = _resolve_config(args)
    if args.target is None:
        args.target = "static" if algo == "static" else "dyn"
    result = race_tune(
        space,
        args.target,
        args.n,
        run_budget=args.run_budget,
        total_eval_budget=args.total_budget,
        master_seed=args.seed,
        base_dyn=dyn_cfg,
        base_static=static_cfg,
        population=args.population,
        iterations=args.iterations,
    )
    param_names = [p.name for p in space.params]
    csvio.write_audit_csv(args.out, result.audit, param_names)
    if result.warning:
        print("warning: budget exhausted before racing converged; best-effort result")
    pieces = "  ".join(f"{k} {v:.6g}" for k, v in result.best.items())
    print(f"best configuration: {pieces}")
    print(
        f"mean {result.best_mean:.6g} over {result.state.instances} instances;"
        f" consumed {result.state.consumed:.6g} evaluations"
    )
    if args.target == "dyn":
        merged = dict(zip(DYN_FIELDS, dataclasses.astuple(dyn_cfg or get_preset("dyn-default"))))
        merged.update(result.best)
        print(f"success rate {success_rate(merged['A'], merged['b']):.6g}")
    print(f"audit log written to {args.out}")
    return 0


def _fixed_target_table(args, prefix: str = ""):
    algo, dyn_cfg, static_cfg, switch_target = _resolve_config(args, prefix)
    spec = ExperimentSpec(
        algo=algo,
        n=args.n,
        runs=args.runs,
        budget=args.budget,
        master_seed=args.seed,
        dyn=dyn_cfg,
        static=static_cfg,
        switch_target=switch_target,
        trace=True,
    )
    outcomes = run_experiment(spec, jobs=args.jobs)
    table = aggregate_fixed_target([r.trace for _, r in outcomes], args.n)
    return spec, table


def cmd_fixed_target(args) -> int:
    spec, table = _fixed_target_table(args)
    gradient = ft_gradient(table, window=args.window)
    csvio.write_fixed_target_csv(args.out, table, gradient)
    print(f"fixed-target table ({spec.algo}) written to {args.out}")
    tables = {spec.algo: table}
    gradients = {spec.algo: gradient}
    if args.vs_preset or args.vs_algo:
        vs_spec, vs_table = _fixed_target_table(args, prefix="vs-")
        vs_gradient = ft_gradient(vs_table, window=args.window)
        out = Path(args.out)
        vs_out = args.vs_out or out.with_name(out.stem + "_vs.csv")
        csvio.write_fixed_target_csv(vs_out, vs_table, vs_gradient)
        print(f"fixed-target table ({vs_spec.algo}) written to {vs_out}")
        vs_label = f"vs {vs_spec.algo}"
        tables[vs_label] = vs_table
        gradients[vs_label] = vs_gradient
        modes = ("first_hit", "gradient") if args.crossing == "both" else (args.crossing,)
        for mode in modes:
            crossing = ft_crossing(table, vs_table, mode=mode, window=args.window)
            where = "never" if crossing is None else f"from target {crossing}"
            print(f"crossing ({mode}): primary at or below comparison {where}")
    if args.plot:
        out = Path(args.out)
        fig_path = out.with_suffix(".png")
        plots.save_fixed_target_curves(tables, fig_path, gradients)
        lam_path = out.with_name(out.stem + "_lambda.png")
        plots.save_lambda_profile(tables, lam_path)
        print(f"figures written to {fig_path} and {lam_path}")
    return 0


def cmd_compare(args) -> int:
    rows_a = csvio.read_runs_csv(args.file_a)
    rows_b = csvio.read_runs_csv(args.file_b)
    if len(rows_a) != len(rows_b):
        raise ValueError(
            f"run counts differ: {len(rows_a)} vs {len(rows_b)}; cannot pair"
        )
    seeds_a = [r["seed"] for r in rows_a]
    seeds_b = [r["seed"] for r in rows_b]
    if seeds_a != seeds_b:
        raise ValueError("seed columns differ; runs are not paired")
    a = np.array([float(r["evaluations"]) for r in rows_a])
    b = np.array([float(r["evaluations"]) for r in rows_b])
    print(format_test_report("paired-t", paired_t_test(a, b)))
    print(format_test_report("wilcoxon", wilcoxon_signed_rank(a, b)))
    return 0


def cmd_stats(args) -> int:
    rows = csvio.read_runs_csv(args.file)
    n = int(rows[0]["n"])
    stats = summarize([float(r["evaluations"]) for r in rows], n)
    print(format_run_stats(stats))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ollga",
        description="Self-adjusting and static two-phase GAs on OneMax: "
        "runs, parameter sweeps, racing tuner, fixed-target analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="batch of independent runs -> CSV + stats")
    _add_config_flags(p_run)
    _add_batch_flags(p_run)
    p_run.add_argument("--out", default="runs.csv")
    p_run.add_argument("--trace", action="store_true", help="also write fixed-target CSV")
    p_run.add_argument("--window", type=int, default=25, help="gradient smoothing width")
    p_run.add_argument("--plot", action="store_true", help="render figures next to the CSV")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="exhaustive (A, b) grid -> heatmap CSV")
    _add_config_flags(p_sweep)
    _add_batch_flags(p_sweep)
    p_sweep.add_argument("--a-count", type=int, default=50)
    p_sweep.add_argument("--a-min", type=float, default=1.02)
    p_sweep.add_argument("--a-max", type=float, default=2.0)
    p_sweep.add_argument("--b-count", type=int, default=50)
    p_sweep.add_argument("--b-min", type=float, default=0.4)
    p_sweep.add_argument("--b-max", type=float, default=0.988)
    p_sweep.add_argument("--cap", type=float, default=None, help="display cap for figures")
    p_sweep.add_argument("--out", default="sweep.csv")
    p_sweep.add_argument("--plot", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_tune = sub.add_parser("tune", help="iterated racing tuner -> report + audit CSV")
    _add_config_flags(p_tune)
    p_tune.add_argument("--target", choices=("dyn", "static"), default=None)
    p_tune.add_argument(
        "--param",
        action="append",
        required=True,
        metavar="NAME:LOW:HIGH[:int]",
        help="tunable parameter (repeatable)",
    )
    p_tune.add_argument("--n", type=int, required=True)
    p_tune.add_argument("--run-budget", type=int, default=150_000)
    p_tune.add_argument("--total-budget", type=float, default=5e7)
    p_tune.add_argument("--seed", type=int, default=1)
    p_tune.add_argument("--population", type=int, default=16)
    p_tune.add_argument("--iterations", type=int, default=8)
    p_tune.add_argument("--out", default="tune_audit.csv")
    p_tune.set_defaults(func=cmd_tune)

    p_ft = sub.add_parser(
        "fixed-target", help="per-target first-hit averages -> CSV (+ crossing report)"
    )
    _add_config_flags(p_ft)
    _add_config_flags(p_ft, prefix="vs-")
    _add_batch_flags(p_ft)
    p_ft.add_argument("--window", type=int, default=25)
    p_ft.add_argument("--out", default="fixed_target.csv")
    p_ft.add_argument("--vs-out", default=None)
    p_ft.add_argument(
        "--crossing", choices=("first_hit", "gradient", "both"), default="both"
    )
    p_ft.add_argument("--plot", action="store_true")
    p_ft.set_defaults(func=cmd_fixed_target)

    p_cmp = sub.add_parser("compare", help="paired tests between two runs CSVs")
    p_cmp.add_argument("file_a")
    p_cmp.add_argument("file_b")
    p_cmp.set_defaults(func=cmd_compare)

    p_stats = sub.add_parser("stats", help="summarize an existing runs CSV")
    p_stats.add_argument("file")
    p_stats.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
