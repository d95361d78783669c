"""Deterministic CSV serialization.

Comma separator, '.' decimal point, header row, LF line endings, and reals
printed with 17 significant digits so every emitted value parses back to the
identical float.
"""

from __future__ import annotations

import csv
import math
from typing import Iterable, Optional

import numpy as np

from .algorithms import DynConfig, RunResult, StaticConfig
from .trace import FixedTargetTable
from .tuning import AuditRow, SweepCell

RUNS_COLUMNS = [
    "algo",
    "n",
    "seed",
    "alpha",
    "beta",
    "gamma",
    "A",
    "b",
    "lambda1",
    "lambda2",
    "k",
    "c",
    "budget",
    "evaluations",
    "success",
    "final_fitness",
]

SWEEP_COLUMNS = ["A", "b", "success_rate", "mean_successful", "success_count", "runs"]

FIXED_TARGET_COLUMNS = ["target", "avg_evals", "hit_count", "avg_lambda1", "gradient"]


def fmt_real(x: float) -> str:
    return "%.17g" % float(x)


def _fmt_opt_real(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return fmt_real(x)


def _open_writer(path):
    fh = open(path, "w", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def runs_row(
    algo: str,
    n: int,
    seed: int,
    budget: int,
    result: RunResult,
    dyn: Optional[DynConfig] = None,
    static: Optional[StaticConfig] = None,
) -> list[str]:
    row = [algo, str(n), str(seed)]
    if dyn is not None:
        row += [fmt_real(v) for v in (dyn.alpha, dyn.beta, dyn.gamma, dyn.A, dyn.b)]
        row += ["", "", "", ""]
    elif static is not None:
        row += ["", "", "", "", ""]
        row += [str(static.lambda1), str(static.lambda2), str(static.k), fmt_real(static.c)]
    else:
        row += [""] * 9
    row += [
        str(budget),
        str(result.evaluations),
        "1" if result.success else "0",
        str(result.final_fitness),
    ]
    return row


def write_runs_csv(path, rows: Iterable[list[str]]) -> None:
    fh, writer = _open_writer(path)
    with fh:
        writer.writerow(RUNS_COLUMNS)
        writer.writerows(rows)


def read_runs_csv(path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    missing = set(RUNS_COLUMNS) - set(rows[0])
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")
    return rows


def write_sweep_csv(path, cells: Iterable[SweepCell]) -> None:
    fh, writer = _open_writer(path)
    with fh:
        writer.writerow(SWEEP_COLUMNS)
        for cell in cells:
            writer.writerow(
                [
                    fmt_real(cell.A),
                    fmt_real(cell.b),
                    fmt_real(cell.success_rate),
                    fmt_real(cell.mean_successful),
                    str(cell.success_count),
                    str(cell.runs),
                ]
            )


def read_sweep_csv(path) -> list[SweepCell]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cells = [
            SweepCell(
                A=float(r["A"]),
                b=float(r["b"]),
                success_rate=float(r["success_rate"]),
                mean_successful=float(r["mean_successful"]),
                success_count=int(r["success_count"]),
                runs=int(r["runs"]),
            )
            for r in reader
        ]
    if not cells:
        raise ValueError(f"{path}: no data rows")
    return cells


def write_fixed_target_csv(
    path, table: FixedTargetTable, gradient: np.ndarray
) -> None:
    fh, writer = _open_writer(path)
    with fh:
        writer.writerow(FIXED_TARGET_COLUMNS)
        for v in range(table.n + 1):
            if table.hit_count[v] == 0:
                continue
            writer.writerow(
                [
                    str(v),
                    fmt_real(table.avg_evals[v]),
                    str(int(table.hit_count[v])),
                    fmt_real(table.avg_lambda1[v]),
                    _fmt_opt_real(gradient[v]),
                ]
            )


def write_audit_csv(path, audit: Iterable[AuditRow], param_names: list[str]) -> None:
    fh, writer = _open_writer(path)
    with fh:
        writer.writerow(
            ["iteration", "config_id"] + param_names + ["seed", "evaluations", "censored", "cap"]
        )
        for row in audit:
            writer.writerow(
                [str(row.iteration), str(row.config_id)]
                + [fmt_real(row.params[name]) for name in param_names]
                + [str(row.seed), fmt_real(row.evaluations), "1" if row.censored else "0", str(row.cap)]
            )
