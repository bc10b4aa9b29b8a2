"""Deterministic CSV output for runs, sweeps and the fitness table."""

from __future__ import annotations

import csv
from typing import TextIO

from .config import convert_value
from .experiments import METRICS, RunSeries, SweepResult
from .model import BODY_PARTS, all_actions, fitness

SERIES_HEADER = ("iteration", "mean_fitness", "diversity", "best_fitness", "leader_action_share")
SWEEP_FIELDS = ("seed", "final_mean_fitness", "final_diversity", "convergence_iteration")
NO_CONVERGENCE = -1


def fmt_real(x: float) -> str:
    return f"{x:.6f}"


def fmt_param(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt_real(value)
    return str(value)


def _writer(sink: TextIO):
    return csv.writer(sink, lineterminator="\n")


def write_series_csv(series: RunSeries, sink: TextIO) -> None:
    w = _writer(sink)
    w.writerow(SERIES_HEADER)
    for s in series.stats:
        w.writerow(
            (
                s.iteration,
                fmt_real(s.mean_fitness),
                s.diversity,
                fmt_real(s.best_fitness),
                fmt_real(s.leader_action_share),
            )
        )


def write_sweep_csv(result: SweepResult, sink: TextIO) -> None:
    """Long format: one row per run, sorted by (cell parameters, seed)."""
    rows = []
    for cell in result.cells:
        for r in cell.runs:
            rows.append((cell.key, r.seed, r))
    rows.sort(key=lambda row: (row[0], row[1]))

    w = _writer(sink)
    w.writerow((*result.labels, *SWEEP_FIELDS))
    for key, seed, r in rows:
        conv = NO_CONVERGENCE if r.convergence_iteration is None else r.convergence_iteration
        w.writerow(
            (
                *(fmt_param(v) for v in key),
                seed,
                fmt_real(r.final_mean_fitness),
                r.final_diversity,
                conv,
            )
        )


def write_summary_csv(result: SweepResult, sink: TextIO) -> None:
    """Per-cell replicate mean and standard deviation of each tracked metric."""
    w = _writer(sink)
    w.writerow((*result.labels, "replicates", *(f"{m}_{s}" for m in METRICS for s in ("mean", "sd"))))
    for cell in sorted(result.cells, key=lambda c: c.key):
        stats = []
        for m in METRICS:
            stats += [fmt_real(cell.mean(m)), fmt_real(cell.sd(m))]
        w.writerow((*(fmt_param(v) for v in cell.key), len(cell.runs), *stats))


def oracle_fitness_dump(sink: TextIO) -> None:
    """All 729 actions with their fitness, in ternary-encoding order."""
    w = _writer(sink)
    w.writerow((*BODY_PARTS, "fitness"))
    for action in all_actions():
        w.writerow((*action, fmt_real(fitness(action))))


def parse_axes(spec: str) -> list[tuple[str, tuple]]:
    """Parse ``key=v1,v2[;key2=v3,...]`` into typed sweep axes."""
    axes = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"malformed axis {part!r}, expected key=v1,v2,...")
        key, raw = (s.strip() for s in part.split("=", 1))
        values = tuple(convert_value(key, v) for v in raw.split(",") if v.strip())
        if not values:
            raise ValueError(f"axis '{key}' has no values")
        axes.append((key, values))
    if not axes:
        raise ValueError("empty axes specification")
    return axes
