"""Single runs, replicated parameter sweeps and the leadership experiment presets."""

from __future__ import annotations

import itertools
import logging
import math
import os
import statistics
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import ConfigError, RunConfig
from .dynamics import step
from .metrics import IterationStats, collect
from .model import MAX_FITNESS, new_world

log = logging.getLogger(__name__)

CONVERGENCE_FRACTION = 0.9
EARLY_CHECKPOINT = 5
DEFAULT_MAX_RUNS = 20_000

E2_LEADER_P_INVENT = (0.0, 0.25, 0.5, 0.75, 1.0)
E2_FOLLOWER_P_INVENT = (0.02, 0.1, 0.5)
E3_LEADER_R_CHANGE = (0.2, 0.4, 0.6, 0.8, 1.0)
E3_FOLLOWER_P_INVENT = 0.02


@dataclass(frozen=True)
class RunSeries:
    config: RunConfig
    stats: tuple[IterationStats, ...]

    @property
    def final(self) -> IterationStats:
        return self.stats[-1]

    def convergence_iteration(self, threshold: float = CONVERGENCE_FRACTION * MAX_FITNESS) -> int | None:
        """First iteration whose mean fitness reaches ``threshold``, or None."""
        for s in self.stats:
            if s.mean_fitness >= threshold:
                return s.iteration
        return None


def run(config: RunConfig) -> RunSeries:
    config.validate()
    world = new_world(config)
    stats = [collect(world)]
    for _ in range(config.iterations):
        step(world)
        stats.append(collect(world))
    return RunSeries(config, tuple(stats))


@dataclass(frozen=True)
class RunSummary:
    """What a sweep keeps from each run."""

    seed: int
    final_mean_fitness: float
    final_diversity: int
    convergence_iteration: int | None
    early_mean_fitness: float
    final_leader_action_share: float
    iterations: int

    @classmethod
    def from_series(cls, series: RunSeries, checkpoint: int = EARLY_CHECKPOINT) -> RunSummary:
        early = series.stats[min(checkpoint, len(series.stats) - 1)]
        return cls(
            seed=series.config.seed,
            final_mean_fitness=series.final.mean_fitness,
            final_diversity=series.final.diversity,
            convergence_iteration=series.convergence_iteration(),
            early_mean_fitness=early.mean_fitness,
            final_leader_action_share=series.final.leader_action_share,
            iterations=series.config.iterations,
        )

    @property
    def convergence_censored(self) -> int:
        """Convergence iteration, with runs that never converge counted as ``iterations + 1``."""
        if self.convergence_iteration is None:
            return self.iterations + 1
        return self.convergence_iteration


METRICS = (
    "final_mean_fitness",
    "final_diversity",
    "convergence_censored",
    "early_mean_fitness",
    "final_leader_action_share",
)


@dataclass(frozen=True)
class Cell:
    params: tuple[tuple[str, object], ...]
    runs: tuple[RunSummary, ...]

    @property
    def key(self) -> tuple:
        return tuple(v for _, v in self.params)

    def values(self, metric: str) -> list[float]:
        return [float(getattr(r, metric)) for r in self.runs]

    def mean(self, metric: str) -> float:
        return statistics.fmean(self.values(metric))

    def sd(self, metric: str) -> float:
        vals = self.values(metric)
        return statistics.stdev(vals) if len(vals) > 1 else 0.0

    def se(self, metric: str) -> float:
        return self.sd(metric) / math.sqrt(len(self.runs))


@dataclass(frozen=True)
class SweepResult:
    axes: tuple[tuple[str, tuple], ...]
    base: RunConfig
    replicates: int
    seed0: int
    cells: tuple[Cell, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.axes)

    def cell(self, **params) -> Cell:
        for c in self.cells:
            if all(dict(c.params)[k] == v for k, v in params.items()):
                return c
        raise KeyError(params)

    def row(self, **fixed) -> list[Cell]:
        """Cells matching ``fixed``, in grid order."""
        return [c for c in self.cells if all(dict(c.params)[k] == v for k, v in fixed.items())]


def _normalize_axes(axes: Mapping[str, Iterable] | Sequence[tuple[str, Iterable]]) -> tuple[tuple[str, tuple], ...]:
    items = list(axes.items()) if isinstance(axes, Mapping) else list(axes)
    if not items:
        raise ConfigError("sweep needs at least one axis")
    names = [name for name, _ in items]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate sweep axis in {names}")
    out = []
    for name, values in items:
        if name == "seed" or name not in RunConfig.__dataclass_fields__:
            raise ConfigError(f"cannot sweep over '{name}'", key=name)
        values = tuple(values)
        if not values:
            raise ConfigError(f"axis '{name}' has no values", key=name)
        out.append((name, values))
    return tuple(out)


def sweep_configs(base: RunConfig, axes, replicates: int, seed0: int) -> list[tuple[tuple, RunConfig]]:
    """Every (cell params, config) pair of a sweep, in seed order.

    Cells are enumerated as the Cartesian product of the axes, first axis
    varying slowest; cell ``c`` (0-based) gets seeds
    ``seed0 + c * replicates + r`` for replicate ``r``.
    """
    axes = _normalize_axes(axes)
    names = [name for name, _ in axes]
    out = []
    for c, combo in enumerate(itertools.product(*(values for _, values in axes))):
        params = tuple(zip(names, combo))
        for r in range(replicates):
            config = base.replace(**dict(params), seed=seed0 + c * replicates + r)
            out.append((params, config))
    return out


def _summarize(config: RunConfig) -> RunSummary:
    return RunSummary.from_series(run(config))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SIM_THREADS", "1")))
    except ValueError:
        return 1


def sweep(
    base: RunConfig,
    axes,
    replicates: int,
    seed0: int = 0,
    *,
    max_runs: int = DEFAULT_MAX_RUNS,
    workers: int | None = None,
) -> SweepResult:
    """Run every grid cell ``replicates`` times.

    ``workers`` (default: ``$SIM_THREADS`` or 1) sets how many processes run
    replicates concurrently; results do not depend on it.
    """
    if replicates < 1:
        raise ConfigError(f"replicates must be >= 1, got {replicates}")
    axes = _normalize_axes(axes)
    n_cells = math.prod(len(values) for _, values in axes)
    total = n_cells * replicates
    if total > max_runs:
        raise ConfigError(f"sweep of {n_cells} cells x {replicates} replicates = {total} runs exceeds the cap of {max_runs}")
    jobs = sweep_configs(base, axes, replicates, seed0)
    for _, config in jobs:
        config.validate()

    workers = default_workers() if workers is None else workers
    log.info("sweep: %d cells x %d replicates on %d worker(s)", n_cells, replicates, workers)
    configs = [config for _, config in jobs]
    if workers > 1 and total > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(_summarize, configs, chunksize=max(1, total // (4 * workers))))
    else:
        summaries = [_summarize(config) for config in configs]

    by_cell: dict[tuple, list[RunSummary]] = {}
    for (params, _), summary in zip(jobs, summaries):
        by_cell.setdefault(params, []).append(summary)
    cells = tuple(Cell(params, tuple(runs)) for params, runs in by_cell.items())
    return SweepResult(axes=axes, base=base, replicates=replicates, seed0=seed0, cells=cells)


def preset_e1_leadership(replicates: int = 30, seed0: int = 0, base: RunConfig | None = None, **kwargs) -> SweepResult:
    """Broadcast off vs on, leader and followers otherwise identical.

    ``base`` (default ``RunConfig()``) supplies every parameter the preset
    does not set itself; the same holds for the other presets.
    """
    base = base or RunConfig()
    return sweep(base, {"broadcast_enabled": (False, True)}, replicates, seed0, **kwargs)


def preset_e2_frequency(replicates: int = 30, seed0: int = 0, base: RunConfig | None = None, **kwargs) -> SweepResult:
    """Leader invention frequency against follower invention frequency."""
    base = (base or RunConfig()).replace(broadcast_enabled=True)
    axes = {"follower_p_invent": E2_FOLLOWER_P_INVENT, "leader_p_invent": E2_LEADER_P_INVENT}
    return sweep(base, axes, replicates, seed0, **kwargs)


def preset_e3_magnitude(replicates: int = 50, seed0: int = 0, base: RunConfig | None = None, **kwargs) -> SweepResult:
    """Leader creativity magnitude with rarely-inventing followers."""
    base = (base or RunConfig()).replace(broadcast_enabled=True, follower_p_invent=E3_FOLLOWER_P_INVENT)
    return sweep(base, {"leader_r_change": E3_LEADER_R_CHANGE}, replicates, seed0, **kwargs)


PRESETS = {
    "e1": preset_e1_leadership,
    "e2": preset_e2_frequency,
    "e3": preset_e3_magnitude,
}
