"""Command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import RunConfig, parse_config
from .experiments import PRESETS, run, sweep
from .io import oracle_fitness_dump, parse_axes, write_series_csv, write_summary_csv, write_sweep_csv


def _load_config(path: str | None, seed: int | None = None) -> RunConfig:
    text = Path(path).read_text() if path else ""
    return parse_config(text, seed=seed)


def _open_out(path: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="")


def cmd_run(args) -> None:
    series = run(_load_config(args.config, args.seed))
    with _open_out(args.out) as f:
        write_series_csv(series, f)


def cmd_sweep(args) -> None:
    base = _load_config(args.config)
    result = sweep(base, parse_axes(args.axes), args.replicates, args.seed0, max_runs=args.max_runs)
    with _open_out(args.out) as f:
        write_sweep_csv(result, f)


def cmd_preset(args) -> None:
    result = PRESETS[args.name](args.replicates, args.seed0, max_runs=args.max_runs)
    out = Path(args.out_dir)
    with _open_out(out / f"{args.name}_runs.csv") as f:
        write_sweep_csv(result, f)
    with _open_out(out / f"{args.name}_summary.csv") as f:
        write_summary_csv(result, f)


def cmd_oracle(args) -> None:
    with _open_out(args.out) as f:
        oracle_fitness_dump(f)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="culturesim", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="simulate one run and write its time series")
    r.add_argument("--config", help="key = value config file (defaults if omitted)")
    r.add_argument("--seed", type=int)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="replicated runs over a parameter grid")
    s.add_argument("--config")
    s.add_argument("--axes", required=True, help="key=v1,v2[;key2=...]")
    s.add_argument("--replicates", type=int, required=True)
    s.add_argument("--seed0", type=int, default=0)
    s.add_argument("--max-runs", type=int, default=20_000)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sweep)

    pr = sub.add_parser("preset", help="one of the leadership experiments")
    pr.add_argument("name", choices=sorted(PRESETS))
    pr.add_argument("--replicates", type=int, default=30)
    pr.add_argument("--seed0", type=int, default=0)
    pr.add_argument("--max-runs", type=int, default=20_000)
    pr.add_argument("--out-dir", required=True)
    pr.set_defaults(func=cmd_preset)

    o = sub.add_parser("oracle-fitness", help="dump the fitness of every action")
    o.add_argument("--out", required=True)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ValueError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
