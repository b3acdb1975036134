"""Command-line front end: ``pgcs run | tables | list``."""
from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    DEFAULT_SEEDS,
    METHODS,
    PRESETS,
    ConfigError,
    ExperimentConfig,
    emit_report,
    reproduce_benchmark_tables,
    run_experiment,
)

EXIT_CONFIG = 2
EXIT_IO = 3


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(" ", "").split(",") if v]


def _csv_list(conv):
    def parse(text):
        return [conv(v) for v in text.split(",") if v]
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgcs", description="Powell / GCS / P-GCS benchmark runner")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment matrix")
    run.add_argument("--config", help="JSON config file (same schema as a report's config_echo)")
    run.add_argument("--preset", choices=sorted(PRESETS))
    run.add_argument("--function", choices=["f1", "f2", "f3"])
    run.add_argument("--dim", type=int, dest="dimension")
    run.add_argument("--start", type=_floats, help="comma-separated start point; one value is broadcast")
    run.add_argument("--method", type=_csv_list(str), action="extend", dest="methods",
                     help=f"any of {', '.join(METHODS)}; repeat or comma-separate")
    run.add_argument("--seed", type=_csv_list(int), action="extend", dest="seeds")
    run.add_argument("--target", type=float)
    run.add_argument("--max-iters", type=int, dest="max_outer_iters")
    run.add_argument("--period", type=int)
    run.add_argument("--wave-a", type=float, dest="wave_a")
    run.add_argument("--wave-b", type=float, dest="wave_b", help="upper sd bound; 'inf' allowed")
    run.add_argument("--sd-cap", type=float, dest="sd_cap")
    run.add_argument("--xtol", type=float)
    run.add_argument("--ftol", type=float)
    run.add_argument("--powell-replacement", choices=["conjugate", "largest-decrease"])
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--format", choices=["json", "csv"], default="json")
    run.add_argument("--output", default="-", help="report path, '-' for stdout")

    tables = sub.add_parser("tables", help="reproduce the three benchmark comparison tables")
    tables.add_argument("--seeds", type=_csv_list(int), default=list(DEFAULT_SEEDS))
    tables.add_argument("--output", default="pgcs_tables.json", help="JSON report path")
    tables.add_argument("--workers", type=int, default=1)

    sub.add_parser("list", help="show benchmark presets")
    return parser


_OVERRIDES = ("function", "dimension", "start", "methods", "seeds", "target", "max_outer_iters", "period",
              "wave_a", "wave_b", "sd_cap", "xtol", "ftol", "powell_replacement")


def config_from_args(args) -> ExperimentConfig:
    overrides = {k: getattr(args, k) for k in _OVERRIDES if getattr(args, k) is not None}
    if args.config:
        with open(args.config) as fh:
            base = ExperimentConfig.from_dict(json.load(fh))
        data = {**base.__dict__, **overrides}
        return ExperimentConfig(**data)
    if args.preset:
        return ExperimentConfig.from_preset(args.preset, **overrides)
    if "function" not in overrides:
        raise ConfigError("give --config, --preset or --function")
    fn = overrides["function"]
    preset = next(p for p in PRESETS.values() if p["function"] == fn)
    overrides.setdefault("dimension", preset["dimension"])
    overrides.setdefault("start", preset["start"] if overrides["dimension"] == preset["dimension"] else [200.0])
    return ExperimentConfig(**overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            for name, p in PRESETS.items():
                start = p["start"]
                shown = f"[{start[0]:g}] * {len(start)}" if len(set(start)) == 1 and len(start) > 2 else start
                print(f"{name}: function={p['function']} dimension={p['dimension']} start={shown}")
            return 0
        if args.command == "tables":
            reproduce_benchmark_tables(seeds=args.seeds, output=args.output, workers=args.workers)
            return 0
        cfg = config_from_args(args)
        rows = run_experiment(cfg, workers=args.workers)
        emit_report(rows, args.format, args.output, config=cfg)
        return 0
    except (ConfigError, KeyError, TypeError) as err:
        print(f"pgcs: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"pgcs: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
