"""Experiment matrices, report serialization and the benchmark comparison tables."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gcs import GaussianSampler, GcsConfig, run_gcs
from .hybrid import HybridConfig, run_pgcs
from .objectives import OBJECTIVE_NAMES, make_objective
from .powell import REPLACEMENT_RULES, PowellConfig, powell_minimize
from .wave import DEFAULT_SD_CAP, WaveParams

SCHEMA_VERSION = 1
METHODS = ("powell", "gcs", "pgcs")
DEFAULT_SEEDS = (1, 2, 3, 4, 5)

# each start sits in a basin where Powell alone stalls far from the
# global minimum at the origin
PRESETS = {
    "bench1": {"function": "f1", "dimension": 1, "start": [1200.0]},
    "bench2": {"function": "f2", "dimension": 2, "start": [600.0, 600.0]},
    "bench3": {"function": "f3", "dimension": 12, "start": [200.0] * 12},
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    function: str
    dimension: int
    start: list
    methods: list = field(default_factory=lambda: list(METHODS))
    seeds: list = field(default_factory=lambda: list(DEFAULT_SEEDS))
    target: float = 0.05
    max_outer_iters: int = 500_000
    wave_a: float = 0.0
    wave_b: float = math.inf
    period: int = 5000
    sd_cap: float = DEFAULT_SD_CAP
    xtol: float = 1e-4
    ftol: float = 1e-4
    powell_max_iters: int | None = None
    powell_max_evals: int | None = None
    powell_replacement: str = "conjugate"

    @classmethod
    def from_preset(cls, name: str, **overrides) -> "ExperimentConfig":
        try:
            base = PRESETS[name]
        except KeyError:
            raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
        kw = {**base, "start": list(base["start"]), **{k: v for k, v in overrides.items() if v is not None}}
        return cls(**kw)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known - {"schema_version", "rng"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kw = {k: v for k, v in data.items() if k in known}
        for key in ("wave_b", "wave_a", "sd_cap", "target"):
            if isinstance(kw.get(key), str):
                kw[key] = float(kw[key])
        return cls(**kw)

    def resolved(self) -> "ExperimentConfig":
        """Validate and expand every default; raises :class:`ConfigError`."""
        if self.function not in OBJECTIVE_NAMES:
            raise ConfigError(f"unknown function {self.function!r}")
        try:
            obj = make_objective(self.function, self.dimension)
        except ValueError as err:
            raise ConfigError(str(err)) from None
        start = [float(v) for v in self.start]
        if len(start) == 1 and obj.dimension > 1:
            start = start * obj.dimension
        if len(start) != obj.dimension:
            raise ConfigError(f"start has {len(start)} coordinates, expected {obj.dimension}")
        if not all(math.isfinite(v) for v in start):
            raise ConfigError("start must be finite")
        methods = list(self.methods)
        bad = [m for m in methods if m not in METHODS]
        if bad or not methods:
            raise ConfigError(f"methods must be a nonempty subset of {METHODS}, got {methods}")
        seeds = [int(s) for s in self.seeds]
        if not seeds and any(m != "powell" for m in methods):
            raise ConfigError("stochastic methods need at least one seed")
        if self.powell_replacement not in REPLACEMENT_RULES:
            raise ConfigError(f"powell_replacement must be one of {REPLACEMENT_RULES}")
        out = dataclasses.replace(
            self,
            dimension=obj.dimension,
            start=start,
            methods=methods,
            seeds=seeds,
            powell_max_iters=self.powell_max_iters or 1000 * obj.dimension,
            powell_max_evals=self.powell_max_evals or 1000 * obj.dimension,
        )
        try:
            out.gcs_config(seeds[0] if seeds else 0)
            out.powell_config()
        except ValueError as err:
            raise ConfigError(str(err)) from None
        return out

    def wave_params(self) -> WaveParams:
        return WaveParams(self.wave_a, self.wave_b, self.period, self.sd_cap)

    def gcs_config(self, seed: int) -> GcsConfig:
        return GcsConfig(self.target, self.max_outer_iters, self.wave_params(), seed)

    def powell_config(self) -> PowellConfig:
        return PowellConfig(self.xtol, self.ftol, self.powell_max_iters, self.powell_max_evals,
                            self.powell_replacement)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key, val in d.items():
            if isinstance(val, float) and math.isinf(val):
                d[key] = "inf" if val > 0 else "-inf"
        d["schema_version"] = SCHEMA_VERSION
        d["rng"] = GaussianSampler.algorithm
        return d


@dataclass
class ReportRow:
    method: str
    function: str
    dimension: int
    seed: int | None
    final_position: list
    final_value: float
    outer_iterations: int
    evaluations: int
    refinements: int
    wall_time: float
    termination_reason: str


ROW_FIELDS = tuple(f.name for f in dataclasses.fields(ReportRow))


def _run_one(cfg: ExperimentConfig, method: str, seed: int | None) -> ReportRow:
    obj = make_objective(cfg.function, cfg.dimension)
    if method == "powell":
        t0 = time.monotonic()
        out = powell_minimize(obj, cfg.start, cfg.powell_config())
        return ReportRow(method, cfg.function, cfg.dimension, None, [float(v) for v in out.x], out.f,
                         out.iters, out.evals, 0, time.monotonic() - t0, out.reason)
    if method == "gcs":
        res = run_gcs(obj, cfg.start, cfg.gcs_config(seed))
    else:
        res = run_pgcs(obj, cfg.start, HybridConfig(cfg.gcs_config(seed), cfg.powell_config()))
    return ReportRow(method, cfg.function, cfg.dimension, seed, [float(v) for v in res.final_pos],
                     res.final_val, res.outer_iters, res.evals, res.refinements, res.wall_time, res.reason)


def _jobs(cfg: ExperimentConfig):
    for method in cfg.methods:
        if method == "powell":
            yield method, None
        else:
            for seed in cfg.seeds:
                yield method, seed


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[ReportRow]:
    """Run every (method, seed) pair; rows come back ordered by method, then seed.

    Powell is deterministic and runs once regardless of the seed list.
    """
    cfg = config.resolved()
    jobs = list(_jobs(cfg))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, cfg, m, s) for m, s in jobs]
            return [f.result() for f in futures]
    return [_run_one(cfg, m, s) for m, s in jobs]


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _open_dest(destination):
    if destination is None or str(destination) == "-":
        return sys.stdout, False
    path = Path(destination)
    try:
        return open(path, "w", newline=""), True
    except OSError as err:
        raise OSError(f"cannot write report to {path}: {err.strerror or err}") from err


def emit_report(rows, fmt: str = "json", destination=None, config: ExperimentConfig | None = None) -> None:
    """Write rows as JSON (``{schema_version, config_echo, rows}``) or CSV.

    CSV floats use 17 significant digits, positions are ``;``-joined.
    JSON floats use Python's shortest round-trip repr.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to emit")
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config_echo": config.resolved().to_dict() if config is not None else None,
            "rows": [dataclasses.asdict(r) for r in rows],
        }
        text = json.dumps(doc, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(ROW_FIELDS)
        for r in rows:
            w.writerow([
                r.method, r.function, r.dimension, "" if r.seed is None else r.seed,
                ";".join(_fmt(v) for v in r.final_position), _fmt(r.final_value),
                r.outer_iterations, r.evaluations, r.refinements, _fmt(r.wall_time), r.termination_reason,
            ])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt!r}; use json or csv")
    fh, close = _open_dest(destination)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def load_rows(path) -> list[ReportRow]:
    with open(path) as fh:
        doc = json.load(fh)
    return [ReportRow(**r) for r in doc["rows"]]


_LABELS = {"powell": "Powell", "gcs": "GCS", "pgcs": "P-GCS"}


def format_table(title: str, rows: list[ReportRow]) -> str:
    lines = [title, f"{'Method':<8}{'seed':>5}  {'time[s]':>8}  Optima [position..., value]"]
    for r in rows:
        optima = np.array2string(np.array(r.final_position + [r.final_value]), precision=4,
                                 max_line_width=10_000, separator=", ")
        seed = "-" if r.seed is None else str(r.seed)
        lines.append(f"{_LABELS[r.method]:<8}{seed:>5}  {r.wall_time:8.3f}  {optima}")
    return "\n".join(lines)


def reproduce_benchmark_tables(seeds=DEFAULT_SEEDS, output=None, workers: int = 1, stream=None) -> dict:
    """Run bench1-3 with all three methods and print one comparison table each.

    Returns ``{preset: rows}``.  When ``output`` is given, a JSON document
    with one report per preset is written there.
    """
    stream = stream if stream is not None else sys.stdout
    results = {}
    reports = {}
    for name in PRESETS:
        cfg = ExperimentConfig.from_preset(name, methods=["pgcs", "gcs", "powell"], seeds=list(seeds))
        rows = run_experiment(cfg, workers=workers)
        results[name] = rows
        preset = PRESETS[name]
        print(format_table(f"{name}: {preset['function']}, d={preset['dimension']}", rows), file=stream)
        print(file=stream)
        reports[name] = {
            "config_echo": cfg.resolved().to_dict(),
            "rows": [dataclasses.asdict(r) for r in rows],
        }
    if output is not None:
        fh, close = _open_dest(output)
        try:
            json.dump({"schema_version": SCHEMA_VERSION, "reports": reports}, fh, indent=2)
            fh.write("\n")
        finally:
            if close:
                fh.close()
    return results


# name used by the public API surface
reproduce_paper_tables = reproduce_benchmark_tables
