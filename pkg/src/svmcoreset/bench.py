"""Benchmark harness: coreset vs. stratified-uniform subsampling.

For each (method, size, trial) cell the harness builds a subsample of
exactly `size` points with its own derived seed, trains on it, and
records the relative objective error against the full-data model plus
build/train wall times. Both methods run on the same size grid so they
are compared like for like; the formula-driven sample size is exercised
by the coreset module itself.

Aggregation uses the population standard deviation (ddof=0).
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .coreset import CoresetParams, build_coreset, build_uniform
from .dataset import LabeledDataset, load_csv, preprocess
from .sampling import derive_seed
from .sensitivity import compute_gamma
from .svm import SolverConfig, relative_error, train
from .synthetic import bundled_synthetic

DEFAULT_METHODS = ("sensitivity", "uniform")

# Harness-side solver defaults: iteration budget trimmed so that
# thousand-cell plans stay interactive; accuracy is shared by both
# methods, so the comparison is unaffected.
BENCH_SOLVER = SolverConfig(max_iters=2000, tolerance=1e-5, averaging=False)


@dataclass(frozen=True)
class BenchPlan:
    """One benchmark campaign: dataset, size grid, trial count, knobs."""

    data: str | None = None            # CSV path; None = bundled synthetic
    sizes: tuple[int, ...] = (50, 100, 200, 400, 800)
    trials: int = 10
    methods: tuple[str, ...] = DEFAULT_METHODS
    C: float = 1.0
    epsilon: float = 0.1
    delta: float = 0.1
    c: float = 1.0
    base_seed: int = 0
    label_column: int = 0
    has_header: bool = True
    add_bias: bool = False
    solver: SolverConfig = field(default_factory=lambda: BENCH_SOLVER)

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "methods", tuple(self.methods))
        if not sizes:
            raise ValueError("plan needs at least one size")
        if any(s < 2 for s in sizes):
            raise ValueError("every size must be >= 2")
        if any(b >= a for a, b in zip(sizes[1:], sizes)):
            raise ValueError("sizes must be strictly increasing")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.methods) - set(DEFAULT_METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if self.C <= 0:
            raise ValueError("C must be positive")


@dataclass(frozen=True)
class BenchRecord:
    method: str
    size: int
    trial: int
    seed: int
    rel_error: float
    build_time_s: float
    train_time_s: float
    full_train_time_s: float
    error: str | None = None


@dataclass(frozen=True)
class BenchSummary:
    method: str
    size: int
    mean_rel_error: float
    sd_rel_error: float
    mean_rel_time: float
    sd_rel_time: float
    trials: int


def load_plan_dataset(plan: BenchPlan) -> LabeledDataset:
    if plan.data is None:
        return bundled_synthetic()
    return load_csv(plan.data, label_column=plan.label_column,
                    has_header=plan.has_header)


def run_bench(plan: BenchPlan, dataset: LabeledDataset | None = None,
              clock: Callable[[], float] = time.perf_counter) -> list[BenchRecord]:
    """Execute a plan and return one record per (method, size, trial).

    The full-data reference model is trained once. Every cell derives its
    own seed from (base_seed, method, size, trial), so no seed is reused
    and cells can run in any order. Build or train failures become
    records with an error message instead of aborting the run. `clock`
    exists so tests can inject a deterministic timer.
    """
    ds = dataset if dataset is not None else load_plan_dataset(plan)
    if not ds.preprocessed:
        ds = preprocess(ds, add_bias=plan.add_bias)
    if any(s > ds.n for s in plan.sizes):
        raise ValueError("plan sizes exceed the dataset size")

    t0 = clock()
    full_model = train(ds, plan.C, plan.solver,
                       seed=derive_seed(plan.base_seed, "full"))
    full_time = clock() - t0

    records: list[BenchRecord] = []
    for method in plan.methods:
        for size in plan.sizes:
            for trial in range(plan.trials):
                seed = derive_seed(plan.base_seed, method, size, trial)
                records.append(_run_cell(ds, plan, full_model, full_time,
                                         method, size, trial, seed, clock))
    return records


def _run_cell(ds, plan, full_model, full_time, method, size, trial, seed,
              clock) -> BenchRecord:
    try:
        t0 = clock()
        if method == "sensitivity":
            profile = compute_gamma(ds)
            params = CoresetParams(epsilon=plan.epsilon, delta=plan.delta,
                                   c=plan.c, explicit_size=size,
                                   method="sensitivity", seed=seed)
            subsample = build_coreset(ds, profile, params)
        else:
            subsample = build_uniform(ds, size, seed)
        build_time = clock() - t0

        t0 = clock()
        model = train(subsample.to_dataset(), plan.C, plan.solver, seed=seed)
        train_time = clock() - t0

        rel = relative_error(ds, model.w, full_model.w, plan.C)
        return BenchRecord(method, size, trial, seed, rel,
                           build_time, train_time, full_time)
    except Exception as exc:  # noqa: BLE001 - failures become records
        return BenchRecord(method, size, trial, seed, math.nan,
                           math.nan, math.nan, full_time, error=str(exc))


def summarize(records: Sequence[BenchRecord]) -> list[BenchSummary]:
    """Mean/sd of relative error and relative training time per cell group.

    Relative training time is (build + train) / full_train per record.
    Failed records are excluded. Output is sorted by (method, size) so
    repeated runs serialize identically.
    """
    if not records:
        raise ValueError("no records to summarize")
    keys = sorted({(r.method, r.size) for r in records if r.error is None})
    out = []
    for method, size in keys:
        group = [r for r in records
                 if r.error is None and r.method == method and r.size == size]
        errs = np.array([r.rel_error for r in group])
        times = np.array([(r.build_time_s + r.train_time_s) / r.full_train_time_s
                          for r in group])
        out.append(BenchSummary(
            method=method, size=size,
            mean_rel_error=float(errs.mean()), sd_rel_error=float(errs.std()),
            mean_rel_time=float(times.mean()), sd_rel_time=float(times.std()),
            trials=len(group),
        ))
    return out


_CSV_COLUMNS = ("method", "size", "mean_rel_error", "sd_rel_error",
                "mean_rel_time", "sd_rel_time", "trials")


def emit_report(summary: Sequence[BenchSummary], path, format: str = "csv") -> Path:
    """Write the summary as CSV or JSON with byte-stable ordering."""
    path = Path(path)
    rows = sorted(summary, key=lambda s: (s.method, s.size))
    if format == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_CSV_COLUMNS)
            for s in rows:
                writer.writerow([s.method, s.size,
                                 repr(s.mean_rel_error), repr(s.sd_rel_error),
                                 repr(s.mean_rel_time), repr(s.sd_rel_time),
                                 s.trials])
    elif format == "json":
        with open(path, "w") as fh:
            json.dump([asdict(s) for s in rows], fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise ValueError(f"unknown report format {format!r}")
    return path


def load_report(path, format: str = "csv") -> list[BenchSummary]:
    path = Path(path)
    if format == "csv":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        return [BenchSummary(
            method=r["method"], size=int(r["size"]),
            mean_rel_error=float(r["mean_rel_error"]),
            sd_rel_error=float(r["sd_rel_error"]),
            mean_rel_time=float(r["mean_rel_time"]),
            sd_rel_time=float(r["sd_rel_time"]),
            trials=int(r["trials"]),
        ) for r in rows]
    if format == "json":
        with open(path) as fh:
            data = json.load(fh)
        return [BenchSummary(**item) for item in data]
    raise ValueError(f"unknown report format {format!r}")


def read_plan_dict(path) -> dict:
    """Raw plan dictionary from a JSON or TOML file (extension decides)."""
    path = Path(path)
    if path.suffix == ".json":
        with open(path) as fh:
            return json.load(fh)
    if path.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python 3.10
            import tomli as tomllib
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    raise ValueError(f"plan file must be .json or .toml, got {path.suffix!r}")


def load_plan(path) -> BenchPlan:
    return plan_from_dict(read_plan_dict(path))


def plan_from_dict(raw: dict, overrides: dict | None = None) -> BenchPlan:
    """Build a plan from file values, letting explicit overrides win."""
    merged = dict(raw)
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})
    solver_raw = merged.pop("solver", None)
    solver = SolverConfig(**solver_raw) if isinstance(solver_raw, dict) \
        else (solver_raw or BENCH_SOLVER)
    known = {f for f in BenchPlan.__dataclass_fields__ if f != "solver"}
    unknown = set(merged) - known
    if unknown:
        raise ValueError(f"unknown plan fields: {sorted(unknown)}")
    merged["sizes"] = tuple(merged.get("sizes", BenchPlan.sizes))
    merged["methods"] = tuple(merged.get("methods", DEFAULT_METHODS))
    return BenchPlan(solver=solver, **merged)
