#!/usr/bin/env python3
"""The benchmark harness: coreset vs. uniform across a size grid.

Every (method, size, trial) cell gets its own derived seed; the summary
reports mean/sd of relative error and of training time relative to the
full-data run. A scaled-down version of the protocol runs here; the
acceptance suite runs the full 100-trial version.
"""

import tempfile
from pathlib import Path

from svmcoreset import (BenchPlan, emit_report, load_report, run_bench,
                        summarize)

plan = BenchPlan(
    data=None,                 # bundled synthetic 5000 x 10 instance
    sizes=(50, 100, 200, 400),
    trials=20,
    C=1.0,
    base_seed=2024,
)
print(f"running {len(plan.methods)} methods x {len(plan.sizes)} sizes "
      f"x {plan.trials} trials ...")
records = run_bench(plan)
failures = [r for r in records if r.error is not None]
print(f"{len(records)} cells, {len(failures)} failures")

summary = summarize(records)
print(f"{'method':12s} {'size':>5s} {'rel_error':>16s} {'rel_time':>10s}")
for row in summary:
    print(f"{row.method:12s} {row.size:5d} "
          f"{row.mean_rel_error:8.4f} +- {row.sd_rel_error:.4f} "
          f"{row.mean_rel_time:9.3f}")

with tempfile.TemporaryDirectory() as tmp:
    path = emit_report(summary, Path(tmp) / "report.csv", format="csv")
    again = load_report(path, format="csv")
    print(f"report round-trips exactly: {again == summary}")
