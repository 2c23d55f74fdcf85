"""Command-line front end.

Subcommands: preprocess, profile, coreset, train, eval, bench, stream.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from .coreset import (CoresetParams, build_coreset, build_uniform,
                      load_coreset, save_coreset, stream_coreset)
from .dataset import (dataset_stats, load_csv, load_libsvm,
                      load_preprocessed_csv, preprocess, save_csv)
from .sensitivity import compute_gamma, save_profile_csv
from .svm import SolverConfig, evaluate_objective, load_model, relative_error, save_model, train

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; we reserve 2 for
    data errors, so remap usage problems to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _add_data_arg(p):
    p.add_argument("data", help="input dataset (CSV, or LIBSVM with --libsvm)")
    p.add_argument("--libsvm", action="store_true",
                   help="parse the input as sparse index:value text")
    p.add_argument("--label-column", type=int, default=0)
    p.add_argument("--no-header", action="store_true")


def _load_raw(args):
    if args.libsvm:
        return load_libsvm(args.data)
    return load_csv(args.data, label_column=args.label_column,
                    has_header=not args.no_header)


def _load_analysis_dataset(args):
    """Load and, unless the sidecar marks it preprocessed, preprocess."""
    if not args.libsvm:
        ds = load_preprocessed_csv(args.data) if args.label_column == 0 and not args.no_header \
            else _load_raw(args)
    else:
        ds = _load_raw(args)
    if not ds.preprocessed:
        ds = preprocess(ds, add_bias=getattr(args, "add_bias", False))
    return ds


def build_parser() -> _Parser:
    parser = _Parser(prog="svmcoreset",
                     description="Sensitivity-sampled coresets for linear SVM training")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("preprocess", help="center/scale a dataset onto the unit ball")
    _add_data_arg(p)
    p.add_argument("--add-bias", action="store_true",
                   help="append the constant bias coordinate")
    p.add_argument("--out", required=True)

    p = sub.add_parser("profile", help="dump per-point sensitivity bounds as CSV")
    _add_data_arg(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("coreset", help="build and save a weighted subsample")
    _add_data_arg(p)
    p.add_argument("--method", choices=("sensitivity", "uniform"),
                   default="sensitivity")
    p.add_argument("--size", type=int, default=None,
                   help="explicit subsample size (otherwise the size formula is used)")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--c-const", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train an SVM on a dataset or coreset file")
    p.add_argument("data", help="dataset CSV, or coreset CSV with --coreset")
    p.add_argument("--coreset", action="store_true",
                   help="input is a saved coreset (weight,label,features)")
    p.add_argument("--label-column", type=int, default=0)
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--reg-c", type=float, default=1.0)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="evaluate a model's objective on a dataset")
    _add_data_arg(p)
    p.add_argument("--model", required=True)
    p.add_argument("--ref-model", default=None,
                   help="full-data model for a relative-error comparison")
    p.add_argument("--reg-c", type=float, default=1.0)
    p.add_argument("--out", default=None, help="write the JSON result here")

    p = sub.add_parser("bench", help="run the subsampling benchmark")
    p.add_argument("--plan", default=None, help="JSON/TOML plan file (flags win)")
    p.add_argument("--data", default=None, help="dataset CSV (default: bundled synthetic)")
    p.add_argument("--synthetic", action="store_true",
                   help="force the bundled synthetic dataset")
    p.add_argument("--sizes", default=None, help="comma-separated subsample sizes")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--methods", default=None, help="comma-separated method names")
    p.add_argument("--reg-c", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--c-const", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--label-column", type=int, default=None)
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)

    p = sub.add_parser("stream", help="merge-and-reduce coreset over a point stream")
    _add_data_arg(p)
    p.add_argument("--block-size", type=int, default=500)
    p.add_argument("--size", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--c-const", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    return parser


def _cmd_preprocess(args) -> int:
    ds = _load_raw(args)
    out = preprocess(ds, add_bias=args.add_bias)
    save_csv(out, args.out)
    stats = dataset_stats(out)
    print(f"preprocessed n={stats.n} d={stats.d} max_norm={stats.max_norm:.6f} "
          f"-> {args.out}")
    return 0


def _cmd_profile(args) -> int:
    ds = _load_analysis_dataset(args)
    profile = compute_gamma(ds)
    save_profile_csv(profile, args.out)
    print(f"profile n={profile.n} total_sensitivity={profile.total:.6f} -> {args.out}")
    return 0


def _cmd_coreset(args) -> int:
    ds = _load_analysis_dataset(args)
    if args.method == "uniform":
        if args.size is None:
            raise ValueError("--size is required for the uniform method")
        cs = build_uniform(ds, args.size, args.seed)
    else:
        params = CoresetParams(epsilon=args.epsilon, delta=args.delta,
                               c=args.c_const, explicit_size=args.size,
                               seed=args.seed)
        cs = build_coreset(ds, compute_gamma(ds), params)
    save_coreset(cs, args.out)
    print(f"coreset method={cs.method} m={cs.m} distinct={cs.distinct} -> {args.out}")
    return 0


def _cmd_train(args) -> int:
    if args.coreset:
        ds = load_coreset(args.data).to_dataset()
    else:
        ds = load_csv(args.data, label_column=args.label_column,
                      has_header=not args.no_header)
    kwargs = {}
    if args.max_iters is not None:
        kwargs["max_iters"] = args.max_iters
    if args.tolerance is not None:
        kwargs["tolerance"] = args.tolerance
    config = SolverConfig(**kwargs)
    model = train(ds, args.reg_c, config, seed=args.seed)
    save_model(model, args.out, config=config)
    print(f"trained iterations={model.iterations_run} "
          f"objective={model.final_objective:.6f} -> {args.out}")
    return 0


def _cmd_eval(args) -> int:
    ds = _load_analysis_dataset(args)
    model = load_model(args.model)
    result = {"objective": evaluate_objective(ds, model.w, args.reg_c)}
    if args.ref_model is not None:
        ref = load_model(args.ref_model)
        result["rel_error"] = relative_error(ds, model.w, ref.w, args.reg_c)
    text = json.dumps(result, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def _cmd_bench(args) -> int:
    overrides = {
        "trials": args.trials,
        "C": args.reg_c,
        "epsilon": args.epsilon,
        "delta": args.delta,
        "c": args.c_const,
        "base_seed": args.seed,
        "label_column": args.label_column,
    }
    if args.sizes is not None:
        overrides["sizes"] = tuple(int(s) for s in args.sizes.split(","))
    if args.methods is not None:
        overrides["methods"] = tuple(m.strip() for m in args.methods.split(","))
    if args.no_header:
        overrides["has_header"] = False
    raw = bench_mod.read_plan_dict(args.plan) if args.plan is not None else {}
    if args.synthetic:
        raw.pop("data", None)
    elif args.data is not None:
        overrides["data"] = args.data
    plan = bench_mod.plan_from_dict(raw, overrides)
    records = bench_mod.run_bench(plan)
    summary = bench_mod.summarize(records)
    bench_mod.emit_report(summary, args.out, format=args.format)
    failures = sum(1 for r in records if r.error is not None)
    print(f"bench cells={len(records)} failures={failures} -> {args.out}")
    return 0


def _cmd_stream(args) -> int:
    ds = _load_analysis_dataset(args)
    params = CoresetParams(epsilon=args.epsilon, delta=args.delta,
                           c=args.c_const, explicit_size=args.size,
                           seed=args.seed)
    cs = stream_coreset(ds.points(), args.block_size, params)
    save_coreset(cs, args.out)
    print(f"stream coreset size={cs.size} m={cs.m} -> {args.out}")
    return 0


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "profile": _cmd_profile,
    "coreset": _cmd_coreset,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "stream": _cmd_stream,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, KeyError, RuntimeError, IndexError,
            json.JSONDecodeError) as exc:
        sys.stderr.write(f"svmcoreset {args.command}: {exc}\n")
        return DATA_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
