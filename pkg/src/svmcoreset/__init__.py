"""svmcoreset: sensitivity-sampled coresets for soft-margin linear SVMs.

Workflow: load or generate a labeled dataset, `preprocess` it onto the
unit ball, `compute_gamma` the per-point sensitivity bounds, sample a
weighted `build_coreset`, and `train` on it; `bench` compares the result
against stratified-uniform subsampling, and `stream_coreset` composes
coresets over a point stream with merge-and-reduce.
"""

from .bench import (BenchPlan, BenchRecord, BenchSummary, emit_report,
                    load_plan, load_report, run_bench, summarize)
from .coreset import (Coreset, CoresetParams, build_coreset, build_uniform,
                      load_coreset, merge, reduce, sample_size, save_coreset,
                      stream_coreset)
from .dataset import (DatasetStats, LabeledDataset, LabeledPoint,
                      dataset_stats, from_points, load_csv, load_libsvm,
                      load_preprocessed_csv, preprocess, save_csv)
from .sampling import GENERATOR_ID, derive_seed, multinomial_counts
from .sensitivity import (QuerySample, SensitivityProfile, compute_gamma,
                          contribution_ratios, empirical_sensitivities,
                          empirical_sensitivity, sample_feasible_queries,
                          save_profile_csv, total_sensitivity_bound)
from .svm import (SolverConfig, SvmModel, evaluate_objective, load_model,
                  objective_subgradient, relative_error, save_model, train)
from .synthetic import bundled_synthetic, make_synthetic

__version__ = "0.1.0"

__all__ = [
    "BenchPlan", "BenchRecord", "BenchSummary", "Coreset", "CoresetParams",
    "DatasetStats", "GENERATOR_ID", "LabeledDataset", "LabeledPoint",
    "QuerySample", "SensitivityProfile", "SolverConfig", "SvmModel",
    "build_coreset", "build_uniform", "bundled_synthetic", "compute_gamma",
    "contribution_ratios", "dataset_stats", "derive_seed",
    "emit_report", "empirical_sensitivities", "empirical_sensitivity",
    "evaluate_objective", "from_points", "load_coreset", "load_csv",
    "load_libsvm", "load_model", "load_plan", "load_preprocessed_csv",
    "load_report", "make_synthetic", "merge", "multinomial_counts",
    "objective_subgradient", "preprocess", "reduce", "relative_error",
    "run_bench", "sample_feasible_queries", "sample_size", "save_coreset",
    "save_csv", "save_model", "save_profile_csv", "stream_coreset",
    "summarize", "total_sensitivity_bound", "train",
]
