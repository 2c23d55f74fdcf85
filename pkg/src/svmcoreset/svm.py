"""Soft-margin linear SVM: objective evaluation and a subgradient solver.

The objective on a weighted point set (S, u) standing in for a population
of n_src points is

    f((S,u), w) = sum_p u(p) * ( ||w||^2 / n_src + C * max(0, 1 - y w.x) )

which reduces to the plain regularized hinge objective
||w||^2 + C * sum hinge when all weights are 1 and n_src = n, and is an
unbiased estimator of it for importance-sampled subsets.

The solver is projected subgradient descent with best-iterate tracking;
the objective is convex but non-smooth, so the raw iterates are not
monotone and the best iterate is what gets returned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import LabeledDataset

_STOP_WINDOW = 10  # iterations between stagnation checks


@dataclass(frozen=True)
class SolverConfig:
    """Step schedule and stopping knobs for the subgradient solver.

    eta0 defaults to 1/(2 + C * total weight), an inverse curvature-scale
    guess; step k uses eta0 / (1 + k * decay).
    """

    max_iters: int = 50_000
    tolerance: float = 1e-6
    eta0: float | None = None
    decay: float = 1e-3
    averaging: bool = True
    project_radius: float | None = None
    record_trace: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclass
class SvmModel:
    w: np.ndarray
    C: float
    iterations_run: int
    final_objective: float
    objective_trace: list[float] | None = None


def _population(ds: LabeledDataset) -> int:
    ns = ds.population()
    if ns < 1:
        raise ValueError("population size must be >= 1")
    return ns


def evaluate_objective(ds: LabeledDataset, w, C: float) -> float:
    """Weighted hinge objective of margin w on the point set.

    For a raw dataset (unit weights) this is exactly
    ||w||^2 + C * sum_i max(0, 1 - y_i w.x_i).
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (ds.d,):
        raise ValueError(f"margin has dimension {w.shape}, expected ({ds.d},)")
    if C <= 0:
        raise ValueError("C must be positive")
    ns = _population(ds)
    hinges = np.maximum(0.0, 1.0 - ds.y * (ds.X @ w))
    return float(ds.weights.sum() * (w @ w) / ns + C * (ds.weights @ hinges))


def objective_subgradient(ds: LabeledDataset, w, C: float) -> np.ndarray:
    """A subgradient of the weighted objective at w.

    On-margin points (hinge exactly 0) contribute the zero element of
    their subdifferential.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (ds.d,):
        raise ValueError(f"margin has dimension {w.shape}, expected ({ds.d},)")
    if C <= 0:
        raise ValueError("C must be positive")
    ns = _population(ds)
    margins = ds.y * (ds.X @ w)
    active = ds.weights * (margins < 1.0)
    return (2.0 * ds.weights.sum() / ns) * w - C * ((active * ds.y) @ ds.X)


def train(ds: LabeledDataset, C: float, config: SolverConfig | None = None,
          seed: int = 0) -> SvmModel:
    """Minimize the weighted objective by projected subgradient descent.

    Starts from w = 0, steps eta0/(1 + k*decay), optionally averages the
    iterates and projects onto a ball. Tracks the best candidate seen and
    stops once the best objective improves by less than `tolerance`
    (relative) over a 10-iteration window, or at max_iters. The batch
    solver is fully deterministic; `seed` is accepted for interface
    stability with stochastic variants.

    Raises RuntimeError if the objective exceeds 1e6 times its initial
    value (divergent step schedule).
    """
    cfg = config or SolverConfig()
    if ds.n < 1:
        raise ValueError("cannot train on an empty dataset")
    if C <= 0:
        raise ValueError("C must be positive")

    ns = _population(ds)
    u = ds.weights
    total_w = float(u.sum())
    yX = ds.y[:, None] * ds.X
    eta0 = cfg.eta0 if cfg.eta0 is not None else 1.0 / (2.0 + C * total_w)
    reg_coef = 2.0 * total_w / ns

    def objective(vec: np.ndarray) -> float:
        hinges = np.maximum(0.0, 1.0 - yX @ vec)
        return total_w * (vec @ vec) / ns + C * (u @ hinges)

    w = np.zeros(ds.d)
    avg = np.zeros(ds.d)
    f0 = objective(w)
    best_f = f0
    best_w = w.copy()
    trace = [f0] if cfg.record_trace else None
    best_history = [best_f]
    iterations = 0

    for k in range(1, cfg.max_iters + 1):
        iterations = k
        margins = yX @ w
        hinges = np.maximum(0.0, 1.0 - margins)
        f_w = total_w * (w @ w) / ns + C * (u @ hinges)
        if not np.isfinite(f_w) or f_w > 1e6 * max(f0, 1e-300):
            raise RuntimeError(f"solver diverged at iteration {k} "
                               f"(objective {f_w:.3e} vs initial {f0:.3e})")
        if f_w < best_f:
            best_f = f_w
            best_w = w.copy()
        if trace is not None:
            trace.append(f_w)

        active = u * (margins < 1.0)
        grad = reg_coef * w - C * (active @ yX)
        w = w - (eta0 / (1.0 + k * cfg.decay)) * grad
        if cfg.project_radius is not None:
            norm = float(np.linalg.norm(w))
            if norm > cfg.project_radius:
                w *= cfg.project_radius / norm
        if cfg.averaging:
            # Averaged iterates converge more smoothly, but lag the raw
            # ones early on; both are candidates for the best tracker.
            avg += (w - avg) / k
            f_avg = objective(avg)
            if f_avg < best_f:
                best_f = f_avg
                best_w = avg.copy()

        best_history.append(best_f)
        if len(best_history) > _STOP_WINDOW:
            previous = best_history.pop(0)
            if previous - best_f < cfg.tolerance * max(abs(previous), 1e-300):
                break

    f_last = objective(w)
    if f_last < best_f:
        best_f = f_last
        best_w = w.copy()

    final = evaluate_objective(ds, best_w, C)
    return SvmModel(w=best_w, C=C, iterations_run=iterations,
                    final_objective=final, objective_trace=trace)


def relative_error(full: LabeledDataset, w_sub, w_full, C: float) -> float:
    """|f(P, w_sub) - f(P, w_full)| / f(P, w_full), both on the full data."""
    f_full = evaluate_objective(full, w_full, C)
    if f_full == 0.0:
        raise ValueError("reference objective is zero; relative error undefined")
    f_sub = evaluate_objective(full, w_sub, C)
    return abs(f_sub - f_full) / f_full


def save_model(model: SvmModel, path, config: SolverConfig | None = None) -> Path:
    path = Path(path)
    payload = {
        "w": [float(v) for v in model.w],
        "C": model.C,
        "iterations_run": model.iterations_run,
        "final_objective": model.final_objective,
        "config": None if config is None else {
            "max_iters": config.max_iters,
            "tolerance": config.tolerance,
            "eta0": config.eta0,
            "decay": config.decay,
            "averaging": config.averaging,
            "project_radius": config.project_radius,
        },
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def load_model(path) -> SvmModel:
    with open(Path(path)) as fh:
        payload = json.load(fh)
    return SvmModel(
        w=np.asarray(payload["w"], dtype=float),
        C=float(payload["C"]),
        iterations_run=int(payload["iterations_run"]),
        final_objective=float(payload["final_objective"]),
    )
