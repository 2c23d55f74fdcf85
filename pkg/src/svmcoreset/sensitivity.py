"""Per-point sensitivity upper bounds and a Monte-Carlo validation oracle.

The closed-form bound for a preprocessed dataset of n points is

    gamma_i = 1/n + (ln n + ||x_i|| * ln^2 n) / n

whose sum never exceeds 1 + ln n + ln^2 n. The oracle lower-bounds the
true sensitivity sup by sampling candidate margins from the admissible
query ball, so oracle <= gamma must hold everywhere; it is the empirical
check that the closed form really dominates.

All logarithms are natural.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_PROB_TOL = 1e-12


@dataclass(frozen=True)
class SensitivityProfile:
    """Per-point bounds gamma, their total t, and the sampling distribution."""

    gamma: np.ndarray
    total: float
    probs: np.ndarray
    norms: np.ndarray
    n: int
    d: int

    def __post_init__(self):
        for name in ("gamma", "probs", "norms"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.gamma.shape != (self.n,) or self.probs.shape != (self.n,):
            raise ValueError("profile arrays must have length n")
        if np.any(self.gamma < 0) or self.total <= 0:
            raise ValueError("gamma must be nonnegative with positive total")
        if abs(self.probs.sum() - 1.0) > _PROB_TOL:
            raise ValueError("probs must sum to 1")


@dataclass(frozen=True)
class QuerySample:
    """A candidate margin w plus whether it passes the non-separation test."""

    w: np.ndarray
    feasible: bool


def total_sensitivity_bound(n: int) -> float:
    """Worst-case sum of the per-point bounds: 1 + ln n + ln^2 n."""
    if n < 3:
        raise ValueError("need n >= 3 so that ln n > 1")
    ln_n = math.log(n)
    return 1.0 + ln_n + ln_n * ln_n


def compute_gamma(ds, require_preprocessed: bool = True) -> SensitivityProfile:
    """Closed-form sensitivity upper bounds for every point, in one pass.

    Parameters
    ----------
    ds : LabeledDataset
        Preprocessed dataset (unit-ball norms); n >= 3.
    require_preprocessed : bool
        If False, unpreprocessed input only triggers a warning. The bound
        is then not guaranteed to dominate the true sensitivities.
    """
    if ds.n < 3:
        raise ValueError("need n >= 3 so that ln n > 1")
    if not ds.preprocessed:
        if require_preprocessed:
            raise ValueError("dataset must be preprocessed (centered, unit ball)")
        warnings.warn("computing sensitivity bounds on unpreprocessed data",
                      stacklevel=2)
    n = ds.n
    ln_n = math.log(n)
    norms = np.linalg.norm(ds.X, axis=1)
    gamma = (1.0 + ln_n + norms * (ln_n * ln_n)) / n
    total = float(gamma.sum())
    return SensitivityProfile(
        gamma=gamma, total=total, probs=gamma / total,
        norms=norms, n=n, d=ds.d,
    )


def query_radius(n: int) -> float:
    return math.log(n)


def feasibility_threshold(n: int) -> float:
    """Minimum total hinge loss a margin must leave to count as a query."""
    return n / math.log(n)


def sample_query_ball(n: int, d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from the d-ball of radius ln n (direction x radius^(1/d))."""
    g = rng.standard_normal((count, d))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    radii = query_radius(n) * rng.random(count) ** (1.0 / d)
    return g * (radii / norms)[:, None]


def hinge_sum(ds, w: np.ndarray) -> float:
    margins = ds.y * (ds.X @ w)
    return float(np.maximum(0.0, 1.0 - margins).sum())


def is_feasible_query(ds, w: np.ndarray) -> bool:
    return hinge_sum(ds, w) >= feasibility_threshold(ds.n)


def sample_feasible_queries(ds, count: int, seed: int,
                            max_batches: int = 200) -> list[QuerySample]:
    """Rejection-sample `count` feasible queries from the admissible ball."""
    rng = np.random.default_rng(seed)
    out: list[QuerySample] = []
    threshold = feasibility_threshold(ds.n)
    for _ in range(max_batches):
        W = sample_query_ball(ds.n, ds.d, max(count, 64), rng)
        sums = np.maximum(0.0, 1.0 - ds.y[:, None] * (ds.X @ W.T)).sum(axis=0)
        for i in np.flatnonzero(sums >= threshold):
            out.append(QuerySample(w=W[i], feasible=True))
            if len(out) == count:
                return out
    raise RuntimeError(f"could not find {count} feasible queries "
                       f"({len(out)} found); data may be separable")


def contribution_ratios(ds, w: np.ndarray, reg_c: float = 1.0) -> np.ndarray:
    """Each point's share f~(p_i, w) / f(P, w) of the objective at margin w."""
    if reg_c <= 0:
        raise ValueError("reg_c must be positive")
    hinges = np.maximum(0.0, 1.0 - ds.y * (ds.X @ w))
    w_norm2 = float(w @ w)
    denom = w_norm2 + reg_c * hinges.sum()
    return (w_norm2 / ds.n + reg_c * hinges) / denom


def empirical_sensitivities(ds, num_queries: int, seed: int,
                            reg_c: float = 1.0,
                            batch_size: int = 20000) -> tuple[np.ndarray, float]:
    """Monte-Carlo lower bounds on every point's sensitivity at once.

    Samples margins uniformly from the radius-(ln n) ball, discards the
    ones that would separate the data (total hinge below n/ln n), and for
    the rest keeps each point's maximum objective share. Returns the
    per-point maxima (zeros if nothing was feasible) and the feasible
    fraction of the sampled queries.
    """
    if num_queries < 1:
        raise ValueError("num_queries must be >= 1")
    if reg_c <= 0:
        raise ValueError("reg_c must be positive")
    if not ds.preprocessed:
        warnings.warn("sensitivity oracle on unpreprocessed data", stacklevel=2)

    n, d = ds.n, ds.d
    rng = np.random.default_rng(seed)
    threshold = feasibility_threshold(n)
    yX = ds.y[:, None] * ds.X
    best = np.zeros(n)
    feasible = 0
    remaining = num_queries
    while remaining > 0:
        b = min(batch_size, remaining)
        remaining -= b
        W = sample_query_ball(n, d, b, rng)
        H = np.maximum(0.0, 1.0 - yX @ W.T)          # (n, b) hinge losses
        hinge_totals = H.sum(axis=0)
        mask = hinge_totals >= threshold
        feasible += int(mask.sum())
        if not mask.any():
            continue
        w_norm2 = (W[mask] ** 2).sum(axis=1)
        denom = w_norm2 + reg_c * hinge_totals[mask]  # equals f(P, w)
        shares = (w_norm2 / n + reg_c * H[:, mask]) / denom
        np.maximum(best, shares.max(axis=1), out=best)
    return best, feasible / num_queries


def empirical_sensitivity(ds, point_index: int, num_queries: int, seed: int,
                          reg_c: float = 1.0) -> float:
    """Monte-Carlo lower bound on one point's sensitivity.

    Uses the same query stream as `empirical_sensitivities`, so the two
    agree exactly for matching (seed, num_queries).
    """
    if not 0 <= point_index < ds.n:
        raise IndexError(f"point index {point_index} out of range for n={ds.n}")
    values, _ = empirical_sensitivities(ds, num_queries, seed, reg_c=reg_c)
    return float(values[point_index])


def save_profile_csv(profile: SensitivityProfile, path) -> Path:
    """Dump "index,norm,gamma,prob" rows for inspection or plotting."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "norm", "gamma", "prob"])
        for i in range(profile.n):
            writer.writerow([i, repr(float(profile.norms[i])),
                             repr(float(profile.gamma[i])),
                             repr(float(profile.probs[i]))])
    return path
