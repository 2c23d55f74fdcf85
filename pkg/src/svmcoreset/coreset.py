"""Importance-sampled coresets, the stratified-uniform baseline, and the
streaming merge-and-reduce composer.

A coreset is built by drawing m points from the multinomial distribution
over the sensitivity bounds and weighting each retained point with
u_i = t * K_i / (gamma_i * m), which makes the weighted objective an
unbiased estimator of the full objective at every margin. The m in the
denominator (rather than the number of distinct retained points) is what
unbiasedness requires; the `distinct_weights` flag switches to the
distinct count for comparison.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .dataset import NORM_SLACK, LabeledDataset, LabeledPoint, from_points
from .sampling import GENERATOR_ID, derive_seed, make_generator, multinomial_counts
from .sensitivity import SensitivityProfile

_METHODS = ("sensitivity", "uniform")


@dataclass(frozen=True)
class CoresetParams:
    """Sampling knobs: accuracy targets, the sample-size constant, and seed.

    `explicit_size` overrides the size formula; `distinct_weights` divides
    weights by the distinct retained count instead of m (a biased variant
    kept for comparison); `scale_delta_by_t` multiplies the log(1/delta)
    term by t in the size formula (a more conservative variant).
    """

    epsilon: float = 0.1
    delta: float = 0.1
    c: float = 1.0
    explicit_size: int | None = None
    method: str = "sensitivity"
    seed: int = 0
    distinct_weights: bool = False
    scale_delta_by_t: bool = False

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must be in (0, 1)")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.explicit_size is not None and self.explicit_size < 1:
            raise ValueError("explicit_size must be >= 1")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")


@dataclass(frozen=True)
class Coreset:
    """A weighted subsample plus the provenance needed to reproduce it."""

    X: np.ndarray
    y: np.ndarray
    weights: np.ndarray
    counts: np.ndarray
    indices: np.ndarray | None
    m: int
    distinct: int
    source_n: int
    seed: int
    method: str
    epsilon: float
    delta: float
    c: float
    t: float | None
    generator_id: str = GENERATOR_ID
    preprocessed: bool = True

    def __post_init__(self):
        if np.any(self.weights <= 0):
            raise ValueError("coreset weights must be strictly positive")
        if not self.distinct <= self.m:
            raise ValueError("distinct count cannot exceed total draws")

    @property
    def size(self) -> int:
        return self.X.shape[0]

    def to_dataset(self) -> LabeledDataset:
        return LabeledDataset(self.X, self.y, self.weights,
                              preprocessed=self.preprocessed,
                              source_n=self.source_n)


def sample_size(t: float, d: int, params: CoresetParams) -> int:
    """Number of multinomial draws for the (epsilon, delta) guarantee.

    ceil(c * (t / eps^2) * (d * ln t + ln(1/delta))), at least 1. The
    caller caps the result at the population size. Requires t > 1 so the
    d-term is positive.
    """
    if t <= 1.0:
        raise ValueError("total sensitivity t must exceed 1")
    if d < 1:
        raise ValueError("d must be >= 1")
    log_term = math.log(1.0 / params.delta)
    if params.scale_delta_by_t:
        log_term *= t
    raw = params.c * (t / params.epsilon ** 2) * (d * math.log(t) + log_term)
    return max(1, math.ceil(raw))


def _full_passthrough(ds: LabeledDataset, params: CoresetParams, method: str,
                      t: float | None) -> Coreset:
    n = ds.n
    return Coreset(
        X=ds.X, y=ds.y, weights=np.ones(n), counts=np.ones(n, dtype=int),
        indices=np.arange(n), m=n, distinct=n, source_n=ds.population(),
        seed=params.seed, method=method, epsilon=params.epsilon,
        delta=params.delta, c=params.c, t=t, preprocessed=ds.preprocessed,
    )


def build_coreset(ds: LabeledDataset, profile: SensitivityProfile,
                  params: CoresetParams) -> Coreset:
    """Sample a sensitivity-weighted coreset from a preprocessed dataset.

    Draws K ~ Multinomial(m, gamma/t) with the pinned generator, keeps the
    points drawn at least once, and weights them t*K_i/(gamma_i*m). If the
    requested m reaches n, the full dataset with unit weights is returned
    instead (sampling with replacement past the population only duplicates).
    Identical inputs and seed give bit-identical coresets.
    """
    if not ds.preprocessed:
        raise ValueError("dataset must be preprocessed")
    if profile.n != ds.n:
        raise ValueError("profile does not match the dataset")
    m = params.explicit_size if params.explicit_size is not None \
        else sample_size(profile.total, ds.d, params)
    if m >= ds.n:
        return _full_passthrough(ds, params, "sensitivity", profile.total)

    counts = multinomial_counts(profile.probs, m, params.seed)
    sampled = np.flatnonzero(counts)
    k = counts[sampled].astype(float)
    denom = float(sampled.size) if params.distinct_weights else float(m)
    weights = profile.total * k / (profile.gamma[sampled] * denom)
    return Coreset(
        X=ds.X[sampled], y=ds.y[sampled], weights=weights,
        counts=counts[sampled], indices=sampled, m=m, distinct=int(sampled.size),
        source_n=ds.population(), seed=params.seed, method="sensitivity",
        epsilon=params.epsilon, delta=params.delta, c=params.c,
        t=profile.total, preprocessed=ds.preprocessed,
    )


def build_uniform(ds: LabeledDataset, size: int, seed: int) -> Coreset:
    """Class-stratified uniform baseline at a fixed subsample size.

    Per-class sample counts follow class frequencies with largest-remainder
    rounding (each class gets at least one); sampling is without
    replacement within a class, and each sampled point is weighted
    n_class / size_class so each class keeps its population mass.
    """
    if size < 2:
        raise ValueError("size must be >= 2")
    if size > ds.n:
        raise ValueError(f"size {size} exceeds dataset size {ds.n}")
    class_labels = np.unique(ds.y)
    if class_labels.size < 2:
        raise ValueError("categorical uniform sampling needs both classes")

    class_indices = [np.flatnonzero(ds.y == lab) for lab in class_labels]
    pops = np.array([idx.size for idx in class_indices])
    quotas = size * pops / ds.n
    alloc = np.floor(quotas).astype(int)
    # Largest-remainder distribution of the leftover draws, ties by class order.
    order = np.argsort(-(quotas - alloc), kind="stable")
    for j in order[: size - alloc.sum()]:
        alloc[j] += 1
    # Every class contributes at least one point and at most its population.
    for j in range(alloc.size):
        while alloc[j] == 0:
            donor = int(np.argmax(alloc))
            alloc[donor] -= 1
            alloc[j] += 1
        if alloc[j] > pops[j]:
            excess = alloc[j] - pops[j]
            alloc[j] = pops[j]
            room = np.flatnonzero((pops - alloc) > 0)
            for r in room[:excess]:
                alloc[r] += 1

    rng = make_generator(seed)
    picked = []
    weights = []
    for idx, count, pop in zip(class_indices, alloc, pops):
        chosen = np.sort(rng.choice(idx, size=count, replace=False))
        picked.append(chosen)
        weights.append(np.full(count, pop / count))
    indices = np.concatenate(picked)
    return Coreset(
        X=ds.X[indices], y=ds.y[indices], weights=np.concatenate(weights),
        counts=np.ones(indices.size, dtype=int), indices=indices,
        m=size, distinct=int(indices.size), source_n=ds.population(),
        seed=seed, method="uniform", epsilon=math.nan, delta=math.nan,
        c=math.nan, t=None, preprocessed=ds.preprocessed,
    )


def _as_dataset(obj) -> LabeledDataset:
    return obj.to_dataset() if isinstance(obj, Coreset) else obj


def merge(a, b) -> LabeledDataset:
    """Concatenate two weighted point sets (coresets or datasets)."""
    da, db = _as_dataset(a), _as_dataset(b)
    if da.n == 0:
        return db
    if db.n == 0:
        return da
    if da.d != db.d:
        raise ValueError(f"dimension mismatch: {da.d} vs {db.d}")
    return LabeledDataset(
        np.vstack([da.X, db.X]),
        np.concatenate([da.y, db.y]),
        np.concatenate([da.weights, db.weights]),
        preprocessed=da.preprocessed and db.preprocessed,
        source_n=da.population() + db.population(),
    )


def reduce(ws: LabeledDataset, params: CoresetParams) -> Coreset:
    """Re-compress a weighted point set into a smaller coreset.

    Generalizes the sensitivity bounds to weighted points via
    gamma_i = u_i * (1 + ln W + ||x_i|| ln^2 W) / W with W the total
    weight, which reduces to the unweighted bounds when all u_i = 1. The
    output weights keep the total estimator unbiased (the expected output
    mass equals W). Inputs with W < 3, or a target size reaching the
    input size, are passed through unchanged.
    """
    if ws.n == 0:
        raise ValueError("cannot reduce an empty point set")
    if np.any(ws.weights <= 0):
        raise ValueError("reduce requires strictly positive weights")
    total_weight = float(ws.weights.sum())
    if total_weight < 3.0:
        return _passthrough_weighted(ws, params, t=None)

    ln_w = math.log(total_weight)
    norms = np.linalg.norm(ws.X, axis=1)
    gamma = ws.weights * (1.0 + ln_w + norms * (ln_w * ln_w)) / total_weight
    t = float(gamma.sum())
    probs = gamma / t

    m = params.explicit_size if params.explicit_size is not None \
        else sample_size(t, ws.d, params)
    if m >= ws.n:
        return _passthrough_weighted(ws, params, t=t)

    counts = multinomial_counts(probs, m, params.seed)
    sampled = np.flatnonzero(counts)
    k = counts[sampled].astype(float)
    denom = float(sampled.size) if params.distinct_weights else float(m)
    weights = ws.weights[sampled] * t * k / (gamma[sampled] * denom)
    return Coreset(
        X=ws.X[sampled], y=ws.y[sampled], weights=weights,
        counts=counts[sampled], indices=sampled, m=m,
        distinct=int(sampled.size), source_n=ws.population(),
        seed=params.seed, method="sensitivity", epsilon=params.epsilon,
        delta=params.delta, c=params.c, t=t, preprocessed=ws.preprocessed,
    )


def _passthrough_weighted(ws: LabeledDataset, params: CoresetParams,
                          t: float | None) -> Coreset:
    return Coreset(
        X=ws.X, y=ws.y, weights=ws.weights.copy(),
        counts=np.ones(ws.n, dtype=int), indices=np.arange(ws.n),
        m=ws.n, distinct=ws.n, source_n=ws.population(),
        seed=params.seed, method="sensitivity", epsilon=params.epsilon,
        delta=params.delta, c=params.c, t=t, preprocessed=ws.preprocessed,
    )


def stream_coreset(source: Iterable[LabeledPoint], block_size: int,
                   params: CoresetParams) -> Coreset:
    """Compress a point stream with a binary merge-and-reduce tree.

    Each full buffer of `block_size` points is reduced to a coreset;
    sibling coresets of equal height are merged and re-reduced. Memory
    stays bounded by one coreset per tree level. The k-th reduce
    operation (in execution order, counting from 0) runs with seed
    derive_seed(params.seed, k), so a stream that fits in a single block
    is exactly one seeded build, and two blocks compose as
    reduce(merge(reduce(B1), reduce(B2))).
    """
    if block_size < 3:
        raise ValueError("block_size must be >= 3")

    levels: dict[int, Coreset] = {}
    op_index = 0

    def run_reduce(ws: LabeledDataset) -> Coreset:
        nonlocal op_index
        out = reduce(ws, replace(params, seed=derive_seed(params.seed, op_index)))
        op_index += 1
        return out

    def insert(cs: Coreset) -> None:
        height = 0
        while height in levels:
            sibling = levels.pop(height)
            cs = run_reduce(merge(sibling, cs))
            height += 1
        levels[height] = cs

    buffer: list[LabeledPoint] = []
    saw_any = False
    for point in source:
        saw_any = True
        buffer.append(point)
        if len(buffer) == block_size:
            insert(run_reduce(_block_dataset(buffer)))
            buffer = []
    if not saw_any:
        raise ValueError("empty stream")
    if buffer:
        insert(run_reduce(_block_dataset(buffer)))

    residual = [levels[h] for h in sorted(levels)]
    if len(residual) == 1:
        return residual[0]
    combined = residual[0].to_dataset()
    for cs in residual[1:]:
        combined = merge(combined, cs)
    return run_reduce(combined)


def _block_dataset(points: list[LabeledPoint]) -> LabeledDataset:
    ds = from_points(points)
    norms = np.linalg.norm(ds.X, axis=1)
    if norms.size and norms.max() <= 1.0 + NORM_SLACK:
        ds = replace(ds, preprocessed=True)
    return ds


def save_coreset(cs: Coreset, path) -> Path:
    """Write "weight,label,f1,...,fd" rows plus a JSON provenance sidecar."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["weight", "label"] + [f"f{j + 1}" for j in range(cs.X.shape[1])])
        for i in range(cs.size):
            writer.writerow([repr(float(cs.weights[i])), int(cs.y[i])]
                            + [repr(float(v)) for v in cs.X[i]])
    meta = {
        "seed": cs.seed, "method": cs.method, "m": cs.m, "distinct": cs.distinct,
        "epsilon": None if math.isnan(cs.epsilon) else cs.epsilon,
        "delta": None if math.isnan(cs.delta) else cs.delta,
        "c": None if math.isnan(cs.c) else cs.c,
        "t": cs.t, "generator_id": cs.generator_id, "source_n": cs.source_n,
    }
    with open(path.with_suffix(".meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def load_coreset(path) -> Coreset:
    path = Path(path)
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if len(rows) < 2:
        raise ValueError(f"{path}: no coreset rows")
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    with open(path.with_suffix(".meta.json")) as fh:
        meta = json.load(fh)
    weights, labels, X = data[:, 0], data[:, 1], data[:, 2:]
    norms_ok = bool(np.linalg.norm(X, axis=1).max() <= 1.0 + NORM_SLACK)
    return Coreset(
        X=X, y=labels, weights=weights,
        counts=np.ones(len(weights), dtype=int), indices=None,
        m=int(meta["m"]), distinct=int(meta["distinct"]),
        source_n=int(meta["source_n"]), seed=int(meta["seed"]),
        method=meta["method"],
        epsilon=math.nan if meta["epsilon"] is None else float(meta["epsilon"]),
        delta=math.nan if meta["delta"] is None else float(meta["delta"]),
        c=math.nan if meta["c"] is None else float(meta["c"]),
        t=meta["t"], generator_id=meta.get("generator_id", GENERATOR_ID),
        preprocessed=norms_ok,
    )
