"""Labeled datasets: loading, validation, and unit-ball preprocessing.

Datasets are immutable after construction. Preprocessing centers the
features on their (weighted) mean and rescales so the largest point norm
is exactly 1, which is the geometry the sensitivity bounds assume.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterator

import numpy as np

NORM_SLACK = 1e-9

_VALID_LABELS = (-1.0, 0.0, 1.0)


@dataclass(frozen=True)
class LabeledPoint:
    """A single feature vector with its ±1 label and nonnegative weight."""

    features: np.ndarray
    label: float
    weight: float = 1.0


@dataclass(frozen=True)
class LabeledDataset:
    """n labeled, weighted points of dimension d, stored as dense arrays.

    `source_n` records the population size a weighted subsample stands in
    for; it stays None for raw data, where it simply equals n. The
    `preprocessed` flag asserts every point lies in the unit ball.
    """

    X: np.ndarray
    y: np.ndarray
    weights: np.ndarray
    preprocessed: bool = False
    source_n: int | None = None
    center: np.ndarray | None = None
    scale: float | None = None
    bias: bool = False

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).reshape(-1)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if X.ndim != 2:
            raise ValueError("X must be 2-dimensional")
        if X.shape[0] != y.size or X.shape[0] != w.size:
            raise ValueError("X, y, and weights must agree on the point count")
        if not np.isfinite(X).all():
            raise ValueError("features must be finite")
        if y.size and not np.isin(y, (-1.0, 1.0)).all():
            raise ValueError("labels must be -1 or +1")
        if np.any(w < 0) or not np.isfinite(w).all():
            raise ValueError("weights must be finite and >= 0")
        if self.preprocessed and X.size:
            norms = np.linalg.norm(X, axis=1)
            if norms.max() > 1.0 + NORM_SLACK:
                raise ValueError("preprocessed data must lie in the unit ball")
        for arr in (X, y, w):
            arr.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.n

    def points(self) -> Iterator[LabeledPoint]:
        for i in range(self.n):
            yield LabeledPoint(self.X[i], float(self.y[i]), float(self.weights[i]))

    def population(self) -> int:
        """Size of the population this (possibly weighted) set represents.

        Raises if the set carries non-unit weights but no source_n, since
        the per-point objective share would then be undefined.
        """
        if self.source_n is not None:
            return self.source_n
        if self.n == 0 or np.all(self.weights == 1.0):
            return self.n
        raise ValueError("weighted dataset is missing its source population size")

    def subset(self, indices, weights=None, source_n=None) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=int)
        w = self.weights[idx] if weights is None else np.asarray(weights, dtype=float)
        return LabeledDataset(
            self.X[idx], self.y[idx], w,
            preprocessed=self.preprocessed,
            source_n=self.population() if source_n is None else source_n,
            center=self.center, scale=self.scale, bias=self.bias,
        )


def from_points(points, preprocessed: bool = False, source_n: int | None = None) -> LabeledDataset:
    """Assemble a dataset from LabeledPoint records (order preserved)."""
    pts = list(points)
    if not pts:
        raise ValueError("cannot assemble a dataset from zero points")
    X = np.stack([np.asarray(p.features, dtype=float) for p in pts])
    y = np.array([p.label for p in pts], dtype=float)
    w = np.array([p.weight for p in pts], dtype=float)
    return LabeledDataset(X, y, w, preprocessed=preprocessed, source_n=source_n)


def _parse_label(token: str, where: str) -> float:
    try:
        value = float(token)
    except ValueError as exc:
        raise ValueError(f"{where}: unparseable label {token!r}") from exc
    if value not in _VALID_LABELS:
        raise ValueError(f"{where}: label {token!r} not in {{-1, 0, +1}}")
    return -1.0 if value == 0.0 else value


def load_csv(path, label_column: int = 0, has_header: bool = True) -> LabeledDataset:
    """Load a dense CSV dataset; 0/1 labels are mapped to -1/+1.

    Every row must have the same column count, and the label column must
    parse to a value in {-1, 0, +1}. Row order is preserved and every
    point gets weight 1.
    """
    path = Path(path)
    rows: list[list[str]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if row:
                rows.append([cell.strip() for cell in row])
    if has_header and rows:
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no data rows")

    width = len(rows[0])
    if width < 2:
        raise ValueError(f"{path}: rows need a label plus at least one feature")
    col = label_column if label_column >= 0 else width + label_column
    if not 0 <= col < width:
        raise ValueError(f"{path}: label column {label_column} out of range")

    labels = np.empty(len(rows))
    X = np.empty((len(rows), width - 1))
    for i, row in enumerate(rows):
        where = f"{path}: row {i + 1}"
        if len(row) != width:
            raise ValueError(f"{where}: expected {width} columns, got {len(row)}")
        labels[i] = _parse_label(row[col], where)
        feats = row[:col] + row[col + 1:]
        try:
            X[i] = [float(v) for v in feats]
        except ValueError as exc:
            raise ValueError(f"{where}: unparseable feature value") from exc
    return LabeledDataset(X, labels, np.ones(len(rows)))


def load_libsvm(path) -> LabeledDataset:
    """Load a sparse index:value text file into a dense dataset.

    Indices are 1-based and must be strictly ascending within a line;
    the dimension is the largest index seen anywhere in the file.
    """
    path = Path(path)
    labels: list[float] = []
    sparse_rows: list[list[tuple[int, float]]] = []
    max_index = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            where = f"{path}: line {lineno}"
            labels.append(_parse_label(tokens[0], where))
            row: list[tuple[int, float]] = []
            prev = 0
            for tok in tokens[1:]:
                try:
                    idx_str, val_str = tok.split(":", 1)
                    idx = int(idx_str)
                    val = float(val_str)
                except ValueError as exc:
                    raise ValueError(f"{where}: malformed token {tok!r}") from exc
                if idx <= prev:
                    raise ValueError(f"{where}: indices must be ascending and 1-based")
                prev = idx
                row.append((idx, val))
            max_index = max(max_index, prev)
            sparse_rows.append(row)
    if not labels:
        raise ValueError(f"{path}: empty file")

    X = np.zeros((len(labels), max(max_index, 1)))
    for i, row in enumerate(sparse_rows):
        for idx, val in row:
            X[i, idx - 1] = val
    return LabeledDataset(X, np.array(labels), np.ones(len(labels)))


def preprocess(ds: LabeledDataset, add_bias: bool = False) -> LabeledDataset:
    """Center on the weighted mean and rescale the largest norm to 1.

    With `add_bias`, every (centered, scaled) point x becomes
    (x/sqrt(2), 1/sqrt(2)), which keeps all norms inside the unit ball
    while giving downstream margins a constant coordinate to act on.

    An all-zero dataset after centering skips the rescaling but is still
    marked preprocessed.
    """
    if ds.preprocessed:
        raise ValueError("dataset is already preprocessed")
    if ds.n < 1:
        raise ValueError("cannot preprocess an empty dataset")

    total_w = ds.weights.sum()
    mu = (ds.weights @ ds.X) / total_w if total_w > 0 else ds.X.mean(axis=0)
    centered = ds.X - mu
    max_norm = float(np.linalg.norm(centered, axis=1).max())
    scale = max_norm if max_norm > 0 else 1.0
    X = centered / scale
    if add_bias:
        root_half = 1.0 / math.sqrt(2.0)
        X = np.hstack([X * root_half, np.full((ds.n, 1), root_half)])
    return LabeledDataset(
        X, ds.y, ds.weights,
        preprocessed=True, source_n=ds.source_n,
        center=mu, scale=scale, bias=add_bias,
    )


@dataclass(frozen=True)
class DatasetStats:
    n: int
    d: int
    class_counts: dict
    mean_norm: float
    max_norm: float
    center_norm: float


def dataset_stats(ds: LabeledDataset) -> DatasetStats:
    """One-pass summary: counts, per-class sizes, and norm diagnostics."""
    if ds.n == 0:
        return DatasetStats(0, ds.d, {}, 0.0, 0.0, 0.0)
    norms = np.linalg.norm(ds.X, axis=1)
    labels, counts = np.unique(ds.y, return_counts=True)
    class_counts = {int(l): int(c) for l, c in zip(labels, counts)}
    return DatasetStats(
        n=ds.n,
        d=ds.d,
        class_counts=class_counts,
        mean_norm=float(norms.mean()),
        max_norm=float(norms.max()),
        center_norm=float(np.linalg.norm(ds.X.mean(axis=0))),
    )


def _sidecar_path(path: Path) -> Path:
    return path.with_suffix(".meta.json")


def save_csv(ds: LabeledDataset, path) -> Path:
    """Write "label,f1,...,fd" rows; floats are repr'd so they round-trip.

    Preprocessed datasets additionally get a JSON sidecar recording the
    centering vector, scale factor, and bias flag, so the transform can
    be replayed or inverted.
    """
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label"] + [f"f{j + 1}" for j in range(ds.d)])
        for i in range(ds.n):
            writer.writerow([int(ds.y[i])] + [repr(float(v)) for v in ds.X[i]])
    if ds.preprocessed:
        meta = {
            "preprocessed": True,
            "center": [float(v) for v in (ds.center if ds.center is not None else [])],
            "scale": ds.scale,
            "bias": ds.bias,
            "n": ds.n,
            "d": ds.d,
        }
        with open(_sidecar_path(path), "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return path


def load_preprocessed_csv(path) -> LabeledDataset:
    """Reload a save_csv output, restoring flags from the sidecar if present."""
    path = Path(path)
    ds = load_csv(path, label_column=0, has_header=True)
    sidecar = _sidecar_path(path)
    if sidecar.exists():
        with open(sidecar) as fh:
            meta = json.load(fh)
        if meta.get("preprocessed"):
            center = np.asarray(meta.get("center", []), dtype=float)
            ds = replace(
                ds, preprocessed=True,
                center=center if center.size else None,
                scale=meta.get("scale"), bias=bool(meta.get("bias", False)),
            )
    return ds
