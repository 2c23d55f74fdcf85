"""Pinned synthetic two-class instance used by benchmarks, tests, and demos."""

from __future__ import annotations

import math

import numpy as np

from .dataset import LabeledDataset

BUNDLED_SEED = 1729
BUNDLED_N = 5000
BUNDLED_D = 10


def make_synthetic(
    n: int = BUNDLED_N,
    d: int = BUNDLED_D,
    seed: int = BUNDLED_SEED,
    separation: float = 1.2,
    pos_scale: float = 1.0,
    neg_scale: float = 2.0,
    tail: float = 1.1,
) -> LabeledDataset:
    """Two overlapping Gaussian-like clouds with heavy-tailed radii.

    The positive class sits at +mu with isotropic scale `pos_scale`, the
    negative class at -mu with `neg_scale`; ||mu|| = separation. Each
    point's radius is additionally multiplied by an independent
    lognormal(0, tail) factor, i.e. the classes are Gaussian scale
    mixtures. The resulting norm spread is what separates importance
    sampling from uniform subsampling; with tail = 0 the clouds are
    plain Gaussians and the two samplers perform nearly identically.

    Raw output (not preprocessed), unit weights, positives first.
    """
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    rng = np.random.default_rng(seed)
    n_pos = (n + 1) // 2
    n_neg = n - n_pos
    mu = np.full(d, separation / math.sqrt(d))
    radius_pos = np.exp(tail * rng.standard_normal(n_pos))[:, None]
    radius_neg = np.exp(tail * rng.standard_normal(n_neg))[:, None]
    X = np.vstack([
        mu + pos_scale * radius_pos * rng.standard_normal((n_pos, d)),
        -mu + neg_scale * radius_neg * rng.standard_normal((n_neg, d)),
    ])
    y = np.concatenate([np.ones(n_pos), -np.ones(n_neg)])
    return LabeledDataset(X, y, np.ones(n))


def bundled_synthetic() -> LabeledDataset:
    """The pinned 5000-point, 10-feature benchmark instance (seed 1729)."""
    return make_synthetic()
