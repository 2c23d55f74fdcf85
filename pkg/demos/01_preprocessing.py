#!/usr/bin/env python3
"""Loading and preprocessing: getting a dataset onto the unit ball.

The sensitivity bounds downstream assume centered features with norms at
most 1, so every pipeline starts here.
"""

import tempfile
from pathlib import Path

import numpy as np

from svmcoreset import (dataset_stats, load_preprocessed_csv, make_synthetic,
                        preprocess, save_csv)

# A raw two-class instance. Norms vary wildly: the classes are Gaussian
# scale mixtures, so a handful of points sit far out in the tails.
raw = make_synthetic(n=2000, d=8, seed=7)
stats = dataset_stats(raw)
print(f"raw data:          n={stats.n} d={stats.d} classes={stats.class_counts}")
print(f"                   max norm={stats.max_norm:.2f} "
      f"mean norm={stats.mean_norm:.2f}")

# Center on the mean, rescale the largest norm to exactly 1.
pp = preprocess(raw)
stats = dataset_stats(pp)
print(f"preprocessed:      max norm={stats.max_norm:.6f} "
      f"center norm={stats.center_norm:.2e}")

# The bias variant embeds a constant coordinate while keeping the ball.
with_bias = preprocess(raw, add_bias=True)
print(f"with bias column:  d={with_bias.d} "
      f"max norm={np.linalg.norm(with_bias.X, axis=1).max():.6f}")

# Saving a preprocessed dataset writes a JSON sidecar with the centering
# vector, scale, and bias flag, so the transform is reusable.
with tempfile.TemporaryDirectory() as tmp:
    path = save_csv(pp, Path(tmp) / "train.csv")
    print(f"saved {path.name} + {path.with_suffix('.meta.json').name}")
    back = load_preprocessed_csv(path)
    print(f"reloaded: preprocessed={back.preprocessed}, "
          f"values exact={np.array_equal(back.X, pp.X)}")
