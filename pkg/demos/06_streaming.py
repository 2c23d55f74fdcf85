#!/usr/bin/env python3
"""Streaming compression with merge-and-reduce.

Points arrive one at a time; each full block is compressed to a coreset,
and sibling coresets of equal tree height are merged and re-compressed.
Memory stays at one coreset per tree level no matter how long the stream.
"""

import numpy as np

from svmcoreset import (CoresetParams, SolverConfig, build_coreset,
                        compute_gamma, make_synthetic, preprocess,
                        relative_error, stream_coreset, train)

ds = preprocess(make_synthetic(n=5000, d=10, seed=31))
params = CoresetParams(explicit_size=300, seed=8)

streamed = stream_coreset(ds.points(), block_size=500, params=params)
print(f"streamed {ds.n} points through blocks of 500")
print(f"  final coreset: {streamed.size} points, "
      f"total weight {streamed.weights.sum():.0f} (population {ds.n})")

# Same compression done in one batch pass, for comparison.
batch = build_coreset(ds, compute_gamma(ds), params)
cfg = SolverConfig(max_iters=2000, tolerance=1e-5, averaging=False)
full_model = train(ds, 1.0, cfg)
for name, cs in (("streamed", streamed), ("batch", batch)):
    model = train(cs.to_dataset(), 1.0, cfg)
    err = relative_error(ds, model.w, full_model.w, 1.0)
    print(f"  {name:9s} coreset -> rel training error {err:.4f}")

# The tree is deterministic: the k-th reduce runs with a seed derived
# from (params.seed, k), so reruns reproduce the same coreset bit for bit.
again = stream_coreset(ds.points(), block_size=500, params=params)
print(f"  rerun identical: {np.array_equal(again.weights, streamed.weights)}")
