"""Seeded sampling primitives shared by the coreset builders.

The random stream is pinned: a keyed counter-based bit generator (Philox)
drives a Vose alias table with one column draw and one coin per sample.
Changing either piece changes every downstream coreset, so the combination
is recorded as ``GENERATOR_ID`` in coreset metadata.
"""

from __future__ import annotations

import hashlib

import numpy as np

GENERATOR_ID = "philox4x64/vose-alias/m-draws/v1"


def derive_seed(*parts) -> int:
    """Stable 63-bit seed derived from arbitrary hashable labels.

    Uses SHA-256 over the reprs of the parts, so the same labels give the
    same seed on every platform and run (unlike ``hash()``).
    """
    text = "\x1f".join(repr(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def make_generator(seed: int) -> np.random.Generator:
    """Generator backed by the pinned keyed bit generator."""
    return np.random.Generator(np.random.Philox(key=seed))


class AliasTable:
    """Vose alias table for O(1) draws from a fixed discrete distribution.

    Construction is O(n) and deterministic. Zero-probability entries are
    legal; they end up always redirecting to their alias and are never
    returned.
    """

    def __init__(self, probs):
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a nonempty 1-d array")
        if not np.isfinite(p).all() or np.any(p < 0):
            raise ValueError("probs must be finite and nonnegative")
        total = p.sum()
        if total <= 0:
            raise ValueError("probs must have positive total mass")

        n = p.size
        scaled = p * (n / total)
        self.n = n
        self.prob = np.ones(n)
        self.alias = np.arange(n)

        small = [i for i in range(n) if scaled[i] < 1.0]
        large = [i for i in range(n) if scaled[i] >= 1.0]
        while small and large:
            s = small.pop()
            g = large.pop()
            self.prob[s] = scaled[s]
            self.alias[s] = g
            scaled[g] = (scaled[g] + scaled[s]) - 1.0
            (small if scaled[g] < 1.0 else large).append(g)
        # Leftover entries are 1 up to roundoff; prob stays 1, alias = self.

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` indices. Consumes exactly 2*size variates from rng."""
        cols = rng.integers(0, self.n, size=size)
        coins = rng.random(size)
        out = cols.copy()
        take_alias = coins >= self.prob[cols]
        out[take_alias] = self.alias[cols[take_alias]]
        return out


def multinomial_counts(probs, m: int, seed: int) -> np.ndarray:
    """Counts (K_1, ..., K_n) of m alias-table draws from `probs`.

    Equivalent in distribution to one Multinomial(m, probs) draw; the
    m-draw implementation is the pinned choice because it fixes the
    random stream.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    table = AliasTable(probs)
    chosen = table.draw(make_generator(seed), m)
    return np.bincount(chosen, minlength=table.n)
