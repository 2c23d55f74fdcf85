import numpy as np
import pytest

from svmcoreset import bundled_synthetic, make_synthetic, preprocess


@pytest.fixture(scope="session")
def small_pp():
    """A 200-point preprocessed instance shared by read-only tests."""
    return preprocess(make_synthetic(200, 8, seed=21))


@pytest.fixture(scope="session")
def bundled_pp():
    """The pinned 5000-point benchmark instance, preprocessed."""
    return preprocess(bundled_synthetic())


def unit_norm_dataset(n: int, d: int = 3):
    """n points on the unit sphere with zero mean (pairs of +/- e_1 style)."""
    from svmcoreset import LabeledDataset

    assert n % 2 == 0
    rng = np.random.default_rng(7)
    half = rng.standard_normal((n // 2, d))
    half /= np.linalg.norm(half, axis=1, keepdims=True)
    X = np.vstack([half, -half])
    y = np.concatenate([np.ones(n // 2), -np.ones(n // 2)])
    return LabeledDataset(X, y, np.ones(n), preprocessed=True)
