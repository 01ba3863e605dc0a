"""Shared builders for the test suite."""

import numpy as np

from taskrd import ConfusionMatrix, Pmf


def make_bsc(eps: float) -> ConfusionMatrix:
    """Binary symmetric confusion with crossover eps, uniform prior."""
    return ConfusionMatrix(np.array([[1.0 - eps, eps], [eps, 1.0 - eps]]), Pmf.uniform(2))


def make_random_confusion(n: int, diag: float, seed: int) -> ConfusionMatrix:
    """Diagonally dominant confusion: fixed diagonal, Dirichlet off-diagonal rows, uniform prior.

    The error floor is exactly 1 - diag.
    """
    rng = np.random.default_rng(seed)
    channel = np.zeros((n, n))
    for i in range(n):
        off = rng.dirichlet(np.ones(n - 1)) * (1.0 - diag)
        channel[i] = np.insert(off, i, 0.0)
        channel[i, i] = diag
    return ConfusionMatrix(channel, Pmf.uniform(n))
