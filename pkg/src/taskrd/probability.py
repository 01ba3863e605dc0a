"""Finite-alphabet probability primitives and closed-form rate-distortion functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Tolerance for simplex validation; vectors within this of sum 1 are renormalized.
SIMPLEX_TOL = 1e-9


def _as_float_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over a finite alphabet.

    Entries must be nonnegative and sum to 1 within ``SIMPLEX_TOL``; the stored
    vector is renormalized to sum exactly to 1.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = _as_float_vector(self.probs, "probs")
        if np.any(probs < 0):
            raise ValueError("probabilities must be nonnegative")
        total = probs.sum()
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1 within {SIMPLEX_TOL}")
        object.__setattr__(self, "probs", probs / total)

    def __len__(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, n: int) -> "Pmf":
        if n < 1:
            raise ValueError("alphabet size must be >= 1")
        return cls(np.full(n, 1.0 / n))


@dataclass(frozen=True)
class DistortionMatrix:
    """Nonnegative cost table; rows index the source alphabet, columns the reconstruction alphabet."""

    costs: np.ndarray

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim != 2 or costs.shape[0] < 1 or costs.shape[1] < 1:
            raise ValueError(f"costs must be a 2-D matrix with at least one row and column, got shape {costs.shape}")
        if not np.all(np.isfinite(costs)):
            raise ValueError("costs contain non-finite entries")
        if np.any(costs < 0):
            raise ValueError("costs must be nonnegative")
        object.__setattr__(self, "costs", costs)

    @classmethod
    def hamming(cls, n: int) -> "DistortionMatrix":
        """0/1 cost: 0 on the diagonal, 1 elsewhere."""
        return cls(1.0 - np.eye(n))

    @classmethod
    def squared_error(cls, source_points, reconstruction_points=None) -> "DistortionMatrix":
        """(x - x_hat)^2 over the two point grids (reconstruction defaults to the source grid)."""
        src = _as_float_vector(source_points, "source_points")
        rec = src if reconstruction_points is None else _as_float_vector(reconstruction_points, "reconstruction_points")
        return cls((src[:, None] - rec[None, :]) ** 2)


def _xlog2x(p: np.ndarray) -> np.ndarray:
    # 0 * log 0 := 0 by explicit branch so degenerate entries never produce NaN
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def entropy_bits(p: Pmf) -> float:
    """Shannon entropy of ``p`` in bits."""
    return float(-_xlog2x(p.probs).sum())


def binary_entropy(u: float) -> float:
    """h(u) = -u log2 u - (1-u) log2(1-u), in bits, for u in [0, 1]."""
    u = float(u)
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"binary entropy argument must be in [0, 1], got {u}")
    if u == 0.0 or u == 1.0:
        return 0.0
    return float(-u * np.log2(u) - (1.0 - u) * np.log2(1.0 - u))


def rd_binary(q: float, d: float) -> float:
    """Rate-distortion function of a Bernoulli(q) source under 0/1 distortion.

    R(d) = h(q) - h(d) for 0 <= d <= min(q, 1-q), and 0 beyond.
    """
    q = float(q)
    d = float(d)
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0, 1], got {q}")
    if d < 0.0:
        raise ValueError(f"distortion must be nonnegative, got {d}")
    if d >= min(q, 1.0 - q):
        return 0.0
    return binary_entropy(q) - binary_entropy(d)


def rd_uniform_classes(k: int, d: float) -> float:
    """Rate-distortion function of a uniform k-ary source under 0/1 distortion.

    R(d) = log2(k) - h(d) - d log2(k-1) for 0 <= d <= 1 - 1/k, and 0 beyond.
    """
    k = int(k)
    if k < 2:
        raise ValueError(f"class count must be >= 2, got {k}")
    d = float(d)
    if d < 0.0:
        raise ValueError(f"distortion must be nonnegative, got {d}")
    d0 = 1.0 - 1.0 / k
    if d >= d0:
        return 0.0
    return float(np.log2(k) - binary_entropy(d) - d * np.log2(k - 1))
