"""Confusion-matrix-driven classification bounds.

Everything here works off the deployed classifier's channel p(estimate | true class)
and the class prior: the error floor and marginals, the estimate-then-compress curve,
its task-aware variant driven by an effective distortion, the affine time-sharing
bound, the merge-k operational baseline, and the oracle reference curve.
"""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass, field

import numpy as np

from .ba import BAConfig, NOT_CONVERGED, RDCurve, RDPoint, ba_point, ba_sweep, dedupe_points, validate_lam_grid
from .probability import DistortionMatrix, Pmf, SIMPLEX_TOL, entropy_bits, rd_uniform_classes

DEFAULT_LAM_GRID = np.geomspace(1e-3, 30.0, 40)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Row-stochastic channel p(estimate | true class) plus the class prior p(y).

    Rows index the true class, columns the estimate, over the same alphabet.
    """

    channel: np.ndarray
    prior: Pmf

    def __post_init__(self):
        channel = np.asarray(self.channel, dtype=float)
        if channel.ndim != 2 or channel.shape[0] != channel.shape[1]:
            raise ValueError(f"confusion matrix must be square, got shape {channel.shape}")
        if not np.all(np.isfinite(channel)):
            raise ValueError("confusion matrix contains non-finite entries")
        if np.any(channel < 0):
            raise ValueError("confusion matrix entries must be nonnegative")
        row_sums = channel.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > SIMPLEX_TOL):
            bad = int(np.argmax(np.abs(row_sums - 1.0)))
            raise ValueError(f"row {bad} sums to {row_sums[bad]!r}, expected 1 within {SIMPLEX_TOL}")
        if len(self.prior) != channel.shape[0]:
            raise ValueError(
                f"prior length {len(self.prior)} does not match class count {channel.shape[0]}"
            )
        object.__setattr__(self, "channel", channel / row_sums[:, None])

    @property
    def num_classes(self) -> int:
        return self.channel.shape[0]

    @classmethod
    def identity(cls, n: int, prior: Pmf | None = None) -> "ConfusionMatrix":
        return cls(np.eye(n), prior if prior is not None else Pmf.uniform(n))


@dataclass(frozen=True)
class TaskModelStats:
    d_tm: float  # error floor of the deployed estimator
    estimate_marginal: Pmf  # p(estimate)
    posterior: np.ndarray  # posterior[y, est] = p(Y=y | estimate); each column is a pmf over y
    d_zero: float  # zero-rate distortion 1 - max_y p(y)
    estimate_entropy: float  # H(estimate) in bits
    prior_filled_columns: tuple[int, ...] = field(default=())


def stats(cm: ConfusionMatrix) -> TaskModelStats:
    """Error floor, estimate marginal, Bayes posterior, zero-rate distortion, estimate entropy.

    Columns of the posterior for estimates the model never emits are filled with the
    prior and reported in ``prior_filled_columns`` (Bayes is undefined there; the
    choice cannot affect any optimum since those symbols carry no source mass).
    """
    prior = cm.prior.probs
    channel = cm.channel
    d_tm = float((prior * (1.0 - np.diag(channel))).sum())
    marginal = prior @ channel
    joint = prior[:, None] * channel  # joint[y, est]

    filled: list[int] = []
    posterior = np.empty_like(channel)
    for j in range(cm.num_classes):
        if marginal[j] > 0:
            posterior[:, j] = joint[:, j] / marginal[j]
        else:
            posterior[:, j] = prior
            filled.append(j)
    if filled:
        warnings.warn(
            f"estimate symbols never emitted by the model: {filled}; posterior columns filled with the prior",
            stacklevel=2,
        )

    marginal_pmf = Pmf(marginal)
    return TaskModelStats(
        d_tm=d_tm,
        estimate_marginal=marginal_pmf,
        posterior=posterior,
        d_zero=float(1.0 - prior.max()),
        estimate_entropy=entropy_bits(marginal_pmf),
        prior_filled_columns=tuple(filled),
    )


def _task_distortion(cm: ConfusionMatrix, composed_channel: np.ndarray) -> float:
    # P(final estimate != true class) for the end-to-end channel p(final | y)
    return float((cm.prior.probs * (1.0 - np.diag(composed_channel))).sum())


def ec_curve(cm: ConfusionMatrix, lam_grid=None, cfg: BAConfig | None = None) -> RDCurve:
    """Estimate-then-compress curve in (rate bits, task distortion).

    The compressor is solved against 0/1 distortion on the estimate alphabet; the
    reported distortion is then recomputed end to end by composing the classifier
    channel with the compressor channel, never taken from the solver objective.
    """
    grid = validate_lam_grid(DEFAULT_LAM_GRID if lam_grid is None else lam_grid)
    st = stats(cm)
    hamming = DistortionMatrix.hamming(cm.num_classes)
    template = cfg if cfg is not None else BAConfig(lam=grid[0])
    points = []
    for lam in grid:
        res = ba_point(st.estimate_marginal, hamming, dataclasses.replace(template, lam=float(lam)))
        composed = cm.channel @ res.channel  # p(final | y)
        points.append(
            RDPoint(
                lam=float(lam),
                rate=res.rate,
                distortion=_task_distortion(cm, composed),
                flag="" if res.converged else NOT_CONVERGED,
            )
        )
    return RDCurve.from_points("ec", dedupe_points(points))


def effective_distortion(cm: ConfusionMatrix) -> DistortionMatrix:
    """Expected task cost of emitting each reconstruction symbol, given the estimate.

    Entry [est, rec] = 1 - P(Y = rec | estimate = est); compressing against this
    matrix makes the solver's distortion equal the task distortion exactly.
    """
    return DistortionMatrix(1.0 - stats(cm).posterior.T)


def iec_curve(cm: ConfusionMatrix, lam_grid=None, cfg: BAConfig | None = None) -> RDCurve:
    """Task-aware estimate-then-compress curve (compressor optimized for the task distortion)."""
    grid = validate_lam_grid(DEFAULT_LAM_GRID if lam_grid is None else lam_grid)
    st = stats(cm)
    return ba_sweep(st.estimate_marginal, effective_distortion(cm), grid, cfg, method="iec")


def ts_bound(st: TaskModelStats, d: float) -> float:
    """Affine time-sharing upper bound between (0, d_zero) and (H(estimate), d_tm)."""
    d = float(d)
    if st.d_zero == st.d_tm:
        warnings.warn("degenerate time-sharing interval (d_zero == d_tm); returning 0", stacklevel=2)
        return 0.0
    if not st.d_tm <= d <= st.d_zero:
        raise ValueError(f"distortion {d} outside the time-sharing interval [{st.d_tm}, {st.d_zero}]")
    return (st.d_zero - d) / (st.d_zero - st.d_tm) * st.estimate_entropy


def merge_k_baseline(cm: ConfusionMatrix, k: int) -> tuple[float, float]:
    """Entropy-coded rate and task distortion after merging the k rarest estimate symbols.

    The k smallest-marginal estimate symbols (ties broken by ascending index) are
    remapped to the largest-marginal symbol (same tie-break); the induced estimate
    distribution is entropy coded.
    """
    k = int(k)
    n = cm.num_classes
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must be in [0, {n - 1}], got {k}")
    st = stats(cm)
    marginal = st.estimate_marginal.probs

    order = np.lexsort((np.arange(n), marginal))  # ascending marginal, then ascending index
    merged = order[:k]
    target = int(np.lexsort((np.arange(n), -marginal))[0])

    mapping = np.arange(n)
    mapping[merged] = target

    reduced = np.zeros((n, n))  # p(final | y)
    for src, dst in enumerate(mapping):
        reduced[:, dst] += cm.channel[:, src]
    merged_marginal = np.zeros(n)
    np.add.at(merged_marginal, mapping, marginal)

    rate = entropy_bits(Pmf(merged_marginal))
    return rate, _task_distortion(cm, reduced)


def merge_curve(cm: ConfusionMatrix) -> RDCurve:
    """All merge counts k = 0 .. n-1 as one operational curve (k recorded in the point flag)."""
    points = [
        RDPoint(lam=None, rate=rate, distortion=dist, flag=f"k={k}")
        for k, (rate, dist) in ((k, merge_k_baseline(cm, k)) for k in range(cm.num_classes))
    ]
    return RDCurve.from_points("merge", points)


def ord_curve(prior: Pmf, d_grid=None, lam_grid=None, cfg: BAConfig | None = None) -> RDCurve:
    """Oracle rate-distortion curve of the class prior under 0/1 distortion.

    Uniform priors use the closed form on a distortion grid; anything else falls
    back to a Blahut-Arimoto sweep.
    """
    n = len(prior)
    uniform = np.all(np.abs(prior.probs - 1.0 / n) <= SIMPLEX_TOL)
    if uniform and n >= 2:
        d0 = 1.0 - 1.0 / n
        if d_grid is None:
            d_grid = np.linspace(0.0, d0, 201)
        d_grid = np.asarray(d_grid, dtype=float)
        if np.any(d_grid < 0):
            raise ValueError("distortion grid entries must be nonnegative")
        points = [RDPoint(lam=None, rate=rd_uniform_classes(n, d), distortion=float(d)) for d in d_grid]
        return RDCurve.from_points("ord", points)
    grid = DEFAULT_LAM_GRID if lam_grid is None else lam_grid
    return ba_sweep(prior, DistortionMatrix.hamming(n), grid, cfg, method="ord")
