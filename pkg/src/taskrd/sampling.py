"""Posterior-sampling bound estimated from a logits dataset.

Instead of transmitting a hard class decision, the transmitter samples the
temperature-scaled softmax posterior and conveys the sample; the achievable rate is
the mutual information between observation and sample. Both the rate and the task
distortion are plug-in estimates over the dataset, using each record's exact
posterior rather than Monte-Carlo draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .ba import RDCurve, RDPoint
from .classification import ConfusionMatrix
from .probability import Pmf

EMPIRICAL = "empirical"

DEFAULT_LAM_GRID = np.geomspace(1e-3, 1e3, 60)

#: Stand-in logit gap for "infinitely concentrated" synthetic posteriors; large
#: enough that any inverse temperature >= 1e-3 still saturates the softmax.
ONE_HOT_LOGIT = 1e6


@dataclass(frozen=True)
class LogitsDataset:
    """Per-record true labels and pre-softmax logit vectors."""

    labels: np.ndarray  # shape (n,), integer class indices in [0, num_classes)
    logits: np.ndarray  # shape (n, num_classes)

    def __post_init__(self):
        logits = np.asarray(self.logits, dtype=float)
        labels = np.asarray(self.labels)
        if logits.ndim != 2:
            raise ValueError(f"logits must be a 2-D array, got shape {logits.shape}")
        if labels.ndim != 1 or labels.shape[0] != logits.shape[0]:
            raise ValueError("labels must be a 1-D array with one entry per logits row")
        if logits.shape[0] < 2:
            raise ValueError(f"dataset needs at least 2 records, got {logits.shape[0]}")
        if not np.all(np.isfinite(logits)):
            raise ValueError("logits contain non-finite values")
        if not np.issubdtype(labels.dtype, np.integer):
            raise ValueError("labels must be integers")
        k = logits.shape[1]
        if np.any(labels < 0) or np.any(labels >= k):
            raise ValueError(f"labels must lie in [0, {k - 1}]")
        object.__setattr__(self, "labels", labels.astype(np.int64))
        object.__setattr__(self, "logits", logits)

    @property
    def num_records(self) -> int:
        return self.logits.shape[0]

    @property
    def num_classes(self) -> int:
        return self.logits.shape[1]


@dataclass(frozen=True)
class SncPoint:
    lam: float  # inverse temperature
    rate: float  # plug-in estimate of the sample's information rate, bits
    distortion: float  # plug-in estimate of the classification error


def _validate_lam(lam: float) -> float:
    lam = float(lam)
    if not np.isfinite(lam) or lam <= 0:
        raise ValueError(f"inverse temperature must be positive and finite, got {lam}")
    return lam


def _tempered_log_probs(logits: np.ndarray, lam: float) -> np.ndarray:
    scaled = lam * logits
    return scaled - logsumexp(scaled, axis=-1, keepdims=True)


def tempered_posterior(logits, lam: float) -> Pmf:
    """softmax(lam * logits) for one record, computed in the log domain."""
    lam = _validate_lam(lam)
    arr = np.asarray(logits, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"logits must be a nonempty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("logits contain non-finite values")
    return Pmf(np.exp(_tempered_log_probs(arr, lam)))


def snc_point(ds: LogitsDataset, lam: float) -> SncPoint:
    """Plug-in rate and distortion of posterior sampling at one inverse temperature.

    Rate is H(mean posterior) minus the mean per-record posterior entropy (clamped
    at 0); distortion is one minus the mean posterior mass on the true label.
    """
    lam = _validate_lam(lam)
    log_probs = _tempered_log_probs(ds.logits, lam)
    probs = np.exp(log_probs)

    marginal = probs.mean(axis=0)
    marginal_entropy = float(-np.where(marginal > 0, marginal * np.log2(marginal), 0.0).sum())
    conditional_entropy = float(-(probs * log_probs).sum() / (np.log(2.0) * ds.num_records))
    rate = max(marginal_entropy - conditional_entropy, 0.0)

    distortion = float(1.0 - probs[np.arange(ds.num_records), ds.labels].mean())
    return SncPoint(lam=lam, rate=rate, distortion=distortion)


def snc_sweep(ds: LogitsDataset, lam_grid=None) -> RDCurve:
    """One plug-in point per inverse temperature, sorted by distortion and flagged empirical."""
    grid = np.asarray(DEFAULT_LAM_GRID if lam_grid is None else lam_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("inverse-temperature grid must be a nonempty 1-D sequence")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("inverse-temperature grid must be strictly increasing")
    points = []
    for lam in grid:
        pt = snc_point(ds, float(lam))
        points.append(RDPoint(lam=pt.lam, rate=pt.rate, distortion=pt.distortion, flag=EMPIRICAL))
    return RDCurve.from_points("snc", points)


def empirical_confusion(ds: LogitsDataset) -> ConfusionMatrix:
    """Hard-decision confusion matrix of the dataset: rows normalized counts, prior from row counts."""
    k = ds.num_classes
    preds = np.argmax(ds.logits, axis=1)
    counts = np.bincount(ds.labels * k + preds, minlength=k * k).reshape(k, k).astype(float)
    row_sums = counts.sum(axis=1)
    if np.any(row_sums == 0):
        missing = np.where(row_sums == 0)[0].tolist()
        raise ValueError(f"classes never appear as true labels: {missing}")
    return ConfusionMatrix(counts / row_sums[:, None], Pmf(row_sums / row_sums.sum()))


def synth_logits(
    kind: str,
    n: int,
    seed: int = 0,
    *,
    q: float = 0.5,
    logit_scale: float = 1.0,
    num_classes: int = 10,
    concentration: float = 8.0,
    prior=None,
) -> LogitsDataset:
    """Deterministic synthetic logits for desk-scale experiments.

    ``gmm``: labels are Bernoulli(q); the observation is the label mapped to -1/+1
    plus unit Gaussian noise; logits are the exact log posteriors of the two classes
    times ``logit_scale`` (so inverse temperature 1/logit_scale recovers the true
    posterior).

    ``dirichlet``: labels follow ``prior`` (uniform over ``num_classes`` by default);
    each record's posterior is a Dirichlet draw with ``concentration`` added on the
    true class, and the logits are its logs times ``logit_scale``. An infinite
    concentration emits saturated one-hot logits.
    """
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if logit_scale <= 0 or not np.isfinite(logit_scale):
        raise ValueError(f"logit_scale must be positive and finite, got {logit_scale}")
    rng = np.random.default_rng(seed)

    if kind == "gmm":
        if not 0.0 < q < 1.0:
            raise ValueError(f"q must be strictly inside (0, 1), got {q}")
        labels = (rng.random(n) < q).astype(np.int64)
        x = 2.0 * labels - 1.0 + rng.standard_normal(n)
        # log p(y | x) up to the shared normalizer; the Gaussian constant cancels
        log_w = np.stack([np.log(1.0 - q) - 0.5 * (x + 1.0) ** 2, np.log(q) - 0.5 * (x - 1.0) ** 2], axis=1)
        logits = logit_scale * (log_w - logsumexp(log_w, axis=1, keepdims=True))
        return LogitsDataset(labels=labels, logits=logits)

    if kind == "dirichlet":
        if num_classes < 2:
            raise ValueError(f"num_classes must be >= 2, got {num_classes}")
        if prior is None:
            prior_probs = np.full(num_classes, 1.0 / num_classes)
        else:
            prior_probs = Pmf(np.asarray(prior, dtype=float)).probs
            if prior_probs.size != num_classes:
                raise ValueError("prior length must equal num_classes")
        labels = rng.choice(num_classes, size=n, p=prior_probs).astype(np.int64)
        if np.isinf(concentration):
            logits = np.full((n, num_classes), -ONE_HOT_LOGIT * logit_scale)
            logits[np.arange(n), labels] = 0.0
            return LogitsDataset(labels=labels, logits=logits)
        if concentration <= 0:
            raise ValueError(f"concentration must be positive, got {concentration}")
        alpha = np.ones((n, num_classes))
        alpha[np.arange(n), labels] += concentration
        draws = rng.standard_gamma(alpha)
        posterior = draws / draws.sum(axis=1, keepdims=True)
        logits = logit_scale * np.log(np.clip(posterior, 1e-300, None))
        return LogitsDataset(labels=labels, logits=logits)

    raise ValueError(f"unknown synthetic kind {kind!r}; expected 'gmm' or 'dirichlet'")
