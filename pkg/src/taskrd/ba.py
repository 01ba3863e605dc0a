"""Blahut-Arimoto solver for rate-distortion points of finite-alphabet sources.

One ``ba_point`` solves the Lagrangian trade-off at a fixed multiplier; ``ba_sweep``
assembles a rate-distortion curve from a multiplier grid. Updates run with per-row
max-subtraction before exponentiation so large multipliers never overflow.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .probability import DistortionMatrix, Pmf

#: Distortions closer than this are treated as the same curve abscissa when deduplicating.
DEDUPE_TOL = 1e-9

NOT_CONVERGED = "not-converged"


@dataclass(frozen=True)
class BAConfig:
    """Solver settings: trade-off multiplier, iteration cap, sup-norm tolerance on the output marginal."""

    lam: float
    max_iterations: int = 10_000
    tol: float = 1e-10
    init_marginal: Pmf | None = None  # None means uniform

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam <= 0:
            raise ValueError(f"multiplier must be positive and finite, got {self.lam}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class BAResult:
    rate: float  # bits
    distortion: float  # units of the cost matrix
    channel: np.ndarray  # row-stochastic p(reconstruction | source)
    output_marginal: Pmf
    iterations_used: int
    converged: bool


@dataclass(frozen=True)
class RDPoint:
    lam: float | None  # None for closed-form / operational points not indexed by a multiplier
    rate: float
    distortion: float
    flag: str = ""  # "", "not-converged", "empirical", "k=<n>", ...


@dataclass(frozen=True)
class RDCurve:
    """Operating points of one method, sorted by distortion ascending."""

    method: str
    points: tuple[RDPoint, ...]

    @classmethod
    def from_points(cls, method: str, points) -> "RDCurve":
        ordered = tuple(sorted(points, key=lambda pt: (pt.distortion, pt.rate)))
        return cls(method=method, points=ordered)

    @property
    def rates(self) -> np.ndarray:
        return np.array([pt.rate for pt in self.points])

    @property
    def distortions(self) -> np.ndarray:
        return np.array([pt.distortion for pt in self.points])


def dedupe_points(points, tol: float = DEDUPE_TOL) -> list[RDPoint]:
    """Collapse points with equal distortion (within tol), keeping the smallest rate."""
    ordered = sorted(points, key=lambda pt: (pt.distortion, pt.rate))
    kept: list[RDPoint] = []
    group: list[RDPoint] = []
    for pt in ordered:
        if group and pt.distortion - group[0].distortion > tol:
            kept.append(min(group, key=lambda g: g.rate))
            group = []
        group.append(pt)
    if group:
        kept.append(min(group, key=lambda g: g.rate))
    return kept


def rate_at(curve: RDCurve, d) -> np.ndarray | float:
    """Rate of ``curve`` at distortion ``d`` by piecewise-linear interpolation.

    The curve is first forced nonincreasing in distortion (running minimum), so
    solver jitter cannot create spurious local increases. Outside the covered
    distortion range the nearest endpoint rate is returned.
    """
    if not curve.points:
        raise ValueError("cannot interpolate an empty curve")
    ds = curve.distortions
    rs = np.minimum.accumulate(curve.rates)
    out = np.interp(np.asarray(d, dtype=float), ds, rs)
    return float(out) if np.isscalar(d) else out


def _validate_problem(source: Pmf, d: DistortionMatrix) -> None:
    if len(source) != d.costs.shape[0]:
        raise ValueError(
            f"source alphabet size {len(source)} does not match distortion rows {d.costs.shape[0]}"
        )


def ba_point(source: Pmf, d: DistortionMatrix, cfg: BAConfig) -> BAResult:
    """Solve one rate-distortion point at multiplier ``cfg.lam``.

    Alternates the channel update w(j|i) ~ q(j) exp(-lam * d[i,j]) (row-normalized)
    with the marginal update q(j) = sum_i p(i) w(j|i) until the sup-norm change of
    q drops below ``cfg.tol`` or the iteration cap is reached.
    """
    _validate_problem(source, d)
    p = source.probs
    costs = d.costs
    n_rec = costs.shape[1]

    if cfg.init_marginal is None:
        q = np.full(n_rec, 1.0 / n_rec)
    else:
        if len(cfg.init_marginal) != n_rec:
            raise ValueError(
                f"init marginal length {len(cfg.init_marginal)} does not match reconstruction alphabet {n_rec}"
            )
        q = cfg.init_marginal.probs.copy()

    # Zero-probability source symbols contribute nothing and create 0/0 updates; drop
    # them for the iteration and restore their channel rows afterwards.
    keep = p > 0
    p_eff = p[keep]
    costs_eff = costs[keep]

    # Shift each row so its largest exponent is exactly 0: exp never overflows and
    # the row normalizer stays >= the mass at the row's cheapest symbol.
    shifted = costs_eff - costs_eff.min(axis=1, keepdims=True)
    kernel = np.exp(-cfg.lam * shifted)

    # The channel w(j|i) = kernel[i,j] q[j] / z[i] never needs materializing inside
    # the loop: with z = kernel @ q the marginal update collapses to
    # q'[j] = q[j] * (kernel.T @ (p / z))[j], two matvecs per iteration.
    iterations = 0
    converged = False
    for iterations in range(1, cfg.max_iterations + 1):
        z = kernel @ q
        dead = z == 0.0
        if np.any(dead):
            z[dead] = 1.0
        u = p_eff / z
        q_new = q * (kernel.T @ u)
        if np.any(dead):
            # All mass under the kernel underflowed for these rows: pin them to the
            # cheapest reconstruction symbol that still carries marginal mass.
            feasible = np.where(q > 0, kernel[dead], -1.0)
            np.add.at(q_new, np.argmax(feasible, axis=1), p_eff[dead])
        delta = np.abs(q_new - q).max()
        q = q_new
        if delta < cfg.tol:
            converged = True
            break

    # Materialize the channel once, then use the marginal it actually induces so the
    # reported rate is an exact mutual information (an achievable point for any
    # stopping time, converged or not).
    w = kernel * q
    z = w.sum(axis=1)
    dead = z == 0.0
    if np.any(dead):
        feasible = np.where(q > 0, kernel[dead], -1.0)
        w[dead] = 0.0
        w[np.where(dead)[0], np.argmax(feasible, axis=1)] = 1.0
        z[dead] = 1.0
    w /= z[:, None]
    q_final = p_eff @ w
    safe_q = np.where(q_final > 0, q_final, 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_ratio = np.where(w > 0, np.log2(np.where(w > 0, w, 1.0) / safe_q[None, :]), 0.0)
    rate = max(float((p_eff[:, None] * w * log_ratio).sum()), 0.0)
    distortion = float((p_eff[:, None] * w * costs_eff).sum())

    channel = np.tile(q_final, (len(source), 1))
    channel[keep] = w
    return BAResult(
        rate=rate,
        distortion=distortion,
        channel=channel,
        output_marginal=Pmf(q_final),
        iterations_used=iterations,
        converged=converged,
    )


def validate_lam_grid(lam_grid) -> np.ndarray:
    grid = np.asarray(lam_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("multiplier grid must be a nonempty 1-D sequence")
    if np.any(~np.isfinite(grid)) or np.any(grid <= 0):
        raise ValueError("multiplier grid entries must be positive and finite")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("multiplier grid must be strictly increasing")
    return grid


def ba_sweep(source: Pmf, d: DistortionMatrix, lam_grid, cfg: BAConfig | None = None, method: str = "ba") -> RDCurve:
    """One ``ba_point`` per grid multiplier, deduplicated at equal distortion and sorted by distortion.

    Non-converged points are kept but flagged so downstream output can mark them.
    """
    grid = validate_lam_grid(lam_grid)
    template = cfg if cfg is not None else BAConfig(lam=grid[0])
    points = []
    for lam in grid:
        res = ba_point(source, d, dataclasses.replace(template, lam=float(lam)))
        points.append(
            RDPoint(
                lam=float(lam),
                rate=res.rate,
                distortion=res.distortion,
                flag="" if res.converged else NOT_CONVERGED,
            )
        )
    return RDCurve.from_points(method, dedupe_points(points))
