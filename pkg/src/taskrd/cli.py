"""Command-line front end: every bound as a subcommand, curves written as CSV."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import classification, formats, gmm, sampling
from .ba import BAConfig, RDCurve, RDPoint, ba_sweep
from .probability import rd_binary, rd_uniform_classes


def _add_lambda_args(parser, lo=None, hi=None, points=None, scale=None):
    parser.add_argument("--lambda-min", type=float, default=lo, help="smallest trade-off multiplier (dimensionless, > 0)")
    parser.add_argument("--lambda-max", type=float, default=hi, help="largest trade-off multiplier (dimensionless)")
    parser.add_argument("--lambda-points", type=int, default=points, help="number of multipliers in the sweep")
    parser.add_argument("--lambda-scale", choices=("log", "linear"), default=scale, help="multiplier grid spacing")


def _add_solver_args(parser):
    parser.add_argument("--tol", type=float, default=1e-10, help="sup-norm convergence tolerance on the output marginal")
    parser.add_argument("--max-iters", type=int, default=10_000, help="iteration cap per solver point")


def _add_pixels_arg(parser):
    parser.add_argument("--pixels", type=int, default=None, help="pixels per observation (H x W); fills the bpp column")


def _lam_grid(args, lo, hi, points, scale) -> np.ndarray:
    lo = lo if args.lambda_min is None else args.lambda_min
    hi = hi if args.lambda_max is None else args.lambda_max
    points = points if args.lambda_points is None else args.lambda_points
    scale = scale if args.lambda_scale is None else args.lambda_scale
    if points < 1:
        raise ValueError("lambda grid needs at least one point")
    if points == 1:
        return np.array([lo], dtype=float)
    if not lo < hi:
        raise ValueError(f"lambda range must satisfy min < max, got [{lo}, {hi}]")
    return np.geomspace(lo, hi, points) if scale == "log" else np.linspace(lo, hi, points)


def _lam_overridden(args) -> bool:
    return any(v is not None for v in (args.lambda_min, args.lambda_max, args.lambda_points, args.lambda_scale))


def _ba_config(args, grid) -> BAConfig:
    return BAConfig(lam=float(grid[0]), max_iterations=args.max_iters, tol=args.tol)


def _read_confusion(args) -> classification.ConfusionMatrix:
    if args.prior == "uniform":
        return formats.read_confusion_csv(args.confusion, assume_uniform_prior=True)
    return formats.read_confusion_csv(args.confusion, prior_path=args.prior)


def cmd_closed_form(args) -> int:
    if args.kind == "binary":
        value = rd_binary(args.q, args.d)
    else:
        if args.classes is None:
            raise ValueError("closed-form --kind uniform requires --classes")
        value = rd_uniform_classes(args.classes, args.d)
    print(f"{value:.9g}")
    return 0


def cmd_ba(args) -> int:
    source = formats.read_pmf_csv(args.pmf)
    costs = formats.read_distortion_csv(args.distortion)
    grid = _lam_grid(args, 0.01, 20.0, 40, "log")
    curve = ba_sweep(source, costs, grid, _ba_config(args, grid), method="ba")
    formats.write_curves_csv([curve], args.out, pixel_count=args.pixels)
    return 0


def cmd_class_bounds(args) -> int:
    cm = _read_confusion(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    known = ("ord", "ec", "iec", "ts", "merge")
    for m in methods:
        if m not in known:
            raise ValueError(f"unknown method {m!r}; choose from {', '.join(known)}")
    if not methods:
        raise ValueError("no methods requested")

    grid = _lam_grid(args, 1e-3, 30.0, 40, "log")
    cfg = _ba_config(args, grid)
    st = classification.stats(cm)

    curves = []
    for m in methods:
        if m == "ord":
            curves.append(classification.ord_curve(cm.prior, lam_grid=grid, cfg=cfg))
        elif m == "ec":
            curves.append(classification.ec_curve(cm, grid, cfg))
        elif m == "iec":
            curves.append(classification.iec_curve(cm, grid, cfg))
        elif m == "ts":
            d_grid = np.linspace(st.d_tm, st.d_zero, 101)
            curves.append(
                RDCurve.from_points(
                    "ts", [RDPoint(lam=None, rate=classification.ts_bound(st, d), distortion=float(d)) for d in d_grid]
                )
            )
        elif m == "merge":
            if args.k is not None:
                rate, dist = classification.merge_k_baseline(cm, args.k)
                curves.append(RDCurve.from_points("merge", [RDPoint(lam=None, rate=rate, distortion=dist, flag=f"k={args.k}")]))
            else:
                curves.append(classification.merge_curve(cm))
    formats.write_curves_csv(curves, args.out, pixel_count=args.pixels)
    return 0


def cmd_gmm(args) -> int:
    spec = gmm.GmmSpec(q=args.q, half_width=args.grid_half_width, bins=args.grid_bins)
    g = gmm.discretize(spec)
    override = _lam_grid(args, 1e-3, 60.0, 40, "log") if _lam_overridden(args) else None
    cfg = BAConfig(lam=1.0, max_iterations=args.max_iters, tol=args.tol) if override is not None else None
    curves = [
        gmm.gmm_ord_curve(g),
        gmm.gmm_ird_curve(g, override, cfg),
        gmm.gmm_ec_curve(g, override, cfg),
        gmm.gmm_ce_curve(g, override, cfg),
    ]
    formats.write_curves_csv(curves, args.out, pixel_count=args.pixels)
    return 0


def cmd_snc(args) -> int:
    ds = formats.read_logits_csv(args.logits)
    grid = _lam_grid(args, 1e-3, 1e3, 60, "log")
    curve = sampling.snc_sweep(ds, grid)
    formats.write_curves_csv([curve], args.out, pixel_count=args.pixels)
    return 0


def cmd_synth(args) -> int:
    ds = sampling.synth_logits(
        args.kind,
        args.samples,
        seed=args.seed,
        q=args.q,
        logit_scale=args.logit_scale,
        num_classes=args.classes,
        concentration=args.concentration,
    )
    formats.write_logits_csv(ds, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taskrd",
        description="Rate-distortion bounds for task-oriented compression of classifier outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closed-form", help="print a closed-form oracle rate (bits) for one distortion")
    p.add_argument("--kind", choices=("binary", "uniform"), required=True, help="source family")
    p.add_argument("--q", type=float, default=0.5, help="P(class = 1) for the binary kind")
    p.add_argument("--classes", type=int, default=None, help="class count for the uniform kind (>= 2)")
    p.add_argument("--d", type=float, required=True, help="target distortion (error probability)")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("ba", help="rate-distortion sweep for a pmf file and a distortion-matrix file")
    p.add_argument("--pmf", required=True, help="source pmf CSV (one probability per line)")
    p.add_argument("--distortion", required=True, help="distortion matrix CSV (rows = source symbols)")
    p.add_argument("--out", required=True, help="output curves CSV path")
    _add_lambda_args(p)
    _add_solver_args(p)
    _add_pixels_arg(p)
    p.set_defaults(func=cmd_ba)

    p = sub.add_parser("class-bounds", help="classification bounds from a confusion-matrix CSV")
    p.add_argument("--confusion", required=True, help="square confusion CSV (counts or row-stochastic)")
    p.add_argument("--prior", default=None, help="prior pmf CSV path, or the literal 'uniform' for row-stochastic tables")
    p.add_argument("--methods", default="ord,ec,iec,ts,merge", help="comma list from: ord, ec, iec, ts, merge")
    p.add_argument("--k", type=int, default=None, help="emit a single merge count instead of the full merge sweep")
    p.add_argument("--out", required=True, help="output curves CSV path")
    _add_lambda_args(p)
    _add_solver_args(p)
    _add_pixels_arg(p)
    p.set_defaults(func=cmd_class_bounds)

    p = sub.add_parser("gmm", help="four-curve CSV for the overlapping two-class Gaussian example")
    p.add_argument("--q", type=float, default=0.5, help="P(class = 1)")
    p.add_argument("--grid-half-width", type=float, default=6.0, help="observation grid spans +/- this value")
    p.add_argument("--grid-bins", type=int, default=1201, help="odd number of grid cells")
    p.add_argument("--out", required=True, help="output curves CSV path")
    _add_lambda_args(p)  # one override grid applied to all solver-based curves
    _add_solver_args(p)
    _add_pixels_arg(p)
    p.set_defaults(func=cmd_gmm)

    p = sub.add_parser("snc", help="posterior-sampling sweep over a logits CSV")
    p.add_argument("--logits", required=True, help="logits CSV (header: label,l0,l1,...)")
    p.add_argument("--out", required=True, help="output curves CSV path")
    _add_lambda_args(p)
    _add_pixels_arg(p)
    p.set_defaults(func=cmd_snc)

    p = sub.add_parser("synth", help="write a synthetic logits CSV")
    p.add_argument("--kind", choices=("gmm", "dirichlet"), required=True, help="generator family")
    p.add_argument("--samples", type=int, required=True, help="number of records (>= 2)")
    p.add_argument("--seed", type=int, default=0, help="generator seed (same seed, same bytes)")
    p.add_argument("--q", type=float, default=0.5, help="P(class = 1) for the gmm kind")
    p.add_argument("--classes", type=int, default=10, help="class count for the dirichlet kind")
    p.add_argument("--concentration", type=float, default=8.0, help="posterior concentration on the true class (dirichlet kind)")
    p.add_argument("--logit-scale", type=float, default=1.0, help="multiplier applied to the generated log-posteriors")
    p.add_argument("--out", required=True, help="output logits CSV path")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
