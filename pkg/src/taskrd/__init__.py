"""Rate-distortion bounds for task-oriented source coding at desk scale."""

from .ba import BAConfig, BAResult, RDCurve, RDPoint, ba_point, ba_sweep, rate_at
from .classification import (
    ConfusionMatrix,
    TaskModelStats,
    ec_curve,
    effective_distortion,
    iec_curve,
    merge_curve,
    merge_k_baseline,
    ord_curve,
    stats,
    ts_bound,
)
from .gmm import DiscretizedGmm, GmmSpec, d_tm_gmm, discretize, gmm_ce_curve, gmm_ec_curve, gmm_ird_curve, gmm_ord_curve
from .probability import DistortionMatrix, Pmf, binary_entropy, entropy_bits, rd_binary, rd_uniform_classes
from .sampling import LogitsDataset, SncPoint, empirical_confusion, snc_point, snc_sweep, synth_logits, tempered_posterior

__all__ = [
    "BAConfig",
    "BAResult",
    "ConfusionMatrix",
    "DiscretizedGmm",
    "DistortionMatrix",
    "GmmSpec",
    "LogitsDataset",
    "Pmf",
    "RDCurve",
    "RDPoint",
    "SncPoint",
    "TaskModelStats",
    "ba_point",
    "ba_sweep",
    "binary_entropy",
    "d_tm_gmm",
    "discretize",
    "ec_curve",
    "effective_distortion",
    "empirical_confusion",
    "entropy_bits",
    "gmm_ce_curve",
    "gmm_ec_curve",
    "gmm_ird_curve",
    "gmm_ord_curve",
    "iec_curve",
    "merge_curve",
    "merge_k_baseline",
    "ord_curve",
    "rate_at",
    "rd_binary",
    "rd_uniform_classes",
    "snc_point",
    "snc_sweep",
    "stats",
    "synth_logits",
    "tempered_posterior",
    "ts_bound",
]
