"""CSV interchange formats: confusion matrices, priors, pmfs, distortion matrices,
logits datasets, and rate-distortion curve output.

All files are UTF-8, comma-delimited, LF-terminated; lines starting with '#' are
comments. Writers are atomic (write to a sibling temp file, rename on success) and
deterministic, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ba import RDCurve
from .classification import ConfusionMatrix
from .probability import DistortionMatrix, Pmf
from .sampling import LogitsDataset

#: Row sums within this of 1 mark a confusion table as already row-stochastic
#: (probabilities printed with finite precision drift past the simplex tolerance).
ROW_STOCHASTIC_TOL = 1e-6

CURVES_HEADER = ["method", "lambda", "rate_bits", "distortion", "bpp", "flags"]


@dataclass(frozen=True)
class CurveRecord:
    method: str
    lam: float | None
    rate_bits: float
    distortion: float
    bpp: float | None
    flags: str


def _data_rows(path) -> list[tuple[int, list[str]]]:
    """(1-based line number, cells) for every non-comment, non-blank line."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if row[0].lstrip().startswith("#"):
                continue
            rows.append((lineno, [cell.strip() for cell in row]))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def _parse_float(cell: str, path, lineno: int, colname: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ValueError(f"{path}: line {lineno}, column {colname}: not a number: {cell!r}") from None
    if not np.isfinite(value):
        raise ValueError(f"{path}: line {lineno}, column {colname}: non-finite value {cell!r}")
    return value


def _numeric_table(path) -> np.ndarray:
    rows = _data_rows(path)
    width = len(rows[0][1])
    table = []
    for lineno, cells in rows:
        if len(cells) != width:
            raise ValueError(f"{path}: line {lineno}: expected {width} cells, got {len(cells)}")
        table.append([_parse_float(c, path, lineno, f"c{j}") for j, c in enumerate(cells)])
    return np.array(table, dtype=float)


def _atomic_write(path, write_body) -> None:
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            write_body(fh)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def read_pmf_csv(path) -> Pmf:
    """Probability vector from a one-column (or one-row) file; weights are normalized."""
    values = _numeric_table(path).ravel()
    if np.any(values < 0):
        raise ValueError(f"{path}: probabilities must be nonnegative")
    total = values.sum()
    if total <= 0:
        raise ValueError(f"{path}: probabilities sum to zero")
    return Pmf(values / total)


def write_pmf_csv(p: Pmf, path) -> None:
    _atomic_write(path, lambda fh: fh.writelines(f"{v:.17g}\n" for v in p.probs))


def read_distortion_csv(path) -> DistortionMatrix:
    return DistortionMatrix(_numeric_table(path))


def write_distortion_csv(d: DistortionMatrix, path) -> None:
    _atomic_write(path, lambda fh: fh.writelines(",".join(f"{v:.17g}" for v in row) + "\n" for row in d.costs))


def read_confusion_csv(path, prior_path=None, assume_uniform_prior: bool = False) -> ConfusionMatrix:
    """Confusion matrix from a square numeric table of counts or probabilities.

    Counts tables derive the prior from row masses unless ``prior_path`` is given.
    Already row-stochastic tables carry no prior information, so they require either
    ``prior_path`` or an explicit ``assume_uniform_prior=True``.
    """
    table = _numeric_table(path)
    n = table.shape[0]
    if table.ndim != 2 or table.shape[1] != n:
        raise ValueError(f"{path}: confusion matrix must be square, got shape {table.shape}")
    if np.any(table < 0):
        raise ValueError(f"{path}: confusion entries must be nonnegative")
    row_sums = table.sum(axis=1)
    if np.any(row_sums == 0):
        raise ValueError(f"{path}: row {int(np.argmax(row_sums == 0))} is all zeros")

    # All-integer tables are counts even when every row sums to 1 (e.g. an identity
    # count matrix); only fractional row-stochastic tables are prior-ambiguous.
    integral = bool(np.all(table == np.round(table)))
    stochastic = bool(np.all(np.abs(row_sums - 1.0) <= ROW_STOCHASTIC_TOL)) and not integral
    if prior_path is not None:
        prior = read_pmf_csv(prior_path)
    elif stochastic:
        if not assume_uniform_prior:
            raise ValueError(
                f"{path}: table is row-stochastic, so the prior is ambiguous; "
                "pass a prior file or explicitly request a uniform prior"
            )
        prior = Pmf.uniform(n)
    else:
        prior = Pmf(row_sums / row_sums.sum())
    return ConfusionMatrix(table / row_sums[:, None], prior)


def write_confusion_csv(cm: ConfusionMatrix, path, prior_path=None) -> None:
    """Row-stochastic channel to ``path``; the prior goes to ``prior_path`` when given."""
    _atomic_write(path, lambda fh: fh.writelines(",".join(f"{v:.17g}" for v in row) + "\n" for row in cm.channel))
    if prior_path is not None:
        write_pmf_csv(cm.prior, prior_path)


def read_logits_csv(path) -> LogitsDataset:
    """Logits dataset with header ``label,l0,l1,...``; labels are 0-based class indices."""
    rows = _data_rows(path)
    lineno, header = rows[0]
    if len(header) < 2 or header[0] != "label":
        raise ValueError(f"{path}: line {lineno}: header must be 'label,l0,l1,...', got {','.join(header)!r}")
    k = len(header) - 1
    expected = [f"l{j}" for j in range(k)]
    if header[1:] != expected:
        raise ValueError(f"{path}: line {lineno}: logit columns must be {','.join(expected)!r}")

    labels = []
    logits = []
    for lineno, cells in rows[1:]:
        if len(cells) != k + 1:
            raise ValueError(f"{path}: line {lineno}: expected {k + 1} cells, got {len(cells)}")
        try:
            label = int(cells[0])
        except ValueError:
            raise ValueError(f"{path}: line {lineno}, column label: not an integer: {cells[0]!r}") from None
        if not 0 <= label < k:
            raise ValueError(f"{path}: line {lineno}: label {label} outside [0, {k - 1}]")
        labels.append(label)
        logits.append([_parse_float(c, path, lineno, f"l{j}") for j, c in enumerate(cells[1:])])
    if len(labels) < 2:
        raise ValueError(f"{path}: dataset needs at least 2 records, got {len(labels)}")
    return LogitsDataset(labels=np.array(labels, dtype=np.int64), logits=np.array(logits, dtype=float))


def write_logits_csv(ds: LogitsDataset, path) -> None:
    def body(fh):
        fh.write("label," + ",".join(f"l{j}" for j in range(ds.num_classes)) + "\n")
        for label, row in zip(ds.labels, ds.logits):
            fh.write(f"{int(label)}," + ",".join(f"{v:.17g}" for v in row) + "\n")

    _atomic_write(path, body)


def curve_records(curves: list[RDCurve], pixel_count: int | None = None) -> list[CurveRecord]:
    if pixel_count is not None and (int(pixel_count) != pixel_count or pixel_count <= 0):
        raise ValueError(f"pixel count must be a positive integer, got {pixel_count}")
    records = []
    for curve in curves:
        for pt in curve.points:
            records.append(
                CurveRecord(
                    method=curve.method,
                    lam=pt.lam,
                    rate_bits=pt.rate,
                    distortion=pt.distortion,
                    bpp=pt.rate / pixel_count if pixel_count is not None else None,
                    flags=pt.flag,
                )
            )
    records.sort(key=lambda r: (r.method, r.distortion, r.rate_bits))
    return records


def write_curves_csv(curves: list[RDCurve], path, pixel_count: int | None = None) -> None:
    """All curves in one file, header ``method,lambda,rate_bits,distortion,bpp,flags``.

    Numeric fields carry 9 significant digits; ``bpp`` is filled only when a pixel
    count is supplied; rows are grouped by method and sorted by distortion.
    """
    if not curves:
        raise ValueError("need at least one curve to write")
    records = curve_records(curves, pixel_count)

    def body(fh):
        fh.write(",".join(CURVES_HEADER) + "\n")
        for r in records:
            lam = "" if r.lam is None else f"{r.lam:.9g}"
            bpp = "" if r.bpp is None else f"{r.bpp:.9g}"
            fh.write(f"{r.method},{lam},{r.rate_bits:.9g},{r.distortion:.9g},{bpp},{r.flags}\n")

    _atomic_write(path, body)


def read_curves_csv(path) -> list[CurveRecord]:
    rows = _data_rows(path)
    lineno, header = rows[0]
    if header != CURVES_HEADER:
        raise ValueError(f"{path}: line {lineno}: unexpected header {','.join(header)!r}")
    records = []
    for lineno, cells in rows[1:]:
        if len(cells) != len(CURVES_HEADER):
            raise ValueError(f"{path}: line {lineno}: expected {len(CURVES_HEADER)} cells, got {len(cells)}")
        method, lam, rate, dist, bpp, flags = cells
        records.append(
            CurveRecord(
                method=method,
                lam=None if lam == "" else _parse_float(lam, path, lineno, "lambda"),
                rate_bits=_parse_float(rate, path, lineno, "rate_bits"),
                distortion=_parse_float(dist, path, lineno, "distortion"),
                bpp=None if bpp == "" else _parse_float(bpp, path, lineno, "bpp"),
                flags=flags,
            )
        )
    return records
