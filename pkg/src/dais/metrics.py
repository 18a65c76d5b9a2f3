"""Evaluation measures: N-hat minus N histograms, MSE and scaled Hausdorff distance."""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .types import SpecError

DEFAULT_BINS = (-3, 3)


def mse(f_true, fit):
    """Mean squared pointwise error between the fitted and the true signal."""
    fitted = np.asarray(getattr(fit, "fitted", fit), dtype=float)
    f_true = np.asarray(f_true, dtype=float)
    if fitted.shape != f_true.shape:
        raise SpecError(f"length mismatch: {f_true.shape} vs {fitted.shape}")
    return float(np.mean((fitted - f_true) ** 2))


def _check_points(points, T, name):
    pts = [int(p) for p in points]
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise SpecError(f"{name} change-points must be sorted and distinct")
    if pts and not (1 <= pts[0] and pts[-1] < T):
        raise SpecError(f"{name} change-points must lie in [1, {T - 1}]")
    return pts


def hausdorff(true_cpts, est_cpts, T):
    """Scaled Hausdorff distance, or None when there are no true change-points.

    The raw two-sided max-min distance is divided by the longest true segment
    (boundaries 0 and T included). An empty estimate is compared after adding
    0 and T to both sets.
    """
    if T < 2:
        raise SpecError("hausdorff needs T >= 2")
    true_pts = _check_points(true_cpts, T, "true")
    est_pts = _check_points(est_cpts, T, "estimated")
    if not true_pts:
        return None
    bounds = [0, *true_pts, T]
    n_s = max(b - a for a, b in zip(bounds, bounds[1:]))
    if not est_pts:
        true_pts = [0, *true_pts, T]
        est_pts = [0, T]
    a = np.asarray(true_pts)[:, None]
    b = np.asarray(est_pts)[None, :]
    dist = np.abs(a - b)
    raw = max(dist.min(axis=1).max(), dist.min(axis=0).max())
    return float(raw) / n_s


def bin_labels(bins=DEFAULT_BINS):
    lo, hi = bins
    return [f"<={lo}"] + [str(k) for k in range(lo + 1, hi)] + [f">={hi}"]


def bin_label(offset, bins=DEFAULT_BINS):
    lo, hi = bins
    if offset <= lo:
        return f"<={lo}"
    if offset >= hi:
        return f">={hi}"
    return str(offset)


@dataclass(frozen=True)
class RepResult:
    nhat_minus_n: int
    mse: float
    hausdorff: Optional[float]
    runtime_seconds: float
    error: Optional[str] = None


@dataclass(frozen=True)
class EvalRow:
    method: str
    signal: str
    histogram: dict
    mean_mse: float
    mean_hausdorff: Optional[float]
    mean_runtime_seconds: float
    replications: int
    errors: int = 0
    bins: tuple = DEFAULT_BINS
    extra: dict = field(default_factory=dict)

    @property
    def complete(self):
        return self.errors == 0

    def exact(self):
        return self.histogram.get("0", 0)


def summarize(reps, method="", signal="", bins=DEFAULT_BINS):
    """Fold per-replication results into an :class:`EvalRow`.

    Replications that raised are counted in ``errors`` and left out of every
    mean and of the histogram.
    """
    reps = list(reps)
    if not reps:
        raise SpecError("summarize needs at least one replication")
    ok = [r for r in reps if r.error is None]
    hist = {label: 0 for label in bin_labels(bins)}
    for r in ok:
        hist[bin_label(r.nhat_minus_n, bins)] += 1
    dh = [r.hausdorff for r in ok if r.hausdorff is not None]
    return EvalRow(
        method=method,
        signal=signal,
        histogram=hist,
        mean_mse=float(np.mean([r.mse for r in ok])) if ok else math.nan,
        mean_hausdorff=float(np.mean(dh)) if dh else None,
        mean_runtime_seconds=float(np.mean([r.runtime_seconds for r in ok])) if ok else math.nan,
        replications=len(reps),
        errors=len(reps) - len(ok),
        bins=tuple(bins),
    )


def rows_to_csv(rows):
    rows = list(rows)
    labels = bin_labels(rows[0].bins) if rows else bin_labels()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "signal", *labels, "mse", "hausdorff", "runtime_s", "replications", "errors"])
    for row in rows:
        writer.writerow([
            row.method,
            row.signal,
            *[row.histogram.get(label, 0) for label in labels],
            format(row.mean_mse, ".17g"),
            "" if row.mean_hausdorff is None else format(row.mean_hausdorff, ".17g"),
            format(row.mean_runtime_seconds, ".17g"),
            row.replications,
            row.errors,
        ])
    return buf.getvalue()


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "-"
    if v != 0 and abs(v) < 1e-2:
        return f"{v:.2e}"
    return f"{v:.3f}"


def rows_to_markdown(rows):
    rows = list(rows)
    labels = bin_labels(rows[0].bins) if rows else bin_labels()
    head = ["Signal", "Method", *labels, "MSE", "d_H", "Time (s)"]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for row in rows:
        cells = [row.signal, row.method, *[str(row.histogram.get(label, 0)) for label in labels],
                 _fmt(row.mean_mse), _fmt(row.mean_hausdorff), f"{row.mean_runtime_seconds:.4f}"]
        if row.errors:
            cells[1] += f" ({row.errors} failed)"
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
