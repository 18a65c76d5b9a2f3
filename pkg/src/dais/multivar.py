"""MDAIS: DAIS for d-dimensional series via mean-dominant norm aggregation."""

import math

import numpy as np

from .contrast import contrast_scan
from .detect import MIN_SPAN, _config, _search
from .estimate import DegenerateScaleError, differences, mad_sigma
from .types import DetectionResult, Interval, ModelKind, NormKind, SpecError, TimeSeries


def md_norm(v, kind):
    """Mean-dominant norm of ``v`` (last axis): root-mean-square (L2) or max-abs (Linf)."""
    kind = NormKind.parse(kind)
    v = np.asarray(v, dtype=float)
    if v.size == 0 or v.shape[-1] == 0:
        raise SpecError("md_norm of an empty vector")
    if kind is NormKind.L2:
        return np.sqrt(np.mean(v * v, axis=-1))
    return np.max(np.abs(v), axis=-1)


def _as_matrix(x):
    if isinstance(x, TimeSeries):
        return np.asarray(x.values)
    return TimeSeries(x).values


def largest_diff_multi(x, interval, model, kind):
    """Anchor for a d-dimensional series: argmax over t of the norm of |differences| (ties -> smallest t)."""
    model = ModelKind.parse(model)
    x = _as_matrix(x)
    if not isinstance(interval, Interval):
        interval = Interval(*interval)
    s, e = interval.s, interval.e
    if e > x.shape[0]:
        raise SpecError(f"interval [{s}, {e}] outside [1, {x.shape[0]}]")
    if e - s < model.order:
        raise SpecError(f"interval [{s}, {e}] too short for the {model.value} model")
    return _anchor(x, s, e, model, kind)


def _anchor(z, s, e, model, kind):
    agg = md_norm(np.abs(differences(z[s - 1:e], model)), kind)
    return s + int(np.argmax(agg))


def multi_threshold(T, d, const):
    """``const * sqrt(ln(T * d^(1/4)))``; reduces to the univariate threshold at d = 1."""
    if T < 2:
        raise SpecError(f"threshold needs T >= 2, got {T}")
    return const * math.sqrt(math.log(T * d**0.25))


def mdais(x, config=None, **overrides):
    """Detect change-points shared across the columns of a d-dimensional series.

    Each column is divided by its own MAD scale (or ``config.sigma``). The
    anchor comes from the aggregated differences, the statistic at each split
    is the chosen norm of the per-column contrasts, and each detection records
    the column with the largest individual contrast (1-based).
    """
    config = _config(config, overrides)
    x = _as_matrix(x)
    T, d = x.shape
    zeta = multi_threshold(T, d, config.threshold_const) if T >= 2 else 0.0
    if T - 1 < MIN_SPAN:
        sigma = config.sigma if config.sigma is not None else 1.0
        return DetectionResult((), zeta, tuple([float(sigma)] * d), 0)
    if config.sigma is not None:
        sigmas = np.full(d, float(config.sigma))
    else:
        sigmas = np.empty(d)
        for j in range(d):
            try:
                sigmas[j] = mad_sigma(x[:, j], config.model)
            except DegenerateScaleError:
                raise DegenerateScaleError(
                    f"degenerate scale in column {j + 1}: MAD of its differences is 0; supply sigma explicitly"
                ) from None
    z = x / sigmas

    def scan(s, e):
        per_col = contrast_scan(z, s, e, config.model)
        return md_norm(per_col, config.norm), np.argmax(per_col, axis=1)

    def anchor_of(s, e):
        return _anchor(z, s, e, config.model, config.norm)

    found, checked = _search(z, config, zeta, scan, anchor_of)
    return DetectionResult(found, zeta, tuple(float(v) for v in sigmas), checked)
