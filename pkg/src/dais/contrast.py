"""Contrast statistics and their maximisers over an interval.

Both scans work on a local copy of ``x[s..e]`` with cumulative sums, so every
candidate split costs O(1) after an O(l) pass. The local copy is centred
(constant model) or detrended by least squares (linear model) first; the
contrasts are blind to those components, and removing them keeps the
cumulative sums small.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .types import Interval, ModelKind, SpecError


@dataclass(frozen=True)
class ContrastEvaluation:
    argmax_b: int
    max_value: float
    values: Optional[np.ndarray] = None
    # first admissible b; values[i] belongs to b = first_b + i
    first_b: Optional[int] = None


def admissible_range(s, e, model):
    """Inclusive range of split points b the contrast is defined for, or None."""
    model = ModelKind.parse(model)
    if model is ModelKind.CONSTANT:
        lo, hi = s, e - 1
    else:
        lo, hi = s + 1, e - 2
    return (lo, hi) if lo <= hi else None


def _segment(x, s, e):
    x = np.asarray(x, dtype=float)
    if not (1 <= s <= e <= x.shape[0]):
        raise SpecError(f"interval [{s}, {e}] outside [1, {x.shape[0]}]")
    return x[s - 1:e]


def cusum_scan(x, s, e):
    """|CUSUM| for every b in {s..e-1}; 2-D input gives one column per series column."""
    seg = _segment(x, s, e)
    ell = seg.shape[0]
    if ell < 2:
        raise SpecError("interval too short: CUSUM needs at least 2 points")
    seg = seg - seg.mean(axis=0)
    csum = np.cumsum(seg, axis=0)
    left = csum[:-1]
    right = csum[-1] - left
    k = np.arange(1, ell, dtype=float)
    if seg.ndim == 2:
        k = k[:, None]
    wl = np.sqrt((ell - k) / (ell * k))
    wr = np.sqrt(k / (ell * (ell - k)))
    return np.abs(wl * left - wr * right)


def _linear_weights(ell):
    m = np.arange(2, ell - 1, dtype=float)
    alpha = np.sqrt(
        6.0 / (ell * (ell**2 - 1.0) * (1.0 + (ell - m + 1.0) * m + (ell - m) * (m - 1.0)))
    )
    beta = np.sqrt((ell - m + 1.0) * (ell - m) / (m * (m - 1.0)))
    return m, alpha, beta


def _detrend(seg):
    ell = seg.shape[0]
    u = np.arange(1, ell + 1, dtype=float)
    uc = u - u.mean()
    if seg.ndim == 2:
        uc = uc[:, None]
    centred = seg - seg.mean(axis=0)
    slope = (uc * centred).sum(axis=0) / (uc * uc).sum()
    return centred - slope * uc


def linear_scan(x, s, e):
    """|<x, phi^b_{s,e}>| for every b in {s+1..e-2} (continuous slope-change contrast)."""
    seg = _segment(x, s, e)
    ell = seg.shape[0]
    if ell < 4:
        raise SpecError("interval too short: the slope contrast needs at least 4 points")
    y = _detrend(seg)
    u = np.arange(1, ell + 1, dtype=float)
    if y.ndim == 2:
        u = u[:, None]
    c0 = np.cumsum(y, axis=0)
    c1 = np.cumsum(u * y, axis=0)
    m, alpha, beta = _linear_weights(ell)
    idx = m.astype(int) - 1
    l0, l1 = c0[idx], c1[idx]
    r0, r1 = c0[-1] - l0, c1[-1] - l1
    if y.ndim == 2:
        m, alpha, beta = m[:, None], alpha[:, None], beta[:, None]
    left = alpha * beta * ((ell + 2 * m - 1) * l1 - m * (ell + 1) * l0)
    right = -(alpha / beta) * ((3 * ell - 2 * m + 1) * r1 - (ell + 1) * (2 * ell - m) * r0)
    return np.abs(left + right)


def contrast_scan(x, s, e, model):
    model = ModelKind.parse(model)
    if model is ModelKind.CONSTANT:
        return cusum_scan(x, s, e)
    return linear_scan(x, s, e)


def _check_b(s, e, b, model):
    rng = admissible_range(s, e, model)
    if rng is None or not rng[0] <= b <= rng[1]:
        raise SpecError(f"b={b} is not an admissible split of [{s}, {e}] for the {ModelKind.parse(model).value} model")
    return rng[0]


def cusum(x, s, e, b):
    """Absolute CUSUM statistic of ``x`` on ``[s, e]`` split after ``b``."""
    lo = _check_b(s, e, b, ModelKind.CONSTANT)
    return float(cusum_scan(np.asarray(x, dtype=float).ravel(), s, e)[b - lo])


def linear_contrast(x, s, e, b):
    """Absolute slope-change contrast of ``x`` on ``[s, e]`` with the kink at ``b``."""
    lo = _check_b(s, e, b, ModelKind.LINEAR)
    return float(linear_scan(np.asarray(x, dtype=float).ravel(), s, e)[b - lo])


def contrast_vector(s, e, b, T, model):
    """Explicit contrast vector (length T) whose inner product with x gives the signed contrast."""
    model = ModelKind.parse(model)
    _check_b(s, e, b, model)
    t = np.arange(1, T + 1, dtype=float)
    vec = np.zeros(T)
    ell = e - s + 1
    lmask = (t >= s) & (t <= b)
    rmask = (t > b) & (t <= e)
    if model is ModelKind.CONSTANT:
        vec[lmask] = np.sqrt((e - b) / (ell * (b - s + 1)))
        vec[rmask] = -np.sqrt((b - s + 1) / (ell * (e - b)))
        return vec
    alpha = np.sqrt(6.0 / (ell * (ell**2 - 1) * (1 + (e - b + 1) * (b - s + 1) + (e - b) * (b - s))))
    beta = np.sqrt((e - b + 1) * (e - b) / ((b - s + 1) * (b - s)))
    vec[lmask] = alpha * beta * ((e + 2 * b - 3 * s + 2) * t[lmask] - (b * e + b * s - 2 * s * s + 2 * s))
    vec[rmask] = -(alpha / beta) * ((3 * e - 2 * b - s + 2) * t[rmask] - (2 * e * e + 2 * e - b * e - b * s))
    return vec


def argmax_contrast(x, interval, model, keep_values=False):
    """Maximise the model's contrast over all admissible b in ``interval`` (ties -> smallest b)."""
    model = ModelKind.parse(model)
    if not isinstance(interval, Interval):
        interval = Interval(*interval)
    rng = admissible_range(interval.s, interval.e, model)
    if rng is None:
        raise SpecError(f"interval too short: [{interval.s}, {interval.e}] has no admissible split")
    values = contrast_scan(np.asarray(x, dtype=float).ravel(), interval.s, interval.e, model)
    i = int(np.argmax(values))
    return ContrastEvaluation(
        argmax_b=rng[0] + i,
        max_value=float(values[i]),
        values=values if keep_values else None,
        first_b=rng[0],
    )
