"""Data-adaptive isolation (DAIS) for univariate series, plus per-segment OLS fits."""

import math
from dataclasses import dataclass

import numpy as np

from .contrast import admissible_range, contrast_scan
from .estimate import largest_diff, mad_sigma
from .schedule import build_schedule
from .types import (
    Detection,
    DetectionConfig,
    DetectionResult,
    Interval,
    ModelKind,
    RestartMode,
    SpecError,
)

# Intervals with e - s below this are never searched.
MIN_SPAN = 3


def threshold(T, const):
    """Detection threshold ``const * sqrt(ln T)``."""
    if T < 2:
        raise SpecError(f"threshold needs T >= 2, got {T}")
    if not const > 0:
        raise SpecError(f"threshold constant must be positive, got {const}")
    return const * math.sqrt(math.log(T))


def _as_univariate(x):
    x = np.asarray(getattr(x, "values", x), dtype=float)
    if x.ndim == 2 and x.shape[1] == 1:
        x = x[:, 0]
    if x.ndim != 1:
        raise SpecError(f"expected a univariate series, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise SpecError("series contains NaN or infinite values")
    return x


def _restart(mode, s, e, interval, b):
    if mode is RestartMode.FROM_DETECTED_POINT:
        return (s, b), (b + 1, e)
    return (s, interval.s), (interval.e, e)


def _search(z, config, zeta, scan, anchor_of):
    """Run the interval recursion on the normalised data.

    ``scan(s, e)`` returns (contrast values over admissible b, optional
    per-b component index) and ``anchor_of(s, e)`` the expansion anchor.
    Returns the detections and the number of intervals evaluated.
    """
    T = z.shape[0]
    found = {}
    checked = 0
    stack = [(1, T)]
    while stack:
        s, e = stack.pop()
        if e - s < MIN_SPAN:
            continue
        anchor = anchor_of(s, e)
        for iv in build_schedule(s, e, anchor, config.lam):
            rng = admissible_range(iv.s, iv.e, config.model)
            if rng is None:
                continue
            values, component = scan(iv.s, iv.e)
            checked += 1
            i = int(np.argmax(values))
            if values[i] > zeta:
                b = rng[0] + i
                comp = None if component is None else int(component[i]) + 1
                found.setdefault(b, Detection(b, iv, float(values[i]), comp))
                left, right = _restart(config.restart_mode, s, e, iv, b)
                # left branch is processed first
                stack.append(right)
                stack.append(left)
                break
    return tuple(found[b] for b in sorted(found)), checked


def dais(x, config=None, **overrides):
    """Detect change-points in a univariate series.

    The series is divided by its noise scale (``config.sigma`` or the MAD
    estimate), then searched recursively: from the largest difference inside
    ``[s, e]`` the expanding intervals are tested in order, and the first one
    whose contrast maximum strictly exceeds ``C * sqrt(ln T)`` yields a
    change-point, after which both remaining pieces are searched again.

    Keyword overrides (``model=``, ``lam=`` ...) build or modify the config.
    """
    config = _config(config, overrides)
    x = _as_univariate(x)
    T = x.shape[0]
    zeta = threshold(T, config.threshold_const) if T >= 2 else 0.0
    if T - 1 < MIN_SPAN:
        sigma = config.sigma if config.sigma is not None else 1.0
        return DetectionResult((), zeta, float(sigma), 0)
    sigma = config.sigma if config.sigma is not None else mad_sigma(x, config.model)
    z = x / sigma

    def scan(s, e):
        return contrast_scan(z, s, e, config.model), None

    def anchor_of(s, e):
        return largest_diff(z, s, e, config.model)

    found, checked = _search(z, config, zeta, scan, anchor_of)
    return DetectionResult(found, zeta, float(sigma), checked)


def _config(config, overrides):
    if config is None:
        return DetectionConfig(**overrides)
    if overrides:
        from dataclasses import replace

        if "model" in overrides and "threshold_const" not in overrides:
            overrides["threshold_const"] = None
        return replace(config, **overrides)
    return config


@dataclass(frozen=True)
class SegmentedFit:
    breakpoints: tuple
    params: tuple  # (mean,) or (intercept, slope) per segment, in 1-based t
    fitted: np.ndarray


def segment_bounds(change_points, T):
    """Half-open 0-based slices ``(start, stop)`` of the segments defined by the change-points."""
    cps = [int(c) for c in change_points]
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise SpecError("change-points must be strictly increasing")
    if cps and not (1 <= cps[0] and cps[-1] < T):
        raise SpecError(f"change-points must lie in [1, {T - 1}]")
    edges = [0, *cps, T]
    return list(zip(edges, edges[1:]))


def fit_signal(x, change_points, model):
    """Least-squares fit between successive change-points.

    Constant model: segment means. Linear model: an independent straight line
    per segment (not forced to be continuous); a one-point segment gets slope 0.
    """
    model = ModelKind.parse(model)
    x = _as_univariate(x)
    T = x.shape[0]
    fitted = np.empty(T)
    params = []
    for a, b in segment_bounds(change_points, T):
        seg = x[a:b]
        if model is ModelKind.CONSTANT or seg.size == 1:
            mu = float(seg.mean())
            fitted[a:b] = mu
            params.append((mu,) if model is ModelKind.CONSTANT else (mu, 0.0))
            continue
        t = np.arange(a + 1, b + 1, dtype=float)
        tc = t - t.mean()
        slope = float((tc * (seg - seg.mean())).sum() / (tc * tc).sum())
        intercept = float(seg.mean() - slope * t.mean())
        fitted[a:b] = intercept + slope * t
        params.append((intercept, slope))
    return SegmentedFit(tuple(int(c) for c in change_points), tuple(params), fitted)
