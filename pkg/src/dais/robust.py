"""Pre-processing wrappers: pre-averaging for heavy tails, subsampling + vote for dependence."""

import statistics
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .detect import _as_univariate, _config, dais
from .estimate import DegenerateScaleError, mad_sigma
from .types import Detection, DetectionResult, Interval, SpecError


@dataclass(frozen=True)
class RobustConfig:
    """``factor`` is the block / subsampling step s; ``vote_min`` defaults to ceil(s/2), ``cluster_tol`` to s."""

    factor: int = 5
    vote_min: Optional[int] = None
    cluster_tol: Optional[float] = None

    def __post_init__(self):
        if int(self.factor) != self.factor or self.factor < 2:
            raise SpecError(f"factor must be an integer >= 2, got {self.factor}")
        if self.vote_min is None:
            object.__setattr__(self, "vote_min", -(-self.factor // 2))
        if not 1 <= self.vote_min <= self.factor:
            raise SpecError(f"vote_min must be in [1, {self.factor}], got {self.vote_min}")
        if self.cluster_tol is None:
            object.__setattr__(self, "cluster_tol", self.factor)
        if self.cluster_tol < 0:
            raise SpecError("cluster_tol must be non-negative")


@dataclass(frozen=True)
class BlockMap:
    """Maps indices of the block-averaged series back to the original series."""

    factor: int
    T: int

    @property
    def Q(self):
        return -(-self.T // self.factor)

    def to_original(self, q):
        """Change-point ``q`` between blocks q and q+1 -> ``(q - 1) * s + floor((s + 1) / 2)``."""
        return (q - 1) * self.factor + (self.factor + 1) // 2

    def block_start(self, q):
        return (q - 1) * self.factor + 1

    def block_end(self, q):
        return min(q * self.factor, self.T)


def pre_average(x, factor):
    """Block means of length ``factor``; the final block may be shorter."""
    x = _as_univariate(x)
    if int(factor) != factor or factor < 2:
        raise SpecError(f"factor must be an integer >= 2, got {factor}")
    factor = int(factor)
    T = x.shape[0]
    if T < factor:
        raise SpecError(f"series of length {T} is shorter than the averaging factor {factor}")
    mapping = BlockMap(factor, T)
    full = (T // factor) * factor
    means = x[:full].reshape(-1, factor).mean(axis=1)
    if full < T:
        means = np.append(means, x[full:].mean())
    return means, mapping


def dais_heavy(x, config=None, robust=None, **overrides):
    """DAIS on the block-averaged series, with detections mapped back to the original index."""
    config = _config(config, overrides)
    robust = robust or RobustConfig()
    averaged, mapping = pre_average(x, robust.factor)
    inner = dais(averaged, config)
    try:
        sigma_original = mad_sigma(_as_univariate(x), config.model)
    except (DegenerateScaleError, SpecError):
        sigma_original = None
    mapped = tuple(
        Detection(
            mapping.to_original(c.location),
            Interval(mapping.block_start(c.interval.s), mapping.block_end(c.interval.e)),
            c.contrast_value,
        )
        for c in inner.change_points
    )
    return DetectionResult(
        mapped,
        inner.threshold_used,
        inner.sigma_used,
        inner.intervals_checked,
        diagnostics={
            "robust": "preavg",
            "factor": robust.factor,
            "averaged_length": mapping.Q,
            "averaged_locations": inner.locations,
            "sigma_original": sigma_original,
        },
    )


def subsample(x, factor):
    """The ``factor`` interleaved sub-series (X_k, X_{k+s}, ...) for k = 1..s."""
    x = _as_univariate(x)
    return [x[k::factor] for k in range(factor)]


def _clusters(points, tol):
    """Single-linkage groups of (location, series, detection) sorted by location."""
    groups = []
    for p in sorted(points, key=lambda p: (p[0], p[1])):
        if groups and p[0] - groups[-1][-1][0] <= tol:
            groups[-1].append(p)
        else:
            groups.append([p])
    return groups


def dais_dependent(x, config=None, robust=None, **overrides):
    """Subsample, run DAIS on every sub-series, and keep locations found in >= vote_min of them.

    A detection at q in sub-series k maps to (q - 1) * s + k. Detections within
    ``cluster_tol`` of each other are chained together; each surviving cluster
    reports the lower median of its members' locations.
    """
    config = _config(config, overrides)
    robust = robust or RobustConfig()
    s = robust.factor
    subs = subsample(x, s)
    if min(len(v) for v in subs) < 4:
        raise SpecError(f"sub-series are too short (need >= 4 samples each at factor {s})")
    results = [dais(v, config) for v in subs]
    points = []
    for k, res in enumerate(results, start=1):
        for c in res.change_points:
            points.append(((c.location - 1) * s + k, k, c))
    kept = []
    for group in _clusters(points, robust.cluster_tol):
        support = {k for _, k, _ in group}
        if len(support) < robust.vote_min:
            continue
        loc = statistics.median_low([p[0] for p in group])
        lo = min((p[2].interval.s - 1) * s + p[1] for p in group)
        hi = max((p[2].interval.e - 1) * s + p[1] for p in group)
        kept.append(Detection(loc, Interval(lo, hi), max(p[2].contrast_value for p in group)))
    return DetectionResult(
        tuple(kept),
        results[0].threshold_used,
        float(np.median([r.sigma_used for r in results])),
        sum(r.intervals_checked for r in results),
        diagnostics={
            "robust": "subsample",
            "factor": s,
            "vote_min": robust.vote_min,
            "cluster_tol": robust.cluster_tol,
            "subseries_locations": [r.locations for r in results],
        },
    )
