"""Shared domain types: series, intervals, configuration, results and signal specs.

All public indices are 1-based, so a change-point at ``65`` means the 65th
sample, and a change-point ``r`` separates ``x[r]`` from ``x[r + 1]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence, Union

import numpy as np


class SpecError(ValueError):
    """Raised for malformed signal definitions or configurations."""


class ModelKind(str, enum.Enum):
    CONSTANT = "constant"
    LINEAR = "linear"

    @classmethod
    def parse(cls, value: Union[str, "ModelKind"]) -> "ModelKind":
        if isinstance(value, ModelKind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise SpecError(f"unknown model {value!r}; expected 'constant' or 'linear'") from None

    @property
    def default_threshold_const(self) -> float:
        return 1.7 if self is ModelKind.CONSTANT else 2.1

    @property
    def order(self) -> int:
        """Order of the differencing that annihilates the model's trend."""
        return 1 if self is ModelKind.CONSTANT else 2


class NormKind(str, enum.Enum):
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, value: Union[str, "NormKind"]) -> "NormKind":
        if isinstance(value, NormKind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise SpecError(f"unknown norm {value!r}; expected 'l2' or 'linf'") from None


class RestartMode(str, enum.Enum):
    FROM_INTERVAL_ENDS = "ends"
    FROM_DETECTED_POINT = "point"

    @classmethod
    def parse(cls, value: Union[str, "RestartMode"]) -> "RestartMode":
        if isinstance(value, RestartMode):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise SpecError(f"unknown restart mode {value!r}; expected 'ends' or 'point'") from None


@dataclass(frozen=True)
class Interval:
    """Closed index range ``[s, e]`` (1-based)."""

    s: int
    e: int

    def __post_init__(self):
        if self.s < 1 or self.e < self.s:
            raise SpecError(f"invalid interval [{self.s}, {self.e}]")

    @property
    def length(self) -> int:
        return self.e - self.s + 1

    def as_list(self) -> list:
        return [self.s, self.e]


class TimeSeries:
    """Finite real samples stored as a ``T x d`` array."""

    def __init__(self, values):
        arr = np.array(values, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise SpecError(f"time series must be a non-empty 1-D or 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise SpecError("time series contains NaN or infinite values")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def T(self) -> int:
        return self._values.shape[0]

    @property
    def d(self) -> int:
        return self._values.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Column ``j`` (1-based)."""
        return self._values[:, j - 1]

    def univariate(self) -> np.ndarray:
        if self.d != 1:
            raise SpecError(f"expected a univariate series, got d={self.d}")
        return self._values[:, 0]

    def __len__(self):
        return self.T

    def __repr__(self):
        return f"TimeSeries(T={self.T}, d={self.d})"


@dataclass(frozen=True)
class DetectionConfig:
    model: ModelKind = ModelKind.CONSTANT
    lam: int = 3
    threshold_const: Optional[float] = None
    sigma: Optional[float] = None
    norm: NormKind = NormKind.L2
    restart_mode: RestartMode = RestartMode.FROM_DETECTED_POINT

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind.parse(self.model))
        object.__setattr__(self, "norm", NormKind.parse(self.norm))
        object.__setattr__(self, "restart_mode", RestartMode.parse(self.restart_mode))
        if int(self.lam) != self.lam or self.lam < 1:
            raise SpecError(f"lambda must be a positive integer, got {self.lam}")
        object.__setattr__(self, "lam", int(self.lam))
        if self.threshold_const is None:
            object.__setattr__(self, "threshold_const", self.model.default_threshold_const)
        if not self.threshold_const > 0:
            raise SpecError(f"threshold constant must be positive, got {self.threshold_const}")
        if self.sigma is not None and not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise SpecError(f"sigma override must be positive and finite, got {self.sigma}")

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "lambda": self.lam,
            "threshold_const": self.threshold_const,
            "sigma": self.sigma,
            "norm": self.norm.value,
            "restart": self.restart_mode.value,
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "DetectionConfig":
        return cls(
            model=doc.get("model", "constant"),
            lam=doc.get("lambda", 3),
            threshold_const=doc.get("threshold_const"),
            sigma=doc.get("sigma"),
            norm=doc.get("norm", "l2"),
            restart_mode=doc.get("restart", "point"),
        )


@dataclass(frozen=True)
class Detection:
    location: int
    interval: Interval
    contrast_value: float
    component_index: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "location": self.location,
            "contrast": self.contrast_value,
            "interval": self.interval.as_list(),
            "component": self.component_index,
        }


@dataclass(frozen=True)
class DetectionResult:
    change_points: tuple
    threshold_used: float
    sigma_used: Union[float, tuple]
    intervals_checked: int
    diagnostics: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        locs = [c.location for c in self.change_points]
        if any(b <= a for a, b in zip(locs, locs[1:])):
            raise SpecError("detections must be strictly increasing by location")

    @property
    def locations(self) -> list:
        return [c.location for c in self.change_points]

    def __len__(self):
        return len(self.change_points)


# --- signal definitions ----------------------------------------------------


@dataclass(frozen=True)
class NoiseLaw:
    """Noise distribution: ``gaussian``, ``student_t`` (with ``df``) or ``ar1`` (with ``phi``)."""

    kind: str = "gaussian"
    df: Optional[int] = None
    phi: Optional[float] = None

    def __post_init__(self):
        kind = str(self.kind).lower()
        object.__setattr__(self, "kind", kind)
        if kind == "gaussian":
            pass
        elif kind == "student_t":
            if self.df is None or int(self.df) != self.df or self.df < 3:
                raise SpecError(f"student_t noise needs an integer df >= 3, got {self.df}")
        elif kind == "ar1":
            if self.phi is None or not -1 < self.phi < 1:
                raise SpecError(f"ar1 noise needs |phi| < 1, got {self.phi}")
        else:
            raise SpecError(f"unknown noise kind {self.kind!r}")

    def to_dict(self) -> dict:
        doc = {"kind": self.kind}
        if self.kind == "student_t":
            doc["df"] = int(self.df)
        if self.kind == "ar1":
            doc["phi"] = self.phi
        return doc

    @classmethod
    def from_dict(cls, doc: Union[str, Mapping[str, Any]]) -> "NoiseLaw":
        if isinstance(doc, str):
            return cls(doc)
        return cls(doc.get("kind", "gaussian"), doc.get("df"), doc.get("phi"))


GAUSSIAN = NoiseLaw()


@dataclass(frozen=True)
class SignalSpec:
    """Declarative description of a true signal plus its noise.

    Piecewise-constant signals carry ``values`` (one mean per segment).
    Continuous piecewise-linear signals carry ``intercept`` (f_1), ``slope``
    (f_2 - f_1) and ``slope_changes`` (one increment per change-point); the
    signal is built by accumulating slopes, so it is continuous by construction.
    """

    name: str
    T: int
    model: ModelKind
    change_points: tuple = ()
    values: tuple = ()
    intercept: float = 0.0
    slope: float = 0.0
    slope_changes: tuple = ()
    sigma: float = 1.0
    noise: NoiseLaw = GAUSSIAN

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind.parse(self.model))
        object.__setattr__(self, "change_points", tuple(int(r) for r in self.change_points))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "slope_changes", tuple(float(v) for v in self.slope_changes))
        if isinstance(self.noise, (str, dict)):
            object.__setattr__(self, "noise", NoiseLaw.from_dict(self.noise))
        if self.T < 1:
            raise SpecError(f"{self.name}: T must be >= 1")
        cps = self.change_points
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise SpecError(f"{self.name}: change-points must be strictly increasing")
        if cps and not (1 <= cps[0] and cps[-1] < self.T):
            raise SpecError(f"{self.name}: change-points must lie in [1, T-1]")
        if self.sigma < 0 or not math.isfinite(self.sigma):
            raise SpecError(f"{self.name}: sigma must be a finite non-negative number")
        if self.model is ModelKind.CONSTANT:
            if len(self.values) != len(cps) + 1:
                raise SpecError(
                    f"{self.name}: {len(cps)} change-points need {len(cps) + 1} segment values, "
                    f"got {len(self.values)}"
                )
        elif len(self.slope_changes) != len(cps):
            raise SpecError(
                f"{self.name}: {len(cps)} change-points need as many slope changes, "
                f"got {len(self.slope_changes)}"
            )

    @property
    def N(self) -> int:
        return len(self.change_points)

    def with_noise(self, noise: NoiseLaw, sigma: Optional[float] = None) -> "SignalSpec":
        from dataclasses import replace

        return replace(self, noise=noise, sigma=self.sigma if sigma is None else sigma)

    def to_dict(self) -> dict:
        doc = {
            "name": self.name,
            "T": self.T,
            "model": self.model.value,
            "change_points": list(self.change_points),
            "sigma": self.sigma,
            "noise": self.noise.to_dict(),
        }
        if self.model is ModelKind.CONSTANT:
            doc["values"] = list(self.values)
        else:
            doc["intercept"] = self.intercept
            doc["slope"] = self.slope
            doc["slope_changes"] = list(self.slope_changes)
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "SignalSpec":
        try:
            return cls(
                name=doc["name"],
                T=int(doc["T"]),
                model=doc["model"],
                change_points=tuple(doc.get("change_points", ())),
                values=tuple(doc.get("values", ())),
                intercept=float(doc.get("intercept", 0.0)),
                slope=float(doc.get("slope", 0.0)),
                slope_changes=tuple(doc.get("slope_changes", ())),
                sigma=float(doc.get("sigma", 1.0)),
                noise=NoiseLaw.from_dict(doc.get("noise", "gaussian")),
            )
        except KeyError as exc:
            raise SpecError(f"signal spec is missing field {exc.args[0]!r}") from None


def signal_values(spec: SignalSpec) -> np.ndarray:
    """Deterministic true signal f_1..f_T as a length-T array."""
    T = spec.T
    bounds = [0, *spec.change_points, T]
    if spec.model is ModelKind.CONSTANT:
        f = np.empty(T)
        for (a, b), mu in zip(zip(bounds, bounds[1:]), spec.values):
            f[a:b] = mu
        return f
    # steps[t-1] = f_{t+1} - f_t; a knot at r changes every step from f_{r+1} - f_r on
    steps = np.full(max(T - 1, 0), spec.slope, dtype=float)
    for r, dslope in zip(spec.change_points, spec.slope_changes):
        steps[r - 1:] += dslope
    f = np.empty(T)
    f[0] = spec.intercept
    if T > 1:
        f[1:] = spec.intercept + np.cumsum(steps)
    return f


def min_spacing(spec: Union[SignalSpec, Sequence[int]], T: Optional[int] = None) -> int:
    """Minimum distance between consecutive change-points, with r_0 = 0 and r_{N+1} = T."""
    if isinstance(spec, SignalSpec):
        cps, T = spec.change_points, spec.T
    else:
        cps = tuple(spec)
        if T is None:
            raise SpecError("T is required when passing raw change-points")
    bounds = [0, *cps, T]
    return int(min(b - a for a, b in zip(bounds, bounds[1:])))


def change_magnitudes(spec: SignalSpec) -> np.ndarray:
    """Per change-point magnitude: |f_{r+1} - f_r| (constant) or |f_{r-1} + f_{r+1} - 2 f_r| (linear)."""
    f = signal_values(spec)
    r = np.asarray(spec.change_points, dtype=int)
    if spec.model is ModelKind.CONSTANT:
        return np.abs(f[r] - f[r - 1])
    return np.abs(f[r - 2] + f[r] - 2 * f[r - 1])
