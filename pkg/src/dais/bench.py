"""Monte-Carlo harness for the simulation tables and the anchor-isolation study."""

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .detect import dais, fit_signal
from .metrics import DEFAULT_BINS, RepResult, hausdorff, mse, summarize
from .robust import RobustConfig, dais_dependent, dais_heavy
from .simgen import catalog, generate, rng_for
from .types import DetectionConfig, ModelKind, NoiseLaw, SignalSpec, SpecError, signal_values

ROBUST_KINDS = ("none", "preavg", "subsample")


@dataclass(frozen=True)
class MethodSpec:
    """A detection config plus an optional robust wrapper (``"preavg"`` or ``"subsample"``)."""

    config: DetectionConfig
    robust: str = "none"
    robust_config: Optional[RobustConfig] = None
    label: Optional[str] = None

    def __post_init__(self):
        if self.robust not in ROBUST_KINDS:
            raise SpecError(f"robust must be one of {ROBUST_KINDS}, got {self.robust!r}")
        if self.robust != "none" and self.robust_config is None:
            object.__setattr__(self, "robust_config", RobustConfig())

    @property
    def name(self):
        if self.label:
            return self.label
        base = f"DAIS[{self.config.model.value} lam={self.config.lam:g} C={self.config.threshold_const:g}]"
        if self.robust != "none":
            base += f" +{self.robust} s={self.robust_config.factor}"
        return base

    def detect(self, x):
        if self.robust == "preavg":
            return dais_heavy(x, self.config, self.robust_config)
        if self.robust == "subsample":
            return dais_dependent(x, self.config, self.robust_config)
        return dais(x, self.config)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        robust = d.pop("robust", "none")
        label = d.pop("label", None)
        rc = {k: d.pop(k) for k in ("factor", "eta", "cluster_tol") if k in d}
        rcfg = None
        if robust != "none":
            rcfg = RobustConfig(rc.get("factor", 5), rc.get("eta"), rc.get("cluster_tol"))
        return cls(DetectionConfig.from_dict(d), robust, rcfg, label)


@dataclass(frozen=True)
class BenchPlan:
    signals: tuple
    methods: tuple
    replications: int = 100
    base_seed: int = 0
    bins: tuple = DEFAULT_BINS

    def __post_init__(self):
        if self.replications < 1:
            raise SpecError("replications must be >= 1")
        if not self.signals or not self.methods:
            raise SpecError("a plan needs at least one signal and one method")
        sigs = tuple(catalog(s) if isinstance(s, str) else s for s in self.signals)
        meths = tuple(m if isinstance(m, MethodSpec) else MethodSpec(m) for m in self.methods)
        object.__setattr__(self, "signals", sigs)
        object.__setattr__(self, "methods", meths)
        object.__setattr__(self, "bins", tuple(self.bins))

    @classmethod
    def from_dict(cls, d):
        """Plan from JSON-like data.

        Signals are catalog names or objects ``{"name": "S1", "noise": {...}, "sigma": ...}``;
        methods are detection-config objects with optional ``robust``/``factor``/``eta``/``cluster_tol``.
        """
        signals = []
        for s in d["signals"]:
            if isinstance(s, str):
                signals.append(catalog(s))
                continue
            spec = catalog(s["name"])
            if "noise" in s or "sigma" in s:
                noise = NoiseLaw.from_dict(s["noise"]) if "noise" in s else spec.noise
                spec = spec.with_noise(noise, s.get("sigma"))
            signals.append(spec)
        methods = [MethodSpec.from_dict(m) for m in d["methods"]]
        bins = tuple(d.get("bins", DEFAULT_BINS))
        return cls(tuple(signals), tuple(methods), int(d.get("replications", 100)), int(d.get("base_seed", 0)), bins)


def _one_rep(spec, method, seed, f_true):
    try:
        x = generate(spec, seed).univariate()
        t0 = time.perf_counter()
        res = method.detect(x)
        elapsed = time.perf_counter() - t0
        fit = fit_signal(x, res.locations, method.config.model)
        return RepResult(
            len(res.change_points) - spec.N,
            mse(f_true, fit),
            hausdorff(spec.change_points, res.locations, spec.T),
            elapsed,
        )
    except Exception as exc:  # recorded per row; the run continues
        return RepResult(0, math.nan, None, 0.0, error=f"{type(exc).__name__}: {exc}")


def _cell(args):
    spec, method, seeds = args
    f_true = signal_values(spec)
    return [_one_rep(spec, method, s, f_true) for s in seeds]


def _workers(requested):
    cap = os.environ.get("DAIS_THREADS")
    n = requested if requested is not None else (os.cpu_count() or 1)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise SpecError(f"DAIS_THREADS must be an integer, got {cap!r}") from None
    return max(1, n)


def run_bench(plan, workers=None):
    """Run every (signal, method) cell over ``plan.replications`` seeds and fold into EvalRows.

    Seed for replication r is ``base_seed + r``. Cells may run in separate
    processes (capped by ``DAIS_THREADS``); rows come back in plan order.
    """
    seeds = [plan.base_seed + r for r in range(plan.replications)]
    cells = [(spec, method, seeds) for spec in plan.signals for method in plan.methods]
    n = min(_workers(workers), len(cells))
    if n > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_cell, cells))
    else:
        results = [_cell(c) for c in cells]
    return [
        summarize(reps, method=method.name, signal=spec.name, bins=plan.bins)
        for (spec, method, _), reps in zip(cells, results)
    ]


def analytic_isolation_prob(delta, sigma):
    """``0.5 * (1 + erf(delta / (2 sqrt(2) sigma))^2)``."""
    if not sigma > 0:
        raise SpecError(f"sigma must be positive, got {sigma}")
    return 0.5 * (1.0 + math.erf(delta / (2.0 * math.sqrt(2.0) * sigma)) ** 2)


def _dmax(T, model):
    return T - 1 if ModelKind.parse(model) is ModelKind.CONSTANT else T - 2


@dataclass(frozen=True)
class IsolationUnion:
    """Admissible anchor locations as inclusive integer ranges."""

    ranges: tuple
    d_max: int
    diagnostics: dict = field(default_factory=dict)

    def __contains__(self, d):
        return any(a <= d <= b for a, b in self.ranges)

    def mask(self):
        """Boolean membership over anchors 1..d_max (index 0 is anchor 1)."""
        m = np.zeros(self.d_max, dtype=bool)
        for a, b in self.ranges:
            m[a - 1:b] = True
        return m

    def size(self):
        return sum(b - a + 1 for a, b in self.ranges)


def uninformative_miss_probability(N, delta_T, n, d_max):
    """``(N - 1)(2 ceil(3 delta_T / 4n) - 1) / d_max``, capped at 1."""
    if N <= 1:
        return 0.0
    return min(1.0, (N - 1) * (2 * math.ceil(3 * delta_T / (4 * n)) - 1) / d_max)


def isolation_union(change_points, delta_T, n, model, T, strict=False):
    """Union of anchor locations from which the expansion isolates a change-point.

    Anchors at or outside the outermost change-points always qualify. An
    anchor strictly between r_J and r_{J+1} qualifies when its distance to the
    nearer of the two is at most half the segment length minus
    ``3 delta_T / (4n)``. ``strict=True`` turns that into a strict inequality.
    """
    if n < 1.5:
        raise SpecError(f"n must be >= 3/2, got {n}")
    cps = [int(r) for r in change_points]
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise SpecError("change-points must be strictly increasing")
    d_max = _dmax(T, model)
    if cps and not (1 <= cps[0] and cps[-1] <= d_max):
        raise SpecError(f"change-points must lie in [1, {d_max}]")
    margin = 3.0 * delta_T / (4.0 * n)
    diag = {
        "margin": margin,
        "uninformative_miss_probability": uninformative_miss_probability(len(cps), delta_T, n, d_max),
    }
    if len(cps) <= 1:
        return IsolationUnion(((1, d_max),), d_max, diag)

    def upto(limit):
        # largest integer d with d <= limit (or < limit when strict)
        k = math.floor(limit)
        return k - 1 if strict and k == limit else k

    def from_(limit):
        k = math.ceil(limit)
        return k + 1 if strict and k == limit else k

    pieces = []
    lo = 1
    for a, b in zip(cps, cps[1:]):
        reach = (b - a) / 2.0 - margin
        pieces.append((lo, max(a, upto(a + reach))))
        lo = min(b, from_(b - reach))
    pieces.append((lo, d_max))
    merged = []
    for a, b in pieces:
        if merged and a <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return IsolationUnion(tuple(merged), d_max, diag)


def study_signal(T):
    """Two jumps of size 1 at 10 + floor(ln T) and T - 10 - floor(ln T)."""
    k = 10 + int(math.floor(math.log(T)))
    if T - 2 * k < 2:
        raise SpecError(f"T = {T} is too short for the two-change-point study signal")
    return SignalSpec(f"iso{T}", T, ModelKind.CONSTANT, (k, T - k), values=(0.0, 1.0, 0.0), sigma=1.0)


def isolation_probability_study(T_values, replications=10000, seed=0, sigma=1.0, n=1.5, strict=True, chunk=2000):
    """Share of noisy draws whose largest absolute first difference lands in the isolation union.

    Returns a list of dicts with keys ``T``, ``delta_T`` and ``proportion``.
    """
    if replications < 1:
        raise SpecError("replications must be >= 1")
    rows = []
    for i, T in enumerate(T_values):
        spec = study_signal(int(T))
        delta_T = spec.change_points[0]
        union = isolation_union(spec.change_points, delta_T, n, ModelKind.CONSTANT, spec.T, strict=strict)
        mask = union.mask()
        f = signal_values(spec)
        rng = rng_for([seed, i])
        hits = 0
        done = 0
        while done < replications:
            m = min(chunk, replications - done)
            x = f + sigma * rng.standard_normal((m, spec.T))
            d = np.argmax(np.abs(np.diff(x, axis=1)), axis=1)  # 0-based -> anchor d + 1
            hits += int(mask[d].sum())
            done += m
        rows.append({"T": spec.T, "delta_T": delta_T, "proportion": hits / replications})
    return rows

