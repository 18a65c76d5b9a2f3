"""Synthetic signal catalog (S1-S18) and deterministic noisy generation.

Randomness comes from numpy's Philox counter-based bit generator keyed by the
seed, with numpy's ziggurat normal sampler on top; the streams are identical
across platforms for a given numpy release.
"""

import numpy as np

from .types import GAUSSIAN, ModelKind, NoiseLaw, SignalSpec, SpecError, TimeSeries, signal_values


def rng_for(seed):
    """Counter-based generator for ``seed`` (any non-negative int or sequence of ints)."""
    return np.random.Generator(np.random.Philox(seed))


def _alternating(first, n):
    return tuple(first if i % 2 == 0 else -first for i in range(n))


def _pc(name, T, cps, values, sigma):
    return SignalSpec(name, T, ModelKind.CONSTANT, tuple(cps), values=tuple(values), sigma=sigma)


def _pl(name, T, cps, changes, intercept, slope, sigma):
    return SignalSpec(
        name, T, ModelKind.LINEAR, tuple(cps),
        intercept=intercept, slope=slope, slope_changes=tuple(changes), sigma=sigma,
    )


def _build_catalog():
    specs = [
        _pc("S1", 1000, [485, 515], [0, 1, 0], 1.0),
        _pc("S2", 135, [30, 35], [0, 2.3, 8], 1.0),
        _pc("S3", 150, range(10, 150, 10), range(1, 16), 0.3),
        _pc("S4", 301, [11, 21, 41, 61, 91, 121, 161, 201, 251],
            [7, -7, 6, -6, 5, -5, 4, -4, 3, -3], 4.0),
        _pc("S5", 75, [5, 12, 17, 25, 31, 38, 44, 50, 56, 61, 67],
            [0, 5, 0, 6, 0, 4, 0, 5, 0, 6, 0, 4], 1.0),
        _pc("S6", 700, range(7, 700, 7), [0, 4] * 50, 1.0),
        _pc("S7", 600, range(5, 600, 5), [0, 5] * 60, 1.0),
        _pc("S8", 1100, [550], [0, 2], 1.0),
        _pl("S9", 1408, [256, 512, 768, 1024, 1152, 1280, 1344],
            [-1 / 64, 2 / 64, -3 / 64, 4 / 64, -5 / 64, 6 / 64, -7 / 64], 1.0, 1 / 256, 1.0),
        _pl("S10", 1500, range(15, 1500, 15), _alternating(-1.0, 99), -0.5, 1 / 40, 1.0),
        _pl("S11", 840, range(7, 840, 7), _alternating(-1.0, 119), -0.5, 1 / 32, 0.3),
        _pc("S12", 6000, [], [0], 1.0),
        _pc("S13", 11000, [5500], [0, 1.5], 1.0),
        _pc("S14", 1000, [100, 130, 485, 515, 870, 900], [0, 1.5, 0, 1, 0, 1.5, 0], 1.0),
        _pc("S15", 270, range(11, 270, 20), [0, 1] * 7, 0.4),
        _pl("S16", 1000, [], [], 0.0, 1.0, 1.0),
        _pl("S17", 200, range(20, 200, 20),
            [1 / 6, 1 / 2, -3 / 4, -1 / 3, -2 / 3, 1, 1 / 4, 3 / 4, -5 / 4], -1.0, 1 / 32, 0.3),
        # 7, 14, ..., 343 is 49 knots with alternating -2.5 / 2.5 starting and ending on -2.5
        _pl("S18", 350, range(7, 350, 7), _alternating(-2.5, 49), 0.0, 1.0, 1.0),
    ]
    return {s.name: s for s in specs}


_CATALOG = _build_catalog()

ALIASES = {
    "small_dist": "S1", "small_dist2": "S2", "stairs": "S3", "mix": "S4", "mix2": "S5",
    "many_cpts": "S6", "many_cpts_long": "S7", "simple_signal": "S8", "wave1": "S9",
    "wave2": "S10", "wave3": "S11", "justnoise": "S12", "long_signal": "S13",
    "small_dist3": "S14", "teeth": "S15", "justnoise_wave": "S16", "wave4": "S17", "wave5": "S18",
}


def catalog_names():
    return list(_CATALOG)


def catalog(name):
    """Catalog signal by id (``"S3"``) or alias (``"stairs"``)."""
    key = ALIASES.get(name, name)
    key = key.upper() if key.lower().startswith("s") else key
    try:
        return _CATALOG[key]
    except KeyError:
        raise SpecError(f"unknown signal {name!r}; valid names: {', '.join(_CATALOG)}") from None


def draw_noise(law, T, rng):
    """Unit-scale noise of length T (Student-t is raw t_df; AR(1) has N(0,1) innovations)."""
    law = law if isinstance(law, NoiseLaw) else NoiseLaw.from_dict(law)
    if law.kind == "gaussian":
        return rng.standard_normal(T)
    if law.kind == "student_t":
        return rng.standard_t(law.df, size=T)
    innov = rng.standard_normal(T)
    eps = np.empty(T)
    eps[0] = innov[0] / np.sqrt(1.0 - law.phi**2)
    for t in range(1, T):
        eps[t] = law.phi * eps[t - 1] + innov[t]
    return eps


def generate(spec, seed, d=1):
    """Noisy observations ``f_t + sigma * eps_t``; ``d > 1`` replicates f with independent noise per column."""
    if isinstance(spec, str):
        spec = catalog(spec)
    if d < 1:
        raise SpecError(f"d must be >= 1, got {d}")
    f = signal_values(spec)
    rng = rng_for(seed)
    cols = [f + spec.sigma * draw_noise(spec.noise, spec.T, rng) for _ in range(d)]
    return TimeSeries(np.column_stack(cols))


__all__ = ["GAUSSIAN", "catalog", "catalog_names", "draw_noise", "generate", "rng_for"]
