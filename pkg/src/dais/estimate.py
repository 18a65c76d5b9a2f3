"""Noise-scale estimation and the largest-difference anchor."""

import math

import numpy as np

from .types import ModelKind, SpecError

MAD_CONSISTENCY = 1.4826


class DegenerateScaleError(ValueError):
    """The MAD noise estimate is zero, so the series cannot be normalised."""


def differences(x, model):
    """First differences (constant model) or second differences X_t - 2X_{t+1} + X_{t+2} (linear).

    Entry ``i`` (0-based) of the result belongs to 1-based index ``i + 1``.
    Works along axis 0, so 2-D inputs are differenced column-wise.
    """
    model = ModelKind.parse(model)
    x = np.asarray(x, dtype=float)
    if model is ModelKind.CONSTANT:
        return x[1:] - x[:-1]
    return x[2:] - 2.0 * x[1:-1] + x[:-2]


def mad_sigma(x, model):
    """Robust noise scale from the MAD of the differenced series.

    The raw MAD of the first (second) differences is divided by sqrt(2)
    (sqrt(6)), the standard deviation inflation of the differencing.
    """
    model = ModelKind.parse(model)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise SpecError("mad_sigma expects a univariate series")
    need = model.order + 1
    if x.size < need:
        raise SpecError(f"need at least {need} samples to estimate sigma, got {x.size}")
    y = differences(x, model)
    mad = np.median(np.abs(y - np.median(y)))
    sigma = MAD_CONSISTENCY * mad / math.sqrt(2.0 if model is ModelKind.CONSTANT else 6.0)
    if not sigma > 0:
        raise DegenerateScaleError(
            "degenerate scale: the MAD of the differenced series is 0; supply sigma explicitly"
        )
    return float(sigma)


def _check_span(s, e, model, T):
    if not (1 <= s and e <= T):
        raise SpecError(f"interval [{s}, {e}] outside [1, {T}]")
    if e - s < model.order:
        raise SpecError(f"interval [{s}, {e}] too short for the {model.value} model")


def largest_diff(x, s, e, model):
    """1-based location of the largest absolute difference inside ``[s, e]``.

    Constant model scans t in {s..e-1} for |X_{t+1} - X_t|; linear model scans
    t in {s..e-2} for |X_{t+2} - 2X_{t+1} + X_t|. Ties go to the smallest t.
    """
    model = ModelKind.parse(model)
    x = np.asarray(x, dtype=float)
    _check_span(s, e, model, x.shape[0])
    y = np.abs(differences(x[s - 1:e], model))
    return s + int(np.argmax(y))
