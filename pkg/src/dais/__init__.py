"""Multiple change-point detection by data-adaptive isolation (DAIS and MDAIS)."""

from .bench import BenchPlan, MethodSpec, analytic_isolation_prob, isolation_probability_study, isolation_union, run_bench
from .contrast import argmax_contrast, contrast_vector, cusum, linear_contrast
from .detect import SegmentedFit, dais, fit_signal, threshold
from .estimate import DegenerateScaleError, largest_diff, mad_sigma
from .metrics import EvalRow, hausdorff, mse, summarize
from .multivar import largest_diff_multi, md_norm, mdais
from .robust import RobustConfig, dais_dependent, dais_heavy, pre_average
from .schedule import ExpansionSchedule, build_schedule
from .simgen import catalog, catalog_names, generate
from .types import (
    Detection,
    DetectionConfig,
    DetectionResult,
    Interval,
    ModelKind,
    NoiseLaw,
    NormKind,
    RestartMode,
    SignalSpec,
    SpecError,
    TimeSeries,
)

__all__ = [name for name in dir() if not name.startswith("_")]
