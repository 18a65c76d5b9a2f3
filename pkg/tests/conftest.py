import functools

import numpy as np
import pytest

from dais.bench import BenchPlan, MethodSpec, run_bench
from dais.robust import RobustConfig
from dais.simgen import catalog
from dais.types import DetectionConfig, NoiseLaw


@functools.lru_cache(maxsize=None)
def mc_row(signal, model, lam=3, robust="none", noise=None, reps=100):
    """One cached bench row, shared between module tests and the acceptance suite."""
    spec = catalog(signal)
    if noise is not None:
        spec = spec.with_noise(NoiseLaw.from_dict(dict(noise)))
    method = MethodSpec(DetectionConfig(model=model, lam=lam), robust,
                        RobustConfig(5) if robust != "none" else None)
    plan = BenchPlan((spec,), (method,), replications=reps, base_seed=0)
    (row,) = run_bench(plan, workers=1)
    return row


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
