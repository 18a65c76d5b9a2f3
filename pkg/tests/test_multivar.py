import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dais.detect import dais
from dais.estimate import DegenerateScaleError, largest_diff
from dais.multivar import largest_diff_multi, md_norm, mdais, multi_threshold
from dais.simgen import catalog, generate, rng_for
from dais.types import SpecError, signal_values


def test_norm_examples():
    assert md_norm([3, 4], "l2") == pytest.approx(math.sqrt(12.5))
    assert md_norm([3, 4], "linf") == 4
    with pytest.raises(SpecError):
        md_norm([], "l2")


@given(arrays(float, st.integers(1, 20), elements=st.floats(-1e6, 1e6)))
def test_mean_dominance_sandwich(v):
    l1 = np.mean(np.abs(v))
    l2 = md_norm(v, "l2")
    linf = md_norm(v, "linf")
    assert l1 <= l2 * (1 + 1e-12) + 1e-12
    assert l2 <= linf * (1 + 1e-12) + 1e-12


def test_threshold_reduces_at_d1():
    assert multi_threshold(1000, 1, 1.7) == pytest.approx(1.7 * math.sqrt(math.log(1000)))
    assert multi_threshold(1000, 16, 1.7) == pytest.approx(1.7 * math.sqrt(math.log(2000)))


@pytest.mark.parametrize("kind", ["l2", "linf"])
@pytest.mark.parametrize("model", ["constant", "linear"])
def test_anchor_reduces_to_univariate(kind, model):
    x = rng_for(9).standard_normal(80)
    for s, e in [(1, 80), (10, 50)]:
        assert largest_diff_multi(x[:, None], (s, e), model, kind) == largest_diff(x, s, e, model)


def test_anchor_linf_picks_largest_column_jump():
    x = np.zeros((100, 2))
    x[20:, 0] = 1.0
    x[60:, 1] = 3.0
    assert largest_diff_multi(x, (1, 100), "constant", "linf") == 60


@pytest.mark.parametrize("kind", ["l2", "linf"])
@pytest.mark.parametrize("seed", range(50))
def test_d1_matches_dais(seed, kind):
    spec = catalog("S4" if seed % 2 else "S10")
    x = generate(spec, seed).univariate()
    a = mdais(x[:, None], model=spec.model, norm=kind)
    b = dais(x, model=spec.model)
    assert a.locations == b.locations
    assert all(c.component_index == 1 for c in a.change_points)


def test_noiseless_two_columns():
    x = np.zeros((200, 2))
    x[50:, 0] = 4.0
    x[120:, 1] = 4.0
    res = mdais(x, sigma=1.0, norm="linf")
    assert res.locations == [50, 120]
    assert [c.component_index for c in res.change_points] == [1, 2]


def test_column_permutation():
    x = generate("S5", 3, d=3).values
    a = mdais(x)
    b = mdais(x[:, [2, 0, 1]])
    assert a.locations == b.locations
    perm = {1: 2, 2: 3, 3: 1}
    assert [perm[c.component_index] for c in a.change_points] == [c.component_index for c in b.change_points]


def test_degenerate_column_named():
    x = rng_for(1).standard_normal((50, 3))
    x[:, 1] = 2.0
    with pytest.raises(DegenerateScaleError, match="column 2"):
        mdais(x)


def test_per_column_sigma_reported():
    x = generate("S3", 0, d=2).values
    res = mdais(x)
    assert len(res.sigma_used) == 2


@pytest.mark.slow
def test_three_copies_of_stairs():
    spec = catalog("S3")
    exact = sum(len(mdais(generate(spec, seed, d=3).values).change_points) == spec.N for seed in range(100))
    assert exact >= 90
