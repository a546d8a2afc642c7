import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from trendcast.evaluation import (
    FitMetrics,
    ModelChoice,
    UndefinedMetricError,
    evaluate,
    r_squared,
    rmse,
    select_model,
)
from trendcast.ingest import TimeSeries
from trendcast.regression import ModelKind, fit, fit_oracle

L, Q, E = ModelKind.LINEAR, ModelKind.QUADRATIC, ModelKind.EXPONENTIAL


def test_r_squared_values():
    assert r_squared([1, 2, 3], [1, 2, 3]) == 1.0
    assert r_squared([1, 2, 3], [2, 2, 2]) == 0.0
    # RSS = 1, TSS = 2
    assert r_squared([1, 2, 3], [1, 2, 4]) == pytest.approx(0.5, abs=1e-12)


def test_r_squared_can_go_negative():
    assert r_squared([1, 2, 3], [3, 2, 1]) == pytest.approx(-3.0)


def test_r_squared_constant_actual():
    with pytest.raises(UndefinedMetricError):
        r_squared([4, 4, 4], [4, 4, 4])


def test_rmse_values():
    assert rmse([1, 2], [1, 2]) == 0.0
    assert rmse([0, 0], [3, 4]) == pytest.approx(math.sqrt(12.5), abs=1e-12)
    assert rmse([1, 5, 9], [3.5, 7.5, 11.5]) == pytest.approx(2.5)


def test_length_mismatch():
    with pytest.raises(ValueError):
        rmse([1, 2], [1])
    with pytest.raises(ValueError):
        r_squared([], [])


arrays = st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=30)


@given(arrays, st.floats(0.01, 100), st.floats(-1e3, 1e3), st.integers(0, 999))
def test_r_squared_affine_invariant(a, scale, shift, seed):
    a = np.array(a)
    if np.ptp(a) < 1e-3:
        return
    p = a + np.random.default_rng(seed).normal(0, 1, a.size)
    assert r_squared(scale * a + shift, scale * p + shift) == pytest.approx(r_squared(a, p), rel=1e-6, abs=1e-6)


@given(arrays, st.floats(-100, 100))
def test_rmse_scales_linearly(a, c):
    a = np.array(a)
    p = a[::-1]
    assert rmse(c * a, c * p) == pytest.approx(abs(c) * rmse(a, p), rel=1e-9, abs=1e-9)


def test_evaluate_exact_fit():
    s = TimeSeries(1, "q", "", tuple((2000 + t, t * t - 3 * t + 2.0) for t in range(11)))
    m = evaluate(fit(s, Q), s)
    assert m.kind is Q
    assert m.r_squared == pytest.approx(1, abs=1e-9)
    assert m.rmse <= 1e-6 * 72


def test_evaluate_exponential_in_original_units():
    years = range(2000, 2010)
    vals = [3 * 2.0 ** (y - 2000) * (1.1 if y % 2 else 0.9) for y in years]
    s = TimeSeries(1, "e", "", tuple(zip(years, vals)))
    model = fit_oracle(s, E)
    from trendcast.regression import predict

    fitted = np.array([predict(model, y) for y in years])
    m = evaluate(model, s)
    assert m.rmse == pytest.approx(math.sqrt(np.mean((fitted - vals) ** 2)))


def test_nested_dominance(fixture_series):
    for s in fixture_series:
        assert evaluate(fit_oracle(s, Q), s).r_squared >= evaluate(fit_oracle(s, L), s).r_squared - 1e-12


class TestSelect:
    def test_argmax(self):
        c = select_model([FitMetrics(L, 0.97, 1), FitMetrics(Q, 0.99, 1), FitMetrics(E, 0.98, 1)])
        assert c.selected is Q

    def test_tie_broken_by_rmse(self):
        c = select_model([FitMetrics(L, 0.95, 5.0), FitMetrics(Q, 0.95, 4.0)])
        assert c.selected is Q

    def test_near_tie_within_tolerance(self):
        c = select_model([FitMetrics(L, 0.95 + 5e-10, 5.0), FitMetrics(Q, 0.95, 4.0)])
        assert c.selected is Q

    def test_full_tie_prefers_simpler(self):
        c = select_model([FitMetrics(E, 0.9, 2.0), FitMetrics(L, 0.9, 2.0)])
        assert c.selected is L

    def test_co2_like_row(self):
        c = select_model([FitMetrics(L, 0.95, 9e4), FitMetrics(Q, 0.99, 6e4), FitMetrics(E, 0.997, 48049.006)])
        assert c.selected is E and c.best.r_squared == 0.997

    def test_skipped_recorded(self):
        c = select_model([FitMetrics(L, 0.9, 1.0)], [(E, "non-positive value")])
        assert c.skipped == ((E, "non-positive value"),)

    @given(st.lists(st.tuples(st.floats(-1, 1), st.floats(0, 10)), min_size=3, max_size=3))
    def test_permutation_invariant(self, stats):
        cands = [FitMetrics(k, r, e) for k, (r, e) in zip(ModelKind, stats)]
        picks = {select_model(p).selected for p in itertools.permutations(cands)}
        assert len(picks) == 1

    def test_empty(self):
        with pytest.raises(ValueError):
            select_model([])


def test_choice_invariants():
    with pytest.raises(ValueError):
        ModelChoice((FitMetrics(L, 0.9, 1.0),), Q)
    with pytest.raises(ValueError):
        FitMetrics(L, 0.9, -1.0)
