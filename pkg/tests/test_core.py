import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rwa_rg.core import (
    LadderState,
    Method,
    MethodTag,
    Model,
    ModelParams,
    ParameterError,
    StrongCouplingWarning,
    TimeGrid,
    Trajectory,
    TwoTimes,
    check_two_times,
    map_times,
    validate_params,
)


@pytest.mark.parametrize("tau, eps, t1, t2", [
    (0.0, 0.1, 0.0, 0.0),
    (math.pi, 0.1, 10 * math.pi, math.pi),
    (2.5, 0.02, 125.0, 2.5),
])
def test_map_times_examples(tau, eps, t1, t2):
    times = map_times(tau, eps)
    assert times.t1 == pytest.approx(t1, rel=1e-15)
    assert times.t2 == t2


@pytest.mark.parametrize("eps", [0.0, -0.1, float("nan")])
def test_map_times_rejects_bad_epsilon(eps):
    with pytest.raises(ParameterError):
        map_times(1.0, eps)


def test_map_times_rejects_negative_tau():
    with pytest.raises(ParameterError):
        map_times([0.0, -1.0], 0.1)


@given(tau=st.floats(0, 1e3), c=st.floats(0, 10), eps=st.floats(1e-6, 0.5))
def test_map_times_linear(tau, c, eps):
    base = map_times(tau, eps)
    scaled = map_times(c * tau, eps)
    assert scaled.t1 == pytest.approx(c * base.t1, rel=1e-14, abs=1e-300)
    assert scaled.t2 == pytest.approx(c * base.t2, rel=1e-14, abs=1e-300)


@given(tau=st.floats(0, 1e4), eps=st.floats(1e-6, 0.5))
def test_map_times_round_trip(tau, eps):
    times = map_times(tau, eps)
    assert times.t1 * eps == pytest.approx(times.t2, rel=4e-16, abs=0)
    check_two_times(times, eps)


def test_check_two_times_rejects_off_line():
    with pytest.raises(ParameterError):
        check_two_times(TwoTimes(10.0, 1.1), 0.1)


@pytest.mark.parametrize("big_delta, eps", [(50.0, 0.02), (10.0, 0.1)])
def test_validate_params_ok(big_delta, eps):
    p = validate_params(ModelParams(0.0, big_delta))
    assert p.epsilon == eps


@pytest.mark.parametrize("big_delta", [0.0, -3.0, float("inf"), float("nan")])
def test_validate_params_rejects(big_delta):
    with pytest.raises(ParameterError):
        validate_params(ModelParams(0.0, big_delta))


def test_strong_coupling_warns():
    with pytest.warns(StrongCouplingWarning):
        validate_params(ModelParams(0.0, 2.0, Model.JAYNES_CUMMINGS))


def test_epsilon_is_derived():
    p = ModelParams.from_epsilon(0.25)
    assert p.big_delta == 4.0 and p.epsilon == 0.25
    with pytest.raises(ParameterError):
        ModelParams.from_epsilon(0.0)


def test_time_grid():
    g = TimeGrid.uniform(3.0, 7)
    t = g.times
    assert t[0] == 0.0 and t[-1] == 3.0 and len(t) == 7
    assert np.all(np.diff(t) > 0)
    for bad in [(-1.0, 1.0, 3), (1.0, 1.0, 3), (0.0, 1.0, 1)]:
        with pytest.raises(ParameterError):
            TimeGrid(*bad)


def test_ladder_state_round_trip():
    s = LadderState.single_photon(4)
    assert s.total_probability() == 1.0
    back = LadderState.from_vector(s.to_vector())
    assert back.n_max == 4 and np.array_equal(back.a, s.a)
    with pytest.raises(ParameterError):
        LadderState(0, np.zeros(1), np.zeros(1))
    with pytest.raises(ParameterError):
        LadderState(2, np.zeros(2), np.zeros(3))


@pytest.mark.parametrize("text, label", [
    ("numeric", "numeric"),
    ("two_scale", "two_scale(2)"),
    ("Single-Scale(1)", "single_scale(1)"),
    ("riccati_renormalized", "riccati_renormalized"),
])
def test_method_tag_parse(text, label):
    assert MethodTag.parse(text).label == label


def test_method_tag_errors():
    with pytest.raises(ParameterError):
        MethodTag.parse("bogus")
    with pytest.raises(ParameterError):
        MethodTag(Method.RWA, 2)
    assert not MethodTag(Method.NUMERIC).is_series
    assert MethodTag(Method.RENORMALIZED).is_series


def test_trajectory_length_checked():
    g = TimeGrid.uniform(1.0, 3)
    with pytest.raises(ParameterError):
        Trajectory(g, np.zeros(2), np.zeros(3), MethodTag(Method.RWA), ModelParams(0, 10))
