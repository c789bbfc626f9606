import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rwa_rg.core import ModelParams, ParameterError, TimeGrid, TwoTimes, UnsupportedOrderError, map_times
from rwa_rg.integrator import solve_rabi
from rwa_rg import rabi_series as rs
from taylor import taylor_coefficients

SAMPLE_T2 = np.linspace(0.3, 40.0, 20)


def test_rwa_examples():
    assert rs.rwa(0.0).a == 1 and rs.rwa(0.0).b == 0
    q = rs.rwa(math.pi / 2)
    assert abs(q.a) < 1e-16 and q.b == pytest.approx(-1j)
    t = np.linspace(0, 50, 1000)
    amp = rs.rwa(t)
    assert np.max(np.abs(amp.prob_a - np.cos(t) ** 2)) <= 1e-14
    assert np.max(np.abs(amp.prob_a + amp.prob_b - 1)) <= 2.3e-16


def test_single_scale_examples():
    for order in (0, 1, 2):
        s = rs.single_scale(0.0, 0.3, order)
        assert s.a == 1 and s.b == 0
    eps = 0.07
    s = rs.single_scale(2 * math.pi, eps, 2)
    assert s.a == pytest.approx(1 + eps ** 2 * (-2 * math.pi ** 2 - 2j * math.pi), abs=1e-14)
    assert s.b == pytest.approx(-2j * math.pi * eps, abs=1e-14)


def test_single_scale_orders_truncate():
    t = np.linspace(0, 30, 50)
    assert np.all(rs.single_scale(t, 0.1, 0).a == 1)
    s1 = rs.single_scale(t, 0.1, 1)
    assert np.all(s1.a == 1) and np.any(s1.b != 0)
    with pytest.raises(UnsupportedOrderError):
        rs.single_scale(1.0, 0.1, 3)


def test_single_scale_short_time_matches_numeric(oracle):
    ref = oracle["single_scale_short"]
    eps, tau = ref["epsilon"], ref["tau"]
    s = rs.single_scale(tau / eps, eps, 2)
    num = solve_rabi(ModelParams(0.0, 1 / eps), TimeGrid(0.0, tau, 2))
    assert abs(s.prob_a - num.prob_a[-1]) < 5e-3
    # b stops at first order, so |b|**2 is only good to about tau**4 / 3.
    assert abs(s.prob_b - num.prob_b[-1]) <= ref["bound_b"]


@pytest.mark.parametrize("eps", [0.1, 0.02])
def test_single_scale_secular_growth(eps):
    t = np.linspace(0, 20 / eps ** 2, 20001)
    mag = np.abs(rs.single_scale(t, eps, 2).a)
    # Triangle inequality on the -t**2/2 term: |1 - eps**2 + eps**2 e^{it}| <= 1.
    assert np.all(mag >= eps ** 2 * t ** 2 / 2 - eps ** 2 * t - 1 - 1e-9)
    # The cruder "minus three" form holds while eps**2 t stays below two.
    early = t <= 2 / eps ** 2
    assert np.all(mag[early] >= eps ** 2 * t[early] ** 2 / 2 - 3)
    assert mag[-1] > 100


def test_two_scale_terms_at_origin():
    a, b = rs.two_scale_terms(0.0, 0.0)
    assert a == (1, 0, 0) and b[0] == 0 and b[1] == 0 and b[2] == 0
    assert rs.two_scale(TwoTimes(0.0, 0.0), 0.1).a == 1


def test_two_scale_quarter_period():
    eps = 0.13
    a, _ = rs.two_scale_terms(0.0, math.pi / 2)
    val = a[0] + eps * a[1] + eps ** 2 * a[2]
    assert val == pytest.approx(-1j * eps + math.pi / 4 * eps ** 2, abs=1e-15)
    # Consistent times with e^{i t1} = 1: eps = 1/4 puts t1 = 2 pi.
    amp = rs.two_scale(map_times(math.pi / 2, 0.25), 0.25)
    assert amp.a == pytest.approx(-0.25j + math.pi / 4 / 16, abs=1e-14)


def test_two_scale_order_zero_is_rwa():
    tau = np.linspace(0, 100, 500)
    for eps in (0.3, 0.1, 0.01):
        amp = rs.two_scale(map_times(tau, eps), eps, 0)
        ref = rs.rwa(tau)
        assert np.array_equal(amp.a, ref.a) and np.array_equal(amp.b, ref.b)


def test_order_zero_terms_independent_of_t1():
    t2 = np.linspace(0, 10, 30)
    a1, b1 = rs.two_scale_terms(np.zeros_like(t2), t2)
    a2, b2 = rs.two_scale_terms(np.full_like(t2, 123.4), t2)
    assert np.array_equal(a1[0], a2[0]) and np.array_equal(b1[0], b2[0])


def test_two_scale_secular_at_long_times(oracle):
    amp = rs.two_scale(map_times(np.linspace(0, 100, 4001), 0.1), 0.1)
    assert np.max(amp.prob_a) == pytest.approx(oracle["two_scale_growth"]["max_prob"], abs=1e-12)
    assert np.max(amp.prob_a) > 1.3
    amp = rs.two_scale(map_times(np.linspace(0, 150, 6001), 0.1), 0.1)
    assert np.max(amp.prob_a) > 1.5


def test_two_scale_rejects_inconsistent_times():
    with pytest.raises(ParameterError):
        rs.two_scale(TwoTimes(0.0, math.pi / 2), 0.1)
    with pytest.raises(UnsupportedOrderError):
        rs.two_scale(map_times(1.0, 0.1), 0.1, 3)


def test_renorm_group_A_examples():
    for s in (1, -1):
        assert rs.renorm_group_A(s, 0.0, 0.3) == 0.5
        assert abs(rs.renorm_group_A(s, 7.3, 0.3)) == pytest.approx(0.5, abs=1e-16)
    t2 = np.linspace(0, 20, 50)
    total = rs.renorm_group_A(1, t2, 0.0) + rs.renorm_group_A(-1, t2, 0.0)
    assert np.allclose(total, np.cos(t2), atol=1e-15)
    total = rs.renorm_group_A(1, math.pi, 0.1) + rs.renorm_group_A(-1, math.pi, 0.1)
    assert total.real == pytest.approx(-0.9998766324816606, abs=1e-13)
    with pytest.raises(ParameterError):
        rs.renorm_group_A(0, 1.0, 0.1)


def test_renorm_group_A_taylor():
    c = taylor_coefficients(
        lambda e: rs.renorm_group_A(1, SAMPLE_T2, e) + rs.renorm_group_A(-1, SAMPLE_T2, e), 2)
    assert np.max(np.abs(c[0] - np.cos(SAMPLE_T2))) < 1e-12
    assert np.max(np.abs(c[1])) < 1e-12
    assert np.max(np.abs(c[2] - SAMPLE_T2 * np.sin(SAMPLE_T2) / 2)) < 1e-12


def test_renormalized_taylor_matches_two_scale():
    # Below eps**3 the renormalized form and the two-scale series agree term by term.
    t1 = np.linspace(0, 50, 20)
    t2 = SAMPLE_T2
    a_terms, b_terms = rs.two_scale_terms(t1, t2)
    ca = taylor_coefficients(lambda e: rs._renormalized_a(t1, t2, e), 2)
    cb = taylor_coefficients(lambda e: rs._renormalized_b(t1, t2, e), 2)
    for k in range(3):
        assert np.max(np.abs(ca[k] - a_terms[k])) < 1e-10
        assert np.max(np.abs(cb[k] - b_terms[k])) < 1e-10


def test_renormalized_examples():
    amp = rs.renormalized(map_times(0.0, 0.1), 0.1)
    assert amp.a == 1 and amp.b == 0
    amp = rs.renormalized(map_times(math.pi, 0.1), 0.1)
    assert amp.a == pytest.approx(-0.9998766324816606, abs=1e-12)
    z = rs.renormalized(TwoTimes(5.0, 5.0), 0.0)
    assert z.a == np.cos(5.0)


@pytest.mark.parametrize("eps", [0.2, 0.1, 0.05])
def test_renormalized_bounded(eps):
    tau = np.linspace(0, 10 / eps ** 2, 200001)
    mag = np.abs(rs.renormalized(map_times(tau, eps), eps).a)
    assert np.max(mag) <= 1 + eps + 2 * eps ** 2


@pytest.mark.parametrize("eps", [0.1, 0.05, 0.02, 0.01])
def test_renormalized_tends_to_rwa(eps):
    tau = np.linspace(0, 10, 2001)
    a = rs.renormalized(map_times(tau, eps), eps).a
    assert np.max(np.abs(a - np.cos(tau))) <= 2 * eps


def test_renormalized_b_against_numeric(oracle):
    eps = 0.1
    grid = TimeGrid.uniform(5.0)
    num = solve_rabi(ModelParams.from_epsilon(eps), grid)
    amp = rs.renormalized(map_times(grid.times, eps), eps)
    assert np.max(np.abs(amp.prob_b - num.prob_b)) <= oracle["order"]["renormalized_b_bound"]


@given(eps=st.floats(1e-4, 0.4), tau=st.floats(0, 1e3))
def test_renormalized_finite(eps, tau):
    amp = rs.renormalized(map_times(tau, eps), eps)
    assert np.isfinite(amp.a) and np.isfinite(amp.b)
