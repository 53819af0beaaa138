import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoboundary.errors import InputError
from twoboundary.laser import LaserParams, closed_form, lasing_condition, rhs, simulate


def test_rhs_balanced_levels_is_spontaneous_only():
    p = LaserParams(n2=3.0, n1=3.0, w=0.7, kappa=0.0)
    assert rhs(p, 11.0) == pytest.approx(0.7 * 3.0)


def test_rhs_no_photons():
    p = LaserParams(n2=2.5, n1=0.5, w=1.3, kappa=4.0)
    assert rhs(p, 0.0) == 1.3 * 2.5


def test_rhs_hand_value():
    assert rhs(LaserParams(2.0, 1.0, 1.0, 0.25), 4.0) == 4.0


def test_rhs_negative_n():
    with pytest.raises(InputError):
        rhs(LaserParams(1, 0, 1, 0), -1e-3)


def test_params_non_negative():
    with pytest.raises(InputError):
        LaserParams(1.0, -0.1, 1.0, 0.0)


def test_lasing_condition_examples():
    assert lasing_condition(LaserParams(0.1, 5.0, 2.0, 3.0), 0.0)
    assert not lasing_condition(LaserParams(0.0, 0.0, 2.0, 0.0), 7.0)
    p = LaserParams(n2=1.0, n1=2.0, w=1.0, kappa=0.5)  # a = -2, b = 1, fixed point 0.5
    fixed = -p.source / p.growth_rate
    assert lasing_condition(p, 0.9 * fixed)
    assert not lasing_condition(p, 1.1 * fixed)
    assert not lasing_condition(p, 1e6)


def test_simulate_growth_matches_closed_form():
    p = LaserParams(n2=3.0, n1=1.0, w=0.5, kappa=0.2)  # a = 0.6
    s = simulate(p, 2.0, 10.0, 0.01)
    exact = closed_form(p, 2.0, s.times)
    assert abs(s.photon_counts[-1] - exact[-1]) <= 1e-6 * exact[-1]
    assert np.all(np.abs(s.photon_counts - exact) <= 1e-6 * exact)


def test_simulate_decay_reaches_fixed_point():
    p = LaserParams(n2=1.0, n1=3.0, w=1.0, kappa=0.5)  # a = -3, b = 1
    fixed = -p.source / p.growth_rate
    s = simulate(p, 50.0, 20.0, 0.01)
    assert abs(s.photon_counts[-1] - fixed) <= 1e-6 * fixed
    assert abs(s.photon_counts[-1] - closed_form(p, 50.0, 20.0)) <= 1e-9 * fixed


def test_simulate_zero_dynamics_constant():
    p = LaserParams(n2=0.0, n1=0.0, w=1.0, kappa=0.0)
    s = simulate(p, 4.2, 3.0, 0.1)
    assert np.all(s.photon_counts == 4.2)


def test_simulate_linear_when_a_zero():
    p = LaserParams(n2=2.0, n1=1.0, w=1.0, kappa=0.5)  # a = 0, b = 2
    s = simulate(p, 1.0, 5.0, 0.25)
    assert np.allclose(s.photon_counts, 1.0 + 2.0 * s.times, rtol=1e-12)


def test_simulate_shortened_last_step():
    s = simulate(LaserParams(1, 0, 1, 0), 0.0, 1.05, 0.1)
    assert s.times[-1] == 1.05
    assert np.all(np.diff(s.times) > 0)
    assert len(s.times) == 12


@pytest.mark.parametrize("n0,t_end,dt", [(-1.0, 1.0, 0.1), (1.0, 1.0, 0.0), (1.0, 0.05, 0.1)])
def test_simulate_invalid(n0, t_end, dt):
    with pytest.raises(InputError):
        simulate(LaserParams(1, 0, 1, 0), n0, t_end, dt)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0, 5), st.floats(0, 5), st.floats(0, 2), st.floats(0, 2), st.floats(0, 100),
)
def test_simulate_non_negative(n2, n1, w, kappa, n0):
    s = simulate(LaserParams(n2, n1, w, kappa), n0, 5.0, 0.05)
    assert np.all(s.photon_counts >= -1e-9)


def test_fourth_order_convergence():
    p = LaserParams(n2=3.0, n1=1.0, w=0.5, kappa=0.2)
    ends = [simulate(p, 1.0, 4.0, dt).photon_counts[-1] for dt in (0.2, 0.1, 0.05)]
    assert abs(ends[2] - ends[1]) < abs(ends[1] - ends[0]) / 15


def test_lasing_condition_predicts_short_time_sign():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        n2, n1, w, kappa = rng.uniform(0, 3, size=4)
        n0 = rng.uniform(0, 20)
        p = LaserParams(n2, n1, w, kappa)
        s = simulate(p, n0, 1e-4, 1e-4)
        assert lasing_condition(p, n0) == (s.photon_counts[-1] - n0 > 0)
