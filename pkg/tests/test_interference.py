import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoboundary import interference as itf
from twoboundary.errors import InputError, NoStationaryPointError
from twoboundary.interference import HbtSetup, SlitGeometry

LAMBDA = 500e-9
K_OPT = 2 * math.pi / LAMBDA

# source and detector 1 m either side of the slit plane, 100 um slits, 13 mm apart
DOCUMENTED = SlitGeometry(
    source=(0.0, 1.0), detector=(0.0, -1.0),
    slit_a_center=0.0, slit_b_center=13e-3,
    slit_a_width=100e-6, slit_b_width=100e-6,
    wave_number=K_OPT,
)


def geometry(**kw):
    base = dict(source=(0.0, 1.0), detector=(2.0, -1.0), slit_a_center=1.0, slit_b_center=1.01,
                slit_a_width=1e-3, slit_b_width=1e-3, wave_number=1e4)
    base.update(kw)
    return SlitGeometry(**base)


def random_geometry(rng):
    yo = rng.uniform(0.2, 3.0)
    yd = -rng.uniform(0.2, 3.0)
    xo, xd = rng.uniform(-1, 1, size=2)
    w = rng.uniform(1e-5, 1e-3)
    return SlitGeometry(
        source=(xo, yo), detector=(xd, yd),
        slit_a_center=0.0, slit_b_center=rng.uniform(1e-4, 5e-2),
        slit_a_width=w, slit_b_width=rng.uniform(1e-5, 1e-3),
        wave_number=rng.uniform(1e5, 2e7),
    )


# -- HBT ----------------------------------------------------------------------------

def test_hbt_enhancement_factor_two():
    assert itf.hbt_coincidence(HbtSetup(0.0, "coherent")) == 2.0


def test_hbt_suppression():
    assert itf.hbt_coincidence(HbtSetup(math.pi, "coherent")) == 0.0


def test_hbt_other_modes():
    assert abs(itf.hbt_coincidence(HbtSetup(1.234, "phase_averaged")) - 1.0) < 1e-12
    assert itf.hbt_coincidence(HbtSetup(1.234, "distinguishable")) == 1.0


def test_hbt_bad_mode():
    with pytest.raises(InputError):
        HbtSetup(0.0, "fermionic")


def test_hbt_coherent_matches_amplitude_model():
    for phi in np.linspace(0, 2 * np.pi, 17):
        amp = abs(1 + np.exp(1j * phi)) ** 2 / 2
        assert abs(itf.hbt_coincidence(HbtSetup(phi)) - amp) < 1e-14


def test_hbt_phase_average_monte_carlo():
    rng = np.random.default_rng(2)
    phi = rng.uniform(0, 2 * np.pi, 10**6)
    vals = 1 + np.cos(phi)  # vectorized hbt_coincidence in coherent mode
    assert vals[:5] == pytest.approx([itf.hbt_coincidence(HbtSetup(p)) for p in phi[:5]])
    se = vals.std(ddof=1) / np.sqrt(vals.size)
    assert abs(vals.mean() - 1.0) <= 3 * se


@given(st.floats(min_value=-100, max_value=100, allow_nan=False))
def test_hbt_pair_average_exact(phi):
    assert itf.hbt_pair_average(phi) == 1.0
    direct = 0.5 * (itf.hbt_coincidence(HbtSetup(phi)) + itf.hbt_coincidence(HbtSetup(phi + math.pi)))
    assert abs(direct - 1.0) < 1e-12


# -- splitter -------------------------------------------------------------------------

def test_splitter_examples():
    assert itf.splitter_outputs(0.3, 0.3) == (0.0, 1.0)
    p1, p2 = itf.splitter_outputs(math.pi / 2, 0.0)
    assert abs(p1 - 1) < 1e-15 and abs(p2) < 1e-15
    p1, p2 = itf.splitter_outputs(math.pi / 4, 0.0)
    assert abs(p1 - 0.5) < 1e-15 and abs(p2 - 0.5) < 1e-15


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_splitter_conserves(phi1, phi2):
    assert abs(sum(itf.splitter_outputs(phi1, phi2)) - 1) < 1e-12


# -- geometry ------------------------------------------------------------------------------

def test_geometry_validation():
    with pytest.raises(InputError):
        geometry(source=(0.0, -1.0))
    with pytest.raises(InputError):
        geometry(slit_a_width=0.0)
    with pytest.raises(InputError):
        geometry(wave_number=5.0)


def test_stationary_point_symmetric():
    g = geometry(source=(0.3, 1.0), detector=(0.3, -1.0), slit_a_center=0.3)
    assert itf.stationary_point(g) == 0.3


def test_stationary_point_midpoint():
    assert abs(itf.stationary_point(geometry()) - 1.0) < 1e-12


def test_stationary_point_asymmetric_heights():
    g = geometry(source=(-0.4, 0.5), detector=(1.7, -2.0))
    x = itf.stationary_point(g)
    assert abs(itf.path_length_slope(g, x)) < 1e-11
    # straight line from source to detector crosses y = 0 here
    assert abs(x - (-0.4 + 2.1 * 0.5 / 2.5)) < 1e-12


def test_path_length_slope_is_derivative():
    g = geometry(source=(-0.4, 0.5), detector=(1.7, -2.0))

    def length(x):
        return math.hypot(x + 0.4, 0.5) + math.hypot(x - 1.7, 2.0)

    for x in (-0.3, 0.2, 1.1):
        fd = (length(x + 1e-6) - length(x - 1e-6)) / 2e-6
        assert abs(fd - itf.path_length_slope(g, x)) < 1e-8


# -- amplitudes -------------------------------------------------------------------------------

def test_stationary_slit_amplitude_is_width():
    g = geometry()
    amp = itf.slit_amplitude(g, "A")
    assert abs(amp - g.slit_a_width) < 1e-9 * g.slit_a_width
    assert amp.imag == 0.0


def test_sinc_null():
    w, k = 1e-3, 1e4
    c = 2 * math.pi / (k * w)  # k c w / 2 = pi
    assert abs(itf.sinc_amplitude(k, c, w)) < 1e-18
    assert abs(itf.quadrature_amplitude(k, c, w)) < 1e-12 * w


def test_quadrature_matches_sinc_random():
    rng = np.random.default_rng(31)
    for _ in range(100):
        g = random_geometry(rng)
        q = itf.slit_amplitude(g, "B", "quadrature")
        s = itf.slit_amplitude(g, "B", "sinc")
        assert abs(q - s) <= 1e-9 * abs(s)


def test_detour_ratio_three_half_pi():
    g = geometry(slit_b_center=1.05)
    c = itf.slit_bracket(g, "B")
    k = 3 * math.pi / (c * g.slit_b_width)
    rep = itf.slit_intensities(geometry(slit_b_center=1.05, wave_number=k))
    assert abs(rep.detour_ratio - (2 / (3 * math.pi)) ** 2) < 1e-9
    assert rep.detour_ratio == pytest.approx(0.045, abs=5e-4)


def test_detour_ratio_point_slits():
    ratios = [itf.slit_intensities(geometry(slit_a_width=w, slit_b_width=w)).detour_ratio
              for w in (1e-4, 1e-6, 1e-8)]
    assert abs(ratios[-1] - 1) < 1e-6
    assert ratios[0] < ratios[1] < ratios[2] <= 1 + 1e-12


def test_documented_geometry_detour_suppressed():
    rep = itf.slit_intensities(DOCUMENTED)
    assert rep.stationary_point == 0.0
    assert rep.detour_ratio < 1e-2
    assert rep.intensity_a == pytest.approx(DOCUMENTED.slit_a_width ** 2, rel=1e-9)


def test_detour_envelope_monotone_in_kh():
    base = dict(source=(0.0, 1.0), detector=(0.0, -1.0), slit_a_center=0.0,
                slit_a_width=1e-4, slit_b_width=1e-4, wave_number=K_OPT)
    envelopes = [itf.detour_envelope(SlitGeometry(slit_b_center=h, **base))
                 for h in np.geomspace(1e-5, 1e-1, 40)]
    assert all(b <= a for a, b in zip(envelopes, envelopes[1:]))
    assert envelopes[0] == 1.0 and envelopes[-1] < 1e-4


def test_stationary_point_outside_slit_a():
    with pytest.raises(NoStationaryPointError):
        itf.slit_intensities(geometry(slit_a_center=1.5))


def test_unknown_slit_and_method():
    with pytest.raises(InputError):
        itf.slit_amplitude(geometry(), "C")
    with pytest.raises(InputError):
        itf.slit_amplitude(geometry(), "A", "trapezoid")
