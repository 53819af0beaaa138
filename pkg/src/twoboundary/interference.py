"""Quantum-statistical interference: HBT pairs, beam splitter, bad double slit.

The double-slit part works with the linearized stationary-phase exponent.
Across a slit the optical path length is expanded to first order in the
offset Delta from a reference point x~; the amplitude of that slit is then
``integral exp(i k c Delta) dDelta`` over the slit width, where ``c`` is the
first-order coefficient.  The reference point of slit A is the stationary
point (c = 0); slit B sits a distance h away and picks up the coefficient
``h / r_o + h / r_d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import simpson

from .errors import ComputationError, InputError, NoStationaryPointError

__all__ = [
    "HbtMode",
    "HbtSetup",
    "SlitGeometry",
    "IntensityReport",
    "hbt_coincidence",
    "hbt_interference_term",
    "hbt_pair_average",
    "splitter_outputs",
    "stationary_point",
    "path_length_slope",
    "slit_bracket",
    "detour_envelope",
    "sinc_amplitude",
    "quadrature_amplitude",
    "slit_amplitude",
    "slit_intensities",
]


class HbtMode(str, Enum):
    COHERENT = "coherent"
    PHASE_AVERAGED = "phase_averaged"
    DISTINGUISHABLE = "distinguishable"


@dataclass(frozen=True)
class HbtSetup:
    phase_difference: float = 0.0
    mode: HbtMode = HbtMode.COHERENT

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", HbtMode(self.mode))
        except ValueError:
            raise InputError(
                f"HBT mode must be one of {[m.value for m in HbtMode]}, got {self.mode!r}"
            ) from None


def hbt_interference_term(phase_difference: float) -> float:
    """Cross term Re(e^{i phi}) of two unit amplitudes, normalized per photon pair."""
    return math.cos(phase_difference)


def hbt_coincidence(setup: HbtSetup) -> float:
    """Two-photon emission rate relative to independent (distinguishable) emitters.

    Coherent: |1 + e^{i phi}|^2 / 2 = 1 + cos(phi), between 0 (suppression)
    and 2 (enhancement).  The phase average of the cross term over a uniform
    phase is zero, which is why the phase-averaged rate is 1.
    """
    if setup.mode is HbtMode.COHERENT:
        return 1.0 + hbt_interference_term(setup.phase_difference)
    return 1.0


def hbt_pair_average(phase_difference: float) -> float:
    """Mean coherent rate over the partner phases phi and phi + pi.

    Shifting the phase by pi negates the phasor, so the two cross terms
    cancel identically.
    """
    z = complex(math.cos(phase_difference), math.sin(phase_difference))
    partner = -z
    return 1.0 + 0.5 * (z.real + partner.real)


def splitter_outputs(phi1: float, phi2: float) -> tuple[float, float]:
    """Output probabilities (suppressed port, enhanced port) of a 50/50 joining."""
    d = phi1 - phi2
    return math.sin(d) ** 2, math.cos(d) ** 2


# ---------------------------------------------------------------------------
# Double slit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlitGeometry:
    source: tuple[float, float]
    detector: tuple[float, float]
    slit_a_center: float
    slit_b_center: float
    slit_a_width: float
    slit_b_width: float
    wave_number: float

    def __post_init__(self):
        (xo, yo), (xd, yd) = self.source, self.detector
        if not yo > 0.0 or not yd < 0.0:
            raise InputError("source needs y_o > 0 and detector y_d < 0")
        if self.slit_a_width <= 0.0 or self.slit_b_width <= 0.0:
            raise InputError("slit widths must be positive")
        if self.wave_number <= 0.0:
            raise InputError("wave number must be positive")
        if self.wave_number * min(yo, -yd) <= 10.0:
            raise InputError("geometry is not in the short-wavelength regime (k * min distance <= 10)")

    @property
    def separation(self) -> float:
        return self.slit_b_center - self.slit_a_center

    def width(self, slit: str) -> float:
        return {"A": self.slit_a_width, "B": self.slit_b_width}[_slit_name(slit)]

    def center(self, slit: str) -> float:
        return {"A": self.slit_a_center, "B": self.slit_b_center}[_slit_name(slit)]


@dataclass(frozen=True)
class IntensityReport:
    amp_a: complex
    amp_b: complex
    stationary_point: float
    bracket_b: float

    @property
    def intensity_a(self) -> float:
        return abs(self.amp_a) ** 2

    @property
    def intensity_b(self) -> float:
        return abs(self.amp_b) ** 2

    @property
    def detour_ratio(self) -> float:
        return self.intensity_b / self.intensity_a


def _slit_name(slit: str) -> str:
    s = str(slit).upper()
    if s not in ("A", "B"):
        raise InputError(f"slit must be 'A' or 'B', got {slit!r}")
    return s


def path_length_slope(geometry: SlitGeometry, x: float) -> float:
    """d/dx of |source - (x, 0)| + |(x, 0) - detector|."""
    (xo, yo), (xd, yd) = geometry.source, geometry.detector
    return (x - xo) / math.hypot(x - xo, yo) + (x - xd) / math.hypot(x - xd, yd)


def stationary_point(geometry: SlitGeometry, tol: float = 1e-12) -> float:
    """Slit-plane crossing of the stationary (straight) ray, by bisection."""
    xo, xd = geometry.source[0], geometry.detector[0]
    lo, hi = min(xo, xd), max(xo, xd)
    if lo == hi:
        return lo
    f_lo = path_length_slope(geometry, lo)
    f_hi = path_length_slope(geometry, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise NoStationaryPointError(
            f"no sign change of the path-length slope on [{lo}, {hi}]"
        )
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = path_length_slope(geometry, mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def slit_bracket(geometry: SlitGeometry, slit: str) -> float:
    """First-order phase coefficient c of the given slit."""
    if _slit_name(slit) == "A":
        return 0.0
    (xo, yo), (xd, yd) = geometry.source, geometry.detector
    h = geometry.separation
    xb = stationary_point(geometry) + h
    return h / math.hypot(xo - xb, yo) + h / math.hypot(xb - xd, yd)


def sinc_amplitude(k: float, c: float, width: float) -> complex:
    """Closed form of integral_{-w/2}^{w/2} exp(i k c D) dD = w sin(u)/u, u = k c w / 2."""
    return complex(width * np.sinc(k * c * width / (2.0 * math.pi)))


def quadrature_amplitude(k: float, c: float, width: float, nodes: int = 1001,
                         tol: float = 1e-10, max_nodes: int = 1 << 24) -> complex:
    """Composite Simpson over the slit, doubling the panel count until two
    successive estimates agree within `tol` relative to the estimate.

    The relative test is floored at ``1e-3 * width`` so that amplitudes
    sitting on a sinc null still terminate.
    """
    def estimate(n):
        d = np.linspace(-0.5 * width, 0.5 * width, n)
        phase = k * c * d
        return complex(simpson(np.cos(phase), x=d), simpson(np.sin(phase), x=d))

    n = nodes if nodes % 2 else nodes + 1
    prev = estimate(n)
    while True:
        n = 2 * n - 1
        cur = estimate(n)
        if abs(cur - prev) <= tol * max(abs(cur), 1e-3 * width):
            return cur
        if n > max_nodes:
            raise ComputationError(f"Simpson quadrature did not converge with {n} nodes")
        prev = cur


def detour_envelope(geometry: SlitGeometry) -> float:
    """Upper envelope 1 / u^2 of the detour ratio sinc^2(u), u = k c_B w_B / 2 (capped at 1)."""
    u = geometry.wave_number * slit_bracket(geometry, "B") * geometry.slit_b_width / 2.0
    return 1.0 if abs(u) <= 1.0 else 1.0 / (u * u)


def slit_amplitude(geometry: SlitGeometry, slit: str, method: str = "quadrature") -> complex:
    c = slit_bracket(geometry, slit)
    w = geometry.width(slit)
    if method == "quadrature":
        return quadrature_amplitude(geometry.wave_number, c, w)
    if method == "sinc":
        return sinc_amplitude(geometry.wave_number, c, w)
    raise InputError(f"unknown amplitude method {method!r}")


def slit_intensities(geometry: SlitGeometry, method: str = "quadrature") -> IntensityReport:
    """Dominant- and detour-path intensities, with the A-B cross term dropped."""
    x_star = stationary_point(geometry)
    half = 0.5 * geometry.slit_a_width
    if not geometry.slit_a_center - half <= x_star <= geometry.slit_a_center + half:
        raise NoStationaryPointError(
            f"stationary point {x_star:.6g} is not inside slit A "
            f"[{geometry.slit_a_center - half:.6g}, {geometry.slit_a_center + half:.6g}]"
        )
    return IntensityReport(
        amp_a=slit_amplitude(geometry, "A", method),
        amp_b=slit_amplitude(geometry, "B", method),
        stationary_point=x_star,
        bracket_b=slit_bracket(geometry, "B"),
    )
