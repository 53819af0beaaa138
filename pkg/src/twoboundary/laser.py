"""Photon-number rate equation with fixed level occupations.

    dn/dt = (N2 - N1) W n  +  W N2  -  2 kappa n
            stimulated       spontaneous   absorption

Written as dn/dt = a n + b with a = (N2 - N1) W - 2 kappa, b = W N2, which
has the closed-form solution used to check the integrator.

The equation only counts photons.  Coherent forward emission is a
quantum-statistical enhancement that the equation ignores; averaged over
the enhancing and suppressing channels that effect cancels, which is why
counting is enough for the lasing condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

__all__ = ["LaserParams", "PhotonSeries", "rhs", "lasing_condition", "simulate", "closed_form"]


@dataclass(frozen=True)
class LaserParams:
    n2: float
    n1: float
    w: float
    kappa: float

    def __post_init__(self):
        for name in ("n2", "n1", "w", "kappa"):
            if getattr(self, name) < 0:
                raise InputError(f"{name} must be non-negative, got {getattr(self, name)}")

    @property
    def growth_rate(self) -> float:
        return (self.n2 - self.n1) * self.w - 2.0 * self.kappa

    @property
    def source(self) -> float:
        return self.w * self.n2


@dataclass(frozen=True)
class PhotonSeries:
    times: np.ndarray
    photon_counts: np.ndarray


def rhs(params: LaserParams, n: float) -> float:
    if n < 0:
        raise InputError(f"photon number must be non-negative, got {n}")
    return (params.n2 - params.n1) * params.w * n + params.w * params.n2 - 2.0 * params.kappa * n


def lasing_condition(params: LaserParams, n: float) -> bool:
    """True when the photon number is still growing at `n`."""
    return rhs(params, n) > 0.0


def closed_form(params: LaserParams, n0: float, t):
    a, b = params.growth_rate, params.source
    t = np.asarray(t, dtype=float)
    if a == 0.0:
        return n0 + b * t
    return (n0 + b / a) * np.exp(a * t) - b / a


def simulate(params: LaserParams, n0: float, t_end: float, dt: float) -> PhotonSeries:
    """Classical fixed-step RK4.  The last step is shortened to land on t_end."""
    if n0 < 0:
        raise InputError(f"n0 must be non-negative, got {n0}")
    if not dt > 0 or not t_end >= dt:
        raise InputError(f"need dt > 0 and t_end >= dt, got dt={dt}, t_end={t_end}")
    steps = math.ceil(t_end / dt - 1e-9)
    a, b = params.growth_rate, params.source

    # a n + b is rhs() without the sign check; RK4 stages may dip slightly
    # below zero when n sits at the origin with b = 0.
    def f(n):
        return a * n + b

    times = np.empty(steps + 1)
    ns = np.empty(steps + 1)
    times[0], ns[0] = 0.0, n0
    n = n0
    for i in range(1, steps + 1):
        h = dt if i < steps else t_end - (steps - 1) * dt
        k1 = f(n)
        k2 = f(n + 0.5 * h * k1)
        k3 = f(n + 0.5 * h * k2)
        k4 = f(n + h * k3)
        n = n + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        times[i] = times[i - 1] + h
        ns[i] = n
    times[-1] = t_end
    return PhotonSeries(times, ns)
