# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Radial profile of the bowl soliton.

A rotationally symmetric translating graph u(x) = U(|x|) over R^n satisfies

    U''/(1 + U'^2) + (n - 1) U'/r = -1,    U(0) = U'(0) = 0,

whose removable singularity at r = 0 is stepped over with the two-term series
U = -r^2/(2n) - r^4/(4 n^3 (n + 2)).
"""

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Tuple

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from translator_lab.exceptions import ConfigurationError, DomainError, NumericalAccuracyError
from translator_lab.logging import logger


def _rhs(n: int, r: float, state: np.ndarray) -> np.ndarray:
    slope = state[1]
    return np.array([slope, -(1.0 + slope * slope) * (1.0 + (n - 1) * slope / r)])


def _rk4_step(n: int, r: float, state: np.ndarray, dr: float) -> np.ndarray:
    k1 = _rhs(n, r, state)
    k2 = _rhs(n, r + dr / 2, state + dr / 2 * k1)
    k3 = _rhs(n, r + dr / 2, state + dr / 2 * k2)
    k4 = _rhs(n, r + dr, state + dr * k3)
    return state + dr / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def series_start(n: int, r: float) -> np.ndarray:
    """(U(r), U'(r)) from the two-term expansion at the apex."""
    quartic = -1.0 / (4.0 * n**3 * (n + 2))
    return np.array([-(r**2) / (2 * n) + quartic * r**4, -r / n + 4 * quartic * r**3])


def profile_curvature(n: int, radii: np.ndarray, slopes: np.ndarray) -> np.ndarray:
    """U'' from the radial equation, with the apex limit -1/n at r = 0."""
    radii = np.asarray(radii, dtype=float)
    slopes = np.asarray(slopes, dtype=float)
    safe_r = np.where(radii > 0, radii, 1.0)
    curvature = -(1.0 + slopes**2) * (1.0 + (n - 1) * slopes / safe_r)
    return np.where(radii > 0, curvature, -1.0 / n)


@dataclass(frozen=True, eq=False)
class BowlProfile:
    """Samples of the bowl's radial profile on a uniform radial grid starting at r = 0."""

    n: int
    dr: float
    radii: np.ndarray
    values: np.ndarray
    slopes: np.ndarray

    @property
    def r_max(self) -> float:
        return float(self.radii[-1])

    @cached_property
    def _value_spline(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.radii, self.values, self.slopes)

    @cached_property
    def _slope_spline(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.radii, self.slopes, profile_curvature(self.n, self.radii, self.slopes))

    def _check(self, r: np.ndarray) -> None:
        if np.any(r < 0) or np.any(r > self.r_max * (1 + 1e-12)):
            raise DomainError(f"Bowl profile is only available on 0 <= r <= {self.r_max:.6g}.")

    def value(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        self._check(r)
        return self._value_spline(r)

    def slope(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        self._check(r)
        return self._slope_spline(r)

    def curvature(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return profile_curvature(self.n, r, self.slope(r))

    def apex_second_derivative(self) -> float:
        """U''(0) fitted from the first two samples with U = c2 r^2 + c4 r^4."""
        d = self.dr
        return float(2.0 * (16.0 * self.values[1] - self.values[2]) / (12.0 * d * d))


def bowl_profile(n: int, r_max: float, dr: float = 1e-3, tolerance: float = 1e-9) -> BowlProfile:
    """
    Integrates the bowl's radial profile with classical fourth-order Runge-Kutta steps.

    Each step is checked by step doubling; the accepted state is the locally extrapolated
    two-half-step result.

    Raises:
        ConfigurationError: for n outside {1, 2, 3} or non-positive r_max / dr.
        NumericalAccuracyError: when a step misses ``tolerance`` or the profile loses monotonicity.
    """
    if n not in (1, 2, 3):
        raise ConfigurationError(f"Bowl dimension must be 1, 2 or 3, got {n}.")
    if r_max <= 0 or dr <= 0:
        raise ConfigurationError(f"r_max and dr must be positive, got r_max={r_max}, dr={dr}.")
    if n == 1 and r_max >= math.pi / 2:
        raise ConfigurationError("The one-dimensional profile (the grim reaper) only exists for r < pi/2.")

    steps = int(math.ceil(r_max / dr - 1e-9))
    radii = dr * np.arange(steps + 1)
    states = np.zeros((steps + 1, 2))

    epsilon = dr / 10.0
    r = epsilon
    state = series_start(n, epsilon)
    for j in range(1, steps + 1):
        target = radii[j]
        step = target - r
        full = _rk4_step(n, r, state, step)
        half = _rk4_step(n, r + step / 2, _rk4_step(n, r, state, step / 2), step / 2)
        error = np.max(np.abs(half - full)) / 15.0
        if error > tolerance * (1.0 + np.max(np.abs(half))):
            raise NumericalAccuracyError(
                f"Bowl integration step {step:.3g} at r={r:.4g} has local error {error:.3g}; reduce dr."
            )
        state = half + (half - full) / 15.0
        states[j] = state
        r = target

    profile = BowlProfile(n=n, dr=dr, radii=radii, values=states[:, 0], slopes=states[:, 1])
    if np.any(np.diff(profile.values) >= 0) or np.any(np.diff(np.abs(profile.slopes)) <= 0):
        raise NumericalAccuracyError("Integrated bowl profile is not strictly monotone; reduce dr.")
    logger.debug(f"Bowl profile n={n} integrated to r={profile.r_max:.4g} in {steps} steps.")
    return profile


@lru_cache(maxsize=16)
def cached_bowl_profile(n: int, r_max: float, dr: float) -> BowlProfile:
    return bowl_profile(n, r_max, dr)


def bowl_barrier(n: int, radius: float, dr: float = 1e-2) -> Tuple[BowlProfile, float]:
    """Profile and vertical offset making the bowl translate vanish on the sphere of the given radius."""
    profile = cached_bowl_profile(n, float(radius), float(dr))
    return profile, -float(profile.value(profile.r_max))
