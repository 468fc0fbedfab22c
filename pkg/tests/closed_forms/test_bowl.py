# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import math

import numpy as np
import pytest

from translator_lab.closed_forms.bowl import bowl_barrier, bowl_profile, profile_curvature, series_start
from translator_lab.exceptions import ConfigurationError, DomainError


def test_one_dimensional_profile_is_the_grim_reaper():
    """Tests that the n = 1 profile matches log cos r on r <= 1.4."""
    profile = bowl_profile(1, 1.45)
    keep = profile.radii <= 1.4
    np.testing.assert_allclose(profile.values[keep], np.log(np.cos(profile.radii[keep])), atol=1e-8)
    np.testing.assert_allclose(profile.slopes[keep], -np.tan(profile.radii[keep]), atol=1e-7)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_apex_second_derivative(n):
    """Tests that U''(0) = -1/n to 1e-6."""
    profile = bowl_profile(n, 1.0)
    assert profile.apex_second_derivative() == pytest.approx(-1.0 / n, abs=1e-6)
    assert profile.curvature(0.0) == pytest.approx(-1.0 / n)


def test_profile_is_strictly_decreasing():
    """Tests that the two-dimensional profile decreases with growing slope magnitude."""
    profile = bowl_profile(2, 5.0, dr=1e-2)
    assert np.all(np.diff(profile.values) < 0)
    assert np.all(np.diff(np.abs(profile.slopes)) > 0)
    assert profile.r_max == pytest.approx(5.0)


def test_profile_slope_matches_value_differences():
    """Tests that the interpolated slope is the derivative of the interpolated value."""
    profile = bowl_profile(2, 3.0)
    r = np.array([0.5, 1.0, 2.0, 2.9])
    eps = 1e-5
    differences = (profile.value(r + eps) - profile.value(r - eps)) / (2 * eps)
    np.testing.assert_allclose(differences, profile.slope(r), atol=1e-6)


def test_series_start_and_curvature_limit():
    """Tests the apex expansion and the r = 0 limit of the curvature."""
    value, slope = series_start(2, 0.0)
    assert value == 0.0 and slope == 0.0
    np.testing.assert_allclose(profile_curvature(3, np.array([0.0]), np.array([0.0])), [-1.0 / 3])


def test_profile_rejects_radii_outside_range():
    """Tests that evaluating past r_max is a domain error."""
    profile = bowl_profile(2, 1.0)
    with pytest.raises(DomainError, match="only available"):
        profile.value(1.5)
    with pytest.raises(DomainError):
        profile.slope(-0.1)


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"n": 4, "r_max": 1.0}, "must be 1, 2 or 3"),
        ({"n": 2, "r_max": -1.0}, "must be positive"),
        ({"n": 1, "r_max": 2.0}, "only exists for r < pi/2"),
    ],
)
def test_profile_configuration_errors(kwargs, message):
    """Tests that invalid profile requests are configuration errors."""
    with pytest.raises(ConfigurationError, match=message):
        bowl_profile(**kwargs)


def test_bowl_barrier_vanishes_on_the_sphere():
    """Tests that the barrier offset makes the bowl vanish at the given radius."""
    profile, offset = bowl_barrier(2, 3.0)
    assert profile.value(3.0) + offset == pytest.approx(0.0, abs=1e-12)
    assert offset > 0
    assert bowl_barrier(1, 1.0)[1] == pytest.approx(-math.log(math.cos(1.0)), abs=1e-7)
