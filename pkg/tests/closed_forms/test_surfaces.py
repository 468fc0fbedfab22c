# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from translator_lab.closed_forms.surfaces import (
    Bowl,
    GrimReaper,
    GrimReaperArc,
    Plane,
    TiltedGrimReaper,
    parse_surface,
)
from translator_lab.exceptions import ConfigurationError, DomainError


def test_grim_reaper_eval():
    """Tests the grim reaper value, gradient and Hessian at a point."""
    value, grad, hess = GrimReaper().eval([0.7, 0.3])
    assert value == pytest.approx(math.log(math.cos(0.3)))
    np.testing.assert_allclose(grad, [0.0, -math.tan(0.3)])
    np.testing.assert_allclose(hess, [[0.0, 0.0], [0.0, -1.0 / math.cos(0.3) ** 2]])


def test_tilted_grim_reaper_value():
    """Tests the tilted grim reaper value at (2, 1) with theta = pi/4."""
    c = math.cos(math.pi / 4)
    value, grad, _ = TiltedGrimReaper(theta=math.pi / 4).eval([2.0, 1.0])
    assert value == pytest.approx(2.0 + math.log(math.cos(c)) / c**2)
    assert value == pytest.approx(1.4518, abs=1e-3)
    assert grad[0] == pytest.approx(1.0)


def test_tilted_from_half_width():
    """Tests that from_half_width inverts half_width and rejects narrow strips."""
    surface = TiltedGrimReaper.from_half_width(math.pi)
    assert surface.theta == pytest.approx(math.pi / 3)
    assert surface.half_width == pytest.approx(math.pi)
    with pytest.raises(DomainError, match="half width"):
        TiltedGrimReaper.from_half_width(1.0)


def test_tilted_is_two_dimensional_only():
    """Tests that the tilted family rejects points of the wrong dimension."""
    with pytest.raises(DomainError, match="not defined on R\\^3"):
        TiltedGrimReaper(theta=0.2).values(np.zeros((1, 3)))


def test_tilted_rejects_vertical_angle():
    """Tests that |theta| >= pi/2 is invalid."""
    with pytest.raises(ValidationError, match="Tilt angle"):
        TiltedGrimReaper(theta=2.0)


def test_values_outside_natural_domain_raise():
    """Tests that points outside the strip are domain errors."""
    with pytest.raises(DomainError, match="outside the natural domain"):
        GrimReaper().values(np.array([[0.0, 0.2], [0.0, 2.0]]))


def test_arc_vanishes_at_its_ends():
    """Tests that the arc is zero at |y| = b and peaks at the apex height."""
    arc = GrimReaperArc(b=1.0)
    values = arc.values(np.array([[0.0, -1.0], [3.0, 0.0], [0.0, 1.0]]))
    np.testing.assert_allclose(values, [0.0, arc.apex_height, 0.0], atol=1e-15)
    assert arc.apex_height == pytest.approx(-math.log(math.cos(1.0)))
    with pytest.raises(ValidationError):
        GrimReaperArc(b=2.0)


def test_plane_values_and_slope_dimension():
    """Tests the plane values and the slope length check."""
    plane = Plane(height=1.0, slope=(0.5, -1.0))
    np.testing.assert_allclose(plane.values(np.array([[2.0, 1.0]])), [1.0])
    np.testing.assert_allclose(plane.hessians(np.zeros((1, 2))), np.zeros((1, 2, 2)))
    with pytest.raises(DomainError, match="slope has 2 entries"):
        plane.values(np.zeros((1, 3)))


def test_bowl_apex_hessian():
    """Tests that the bowl's Hessian at the apex is -I/n."""
    value, grad, hess = Bowl(n=2, r_max=2.0).eval([0.0, 0.0])
    assert value == 0.0
    np.testing.assert_allclose(grad, [0.0, 0.0])
    np.testing.assert_allclose(hess, -np.eye(2) / 2)


def test_bowl_dimension_and_radius_checks():
    """Tests that bowl evaluation needs the bowl dimension and r <= r_max."""
    bowl = Bowl(n=2, r_max=2.0)
    with pytest.raises(DomainError, match="not defined on R\\^3"):
        bowl.values(np.zeros((1, 3)))
    with pytest.raises(DomainError):
        bowl.values(np.array([[3.0, 0.0]]))


@settings(max_examples=30, deadline=None)
@given(
    theta=st.floats(min_value=-1.2, max_value=1.2),
    x=st.floats(min_value=-3.0, max_value=3.0),
    t=st.floats(min_value=-0.9, max_value=0.9),
)
def test_tilted_gradient_matches_differences(theta, x, t):
    """Tests that the tilted gradient agrees with central differences of its values."""
    surface = TiltedGrimReaper(theta=theta)
    y = t * surface.half_width
    eps = 1e-6
    _, grad, _ = surface.eval([x, y])
    dx = (surface.values(np.array([[x + eps, y]])) - surface.values(np.array([[x - eps, y]]))) / (2 * eps)
    dy = (surface.values(np.array([[x, y + eps]])) - surface.values(np.array([[x, y - eps]]))) / (2 * eps)
    assert dx[0] == pytest.approx(grad[0], rel=1e-5, abs=1e-5)
    assert dy[0] == pytest.approx(grad[1], rel=1e-4, abs=1e-4)


def test_parse_surface():
    """Tests that surfaces are parsed by family and bad input is a configuration error."""
    assert isinstance(parse_surface({"family": "tilted", "theta": 0.5}), TiltedGrimReaper)
    assert isinstance(parse_surface({"family": "grim_reaper"}), GrimReaper)
    with pytest.raises(ConfigurationError, match="Invalid closed-form surface"):
        parse_surface({"family": "catenoid"})
    with pytest.raises(ConfigurationError):
        parse_surface({"family": "arc", "b": 3.0})
