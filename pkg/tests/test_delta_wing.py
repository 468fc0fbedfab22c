# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import math
from unittest.mock import patch

import numpy as np
import pytest

from translator_lab.delta_wing import (
    DeltaWing,
    asymptotic_slope_check,
    construct,
    continuity_in_b,
    convexity_check,
    gauss_image_bounds,
    spine_comparison,
    tilt_angle,
)
from translator_lab.exceptions import ConfigurationError, DomainError, ScheduleTooShortError, UsageError
from translator_lab.grid.domains import RectangleDomain, build_domain
from translator_lab.grid.fields import ScalarField
from translator_lab.pde.models import SolveReport


def _rectangle_field(L, b, h, function):
    domain = RectangleDomain(L=L, b=b)
    return ScalarField.sample(build_domain(domain, domain.default_grid(h)), function)


def _report(field):
    return SolveReport(
        descriptor=field.mask.descriptor.model_dump(),
        grid_shape=field.grid.shape,
        spacing=field.grid.spacing,
        symmetry=(True, True),
        n_unknowns=field.mask.interior_count,
        linear_solver="spsolve",
        converged=True,
    )


def _fake_solver(profile):
    """A stand-in for the rectangle solve returning ``profile(L)`` sampled on the L-rectangle."""

    def solve(L, b, h, previous, settings, cache):
        field = _rectangle_field(L, b, h, profile(L))
        return field, _report(field), previous is not None

    return solve


def _converged_profile(L):
    return lambda p: 3.0 * L - 0.1 * p[:, 0] ** 2 - 0.4 * p[:, 1] ** 2


def test_tilt_angle():
    """Tests the asymptotic tilt arccos(pi / 2b)."""
    assert tilt_angle(math.pi) == pytest.approx(math.pi / 3)
    assert tilt_angle(math.pi / 2) == 0.0
    with pytest.raises(DomainError, match="pi/2"):
        tilt_angle(1.0)


def test_construct_rejects_narrow_strips():
    """Tests that b <= pi/2 + 1e-3 is a domain error."""
    with pytest.raises(DomainError, match="Delta-wings need"):
        construct(math.pi / 2 + 5e-4, 0.25)


@pytest.mark.parametrize("schedule", [(10.0,), (20.0, 10.0), (0.0, 10.0)])
def test_construct_rejects_bad_schedules(schedule):
    """Tests that the L-schedule must be positive, increasing and have two lengths."""
    with pytest.raises(ConfigurationError, match="L-schedule"):
        construct(2.0, 0.25, schedule)


def test_construct_normalizes_and_certifies():
    """Tests that converged normalized solves give a wing with its apex data and tilt."""
    with patch("translator_lab.delta_wing._solve_length", side_effect=_fake_solver(_converged_profile)):
        wing = construct(2.0, 0.25, (2.0, 3.0))
    assert isinstance(wing, DeltaWing)
    assert wing.apex_heights == pytest.approx((6.0, 9.0))
    assert wing.cauchy_gaps[0] == pytest.approx(0.0, abs=1e-12)
    assert wing.field.values[wing.field.grid.center_index] == 0.0
    assert wing.warm_started == (False, True)
    assert wing.L_max == 3.0
    assert wing.apex.axis_curvatures == pytest.approx((0.2, 0.8), abs=1e-10)
    assert wing.k == pytest.approx(0.2, abs=1e-10)
    assert wing.tilt == pytest.approx(math.atan(0.45), abs=1e-10)
    assert len(wing.reports) == 2


def test_construct_reports_a_short_schedule():
    """Tests that normalized solves that keep changing raise ScheduleTooShortError."""

    def drifting(L):
        return lambda p: L * (1.0 - 0.1 * p[:, 0] ** 2 - 0.4 * p[:, 1] ** 2)

    with patch("translator_lab.delta_wing._solve_length", side_effect=_fake_solver(drifting)):
        with pytest.raises(ScheduleTooShortError, match="differ by") as excinfo:
            construct(2.0, 0.25, (2.0, 3.0), tolerance=1e-3)
    assert excinfo.value.gap > 1e-3
    assert excinfo.value.tolerance == 1e-3


def test_wing_window_and_short_slope_check():
    """Tests the trusted window and that slope extraction needs L_max >= 10 b."""
    with patch("translator_lab.delta_wing._solve_length", side_effect=_fake_solver(_converged_profile)):
        wing = construct(2.0, 0.25, (2.0, 3.0))
    x = wing.field.grid.coordinates()[0]
    window = wing.window()
    assert np.all(np.abs(x[window]) <= 2.25)
    assert not np.any(window & ~wing.field.mask.core(2))
    with pytest.raises(UsageError, match="L_max >= 10 b"):
        asymptotic_slope_check(wing)


def test_asymptotic_slope_check_on_a_ruled_profile():
    """Tests the slope check on a profile whose centerline slope reaches -tan(theta)."""
    b = 2.0
    tan_theta = math.tan(tilt_angle(b))

    def ruled(L):
        return lambda p: 100.0 - tan_theta * np.sqrt(1.0 + p[:, 0] ** 2) - 0.4 * p[:, 1] ** 2

    with patch("translator_lab.delta_wing._solve_length", side_effect=_fake_solver(ruled)):
        wing = construct(b, 0.25, (10.0, 20.0))
    check = asymptotic_slope_check(wing)
    assert check.stations == (10.0, 15.0)
    assert check.monotone
    assert check.relative_error < 0.01
    assert check.reflection_gap == pytest.approx(0.0, abs=1e-9)
    assert check.passed
    assert check.expected == pytest.approx(tan_theta)


def test_convexity_check_on_fields():
    """Tests the convex fraction on a paraboloid and a saddle."""
    bowl = _rectangle_field(1.0, 1.0, 0.125, lambda p: -(p[:, 0] ** 2) - p[:, 1] ** 2)
    saddle = _rectangle_field(1.0, 1.0, 0.125, lambda p: p[:, 0] ** 2 - p[:, 1] ** 2)
    convex = convexity_check(bowl)
    assert convex.passed
    assert convex.fraction == 1.0
    assert convex.counted == bowl.mask.core(2).sum()
    assert convexity_check(saddle).fraction == 0.0


def test_gauss_image_bounds_on_fields():
    """Tests the slope bound on a plain field, which needs an explicit tan(theta)."""
    field = _rectangle_field(1.0, 1.0, 0.125, lambda p: -0.5 * p[:, 0] ** 2)
    with pytest.raises(UsageError, match="needs tan_theta"):
        gauss_image_bounds(field)
    inside = gauss_image_bounds(field, tan_theta=1.0)
    assert inside.max_abs_slope == pytest.approx(0.625)
    assert inside.passed
    outside = gauss_image_bounds(field, tan_theta=0.5)
    assert not outside.bounded


def test_spine_comparison_shortcuts():
    """Tests equal widths as degenerate and reversed widths as a configuration error."""
    equal = spine_comparison(2.0, 2.0, 0.25)
    assert equal.degenerate
    assert equal.passed
    with pytest.raises(ConfigurationError, match="b_small <= b_large"):
        spine_comparison(3.0, 2.0, 0.25)


def test_continuity_in_b_shortcuts():
    """Tests that delta = 0 gives a zero gap and b - delta <= pi/2 is rejected."""
    result = continuity_in_b(2.0, 0.0, 0.25, (10.0, 20.0))
    assert result.gap == 0.0
    assert result.window == (5.0, 1.0)
    with pytest.raises(DomainError, match="b - delta > pi/2"):
        continuity_in_b(2.0, 0.5, 0.25)


def test_continuity_in_b_interpolates_between_grids():
    """Tests the b-continuity gap of two identical profiles sampled on different strips."""
    with patch("translator_lab.delta_wing._solve_length", side_effect=_fake_solver(_converged_profile)):
        result = continuity_in_b(2.0, 0.1, 0.25, (2.0, 3.0))
    # the narrower strip has a finer y spacing; only linear interpolation error in y remains
    assert 0.0 <= result.gap <= 0.4 * 0.25**2 / 4 + 1e-12
    assert result.window == (1.0, pytest.approx(0.95))


def test_gauss_image_of_a_wing_uses_its_measured_tilt():
    """Tests that a wing's slope bound comes from its measured tilt, reported next to the asymptotic one."""
    with patch("translator_lab.delta_wing._solve_length", side_effect=_fake_solver(_converged_profile)):
        wing = construct(2.0, 0.25, (2.0, 3.0))
    check = gauss_image_bounds(wing)
    expected = math.tan(tilt_angle(2.0))
    assert check.tan_theta == pytest.approx(0.45)
    assert check.bound == pytest.approx(1.02 * 0.45)
    assert check.max_abs_slope == pytest.approx(0.45)
    assert check.passed
    assert check.expected_tan_theta == pytest.approx(expected)
    assert check.tilt_error == pytest.approx((expected - 0.45) / expected)


@pytest.mark.slow
def test_wing_from_rectangle_solves():
    """Tests a coarse wing on the default schedule: certified gap, trace near -1 and the asymptotic tilt."""
    b = 2.0
    wing = construct(b, 1 / 8)
    assert wing.L_schedule == (20.0, 40.0)
    assert wing.cauchy_gaps[-1] <= 1e-3
    assert wing.field.values[wing.field.grid.center_index] == 0.0
    assert wing.apex.trace_ok(0.05)
    assert 0.0 < wing.k < 0.5
    assert wing.tilt == pytest.approx(tilt_angle(b), rel=0.05)
    assert asymptotic_slope_check(wing).passed
    image = gauss_image_bounds(wing)
    assert image.passed
    assert image.tilt_error <= 0.05


@pytest.mark.slow
def test_wing_of_width_sqrt2_pi_is_tilted_by_a_quarter_turn():
    """Tests the wing of half width sqrt(2) pi / 2: unit far slope, split apex curvatures and convexity."""
    wing = construct(math.sqrt(2) * math.pi / 2, 1 / 32, (20.0, 40.0))
    slope = asymptotic_slope_check(wing)
    assert slope.stations == (20.0, 30.0)
    assert slope.expected == pytest.approx(1.0)
    assert slope.relative_error <= 0.05
    assert slope.reflection_gap <= 1e-8
    assert 0.0 < wing.k < 0.5
    assert wing.apex.max_off_diagonal <= 1e-6
    assert wing.apex.trace_ok(0.05)
    assert convexity_check(wing).fraction >= 0.99


@pytest.mark.slow
def test_wing_does_not_depend_on_the_schedule():
    """Tests that wings built along (20, 40) and (30, 40) agree on the common window."""
    first = construct(2.0, 1 / 8, (20.0, 40.0))
    second = construct(2.0, 1 / 8, (30.0, 40.0))
    window = first.window() & second.window()
    assert np.max(np.abs(first.field.values[window] - second.field.values[window])) <= 1e-6


@pytest.mark.slow
def test_narrower_wing_spine_lies_above():
    """Tests that the b = 1.8 wing's spine lies above the b = 2.6 wing's away from the apex."""
    result = spine_comparison(1.8, 2.6, 1 / 8)
    assert not result.degenerate
    assert result.nodes > 0
    assert result.margin > 0
    assert result.passed


@pytest.mark.slow
def test_wings_depend_continuously_on_the_width():
    """Tests that the gap between wings of half widths 2.2 and 2.2 - delta shrinks with delta."""
    wide_gap = continuity_in_b(2.2, 0.2, 1 / 8)
    narrow_gap = continuity_in_b(2.2, 0.1, 1 / 8)
    assert narrow_gap.window == (10.0, pytest.approx(1.05))
    assert 0.0 < narrow_gap.gap < wide_gap.gap
