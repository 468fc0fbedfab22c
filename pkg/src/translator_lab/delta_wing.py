# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Delta-wings over strips, built as normalized limits of rectangle solves.

For a half width b > pi/2 the rectangle solutions on [-L, L] x [-b, b] grow without bound as
L increases, but u - u(0, 0) converges. The construction solves along an increasing L-schedule,
warm-starting each solve from the previous one, and certifies the limit by the gap between the
last two normalized solves on a window around the origin.
"""

import math
from dataclasses import dataclass, field as dataclass_field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel
from scipy.interpolate import RegularGridInterpolator

from translator_lab.cache import SolveCache
from translator_lab.exceptions import (
    ConfigurationError,
    DomainError,
    PostconditionError,
    ScheduleTooShortError,
    SolverError,
    UsageError,
)
from translator_lab.geometry import ApexSpectrum, apex_spectrum, gauss_curvature
from translator_lab.grid.domains import RectangleDomain, build_domain
from translator_lab.grid.fields import ScalarField
from translator_lab.grid.spec import SymmetryFlags
from translator_lab.grid.stencils import gradient
from translator_lab.logging import logger
from translator_lab.pde.models import ContinuationSchedule, NewtonSettings, SolveReport
from translator_lab.pde.solver import solve_dirichlet
from translator_lab.suite.solves import solve_domain

# Widths within this margin of pi/2 are rejected: the wing degenerates into the grim reaper.
MIN_WIDTH_MARGIN = 1e-3
DEFAULT_CAUCHY_TOLERANCE = 1e-3
DEFAULT_SCHEDULE = (20.0, 40.0)


def tilt_angle(b: float) -> float:
    """
    Tilt of the grim reapers a wing of half width b is asymptotic to: arccos(pi / (2b)).

    Raises:
        DomainError: for b < pi/2.
    """
    if b < math.pi / 2:
        raise DomainError(f"No tilted grim reaper fits the half width b={b} < pi/2.")
    return math.acos(min(1.0, math.pi / (2 * b)))


@dataclass(frozen=True, eq=False)
class DeltaWing:
    """A normalized wing on the largest rectangle of its L-schedule, with its construction record."""

    b: float
    h: float
    L_schedule: Tuple[float, ...]
    field: ScalarField
    apex_heights: Tuple[float, ...]
    cauchy_gaps: Tuple[float, ...]
    tilt: float
    apex: ApexSpectrum
    reports: List[SolveReport] = dataclass_field(default_factory=list)
    warm_started: Tuple[bool, ...] = ()

    @property
    def L_max(self) -> float:
        return self.L_schedule[-1]

    @property
    def k(self) -> float:
        """The smaller apex principal curvature; the pair is (k, 1 - k) up to the trace tolerance."""
        return min(self.apex.axis_curvatures)

    def window(self) -> np.ndarray:
        """Nodes trusted as wing data: |x| <= 3/4 L_max, away from a 2-cell collar."""
        x = self.field.grid.coordinates()[0]
        return self.field.mask.core(2) & (np.abs(x) <= 0.75 * self.L_max + 1e-12)


def _rows_at(field: ScalarField, x: np.ndarray) -> np.ndarray:
    """Values of ``field`` at abscissae ``x`` for every row of nodes, by linear interpolation in x."""
    xs = field.grid.axis_coordinates(0)
    values = np.where(field.mask.non_exterior, field.values, 0.0)
    return np.stack([np.interp(x, xs, values[:, j]) for j in range(values.shape[1])], axis=1)


def _warm_start_guess(previous: ScalarField, mask, b: float) -> ScalarField:
    """Previous solution with its ends moved out to the new length and a tilted ramp across the middle."""
    grid = mask.grid
    x = grid.axis_coordinates(0)
    extra = grid.upper[0] - previous.grid.upper[0]
    source_x = np.sign(x) * np.maximum(np.abs(x) - extra, 0.0)
    shifted = _rows_at(previous, source_x)
    center = previous.grid.center_index
    spine = previous.values[center[0], :]
    shape = spine / spine[center[1]]
    ramp = math.tan(tilt_angle(b)) * np.maximum(extra - np.abs(x), 0.0)
    guess = shifted + ramp[:, None] * shape[None, :]
    values = np.where(mask.interior, guess, np.where(mask.non_exterior, 0.0, np.nan))
    return ScalarField(mask=mask, values=values)


def _solve_length(
    L: float,
    b: float,
    h: float,
    previous: Optional[ScalarField],
    settings: Optional[NewtonSettings],
    cache: Optional[SolveCache],
) -> Tuple[ScalarField, SolveReport, bool]:
    descriptor = RectangleDomain(L=L, b=b)
    if previous is not None:
        mask = build_domain(descriptor, descriptor.default_grid(h))
        if mask.grid.shape[1] == previous.grid.shape[1]:
            guess = _warm_start_guess(previous, mask, b)
            try:
                field, report = solve_dirichlet(
                    mask,
                    ContinuationSchedule.direct(),
                    settings,
                    SymmetryFlags.all_axes(2),
                    initial_guess=guess,
                )
                return field, report, True
            except (SolverError, PostconditionError) as e:
                logger.warning(f"Warm start at L={L:g} failed ({e}); running the full continuation.")
    field, report = solve_domain(descriptor, h, settings=settings, cache=cache)
    return field, report, False


def _normalized(field: ScalarField) -> Tuple[ScalarField, float]:
    center = field.grid.center_index
    height = float(field.values[center])
    return field.shifted(-height), height


def _cauchy_gap(shorter: ScalarField, longer: ScalarField, half_window: float) -> float:
    x = shorter.grid.axis_coordinates(0)
    inside = np.abs(x) <= half_window + 1e-12
    reference = shorter.values[inside][:, 1:-1]
    compared = _rows_at(longer, x[inside])[:, 1:-1]
    return float(np.max(np.abs(reference - compared)))


def construct(
    b: float,
    h: float,
    L_schedule: Sequence[float] = DEFAULT_SCHEDULE,
    tolerance: float = DEFAULT_CAUCHY_TOLERANCE,
    settings: Optional[NewtonSettings] = None,
    cache: Optional[SolveCache] = None,
) -> DeltaWing:
    """
    Builds the wing of half width b from rectangle solves along ``L_schedule``.

    Raises:
        DomainError: if b <= pi/2 + 1e-3.
        ConfigurationError: if the schedule is not increasing or has fewer than two lengths.
        ScheduleTooShortError: if the last two normalized solves differ by more than ``tolerance``
            on the window |x| <= L_1 / 2.
    """
    if b <= math.pi / 2 + MIN_WIDTH_MARGIN:
        raise DomainError(f"Delta-wings need b > pi/2 + {MIN_WIDTH_MARGIN}, got b={b}.")
    schedule = tuple(float(L) for L in L_schedule)
    if len(schedule) < 2 or any(b2 <= b1 for b1, b2 in zip(schedule, schedule[1:])) or schedule[0] <= 0:
        raise ConfigurationError(f"L-schedule must be positive, increasing and have two entries, got {schedule}.")

    normalized: List[ScalarField] = []
    heights: List[float] = []
    reports: List[SolveReport] = []
    warm: List[bool] = []
    previous: Optional[ScalarField] = None
    for L in schedule:
        logger.info(f"Delta-wing b={b:g}: solving the rectangle L={L:g}.")
        field, report, warmed = _solve_length(L, b, h, previous, settings, cache)
        shifted, height = _normalized(field)
        normalized.append(shifted)
        heights.append(height)
        reports.append(report)
        warm.append(warmed)
        previous = field

    half_window = schedule[0] / 2
    gaps = tuple(_cauchy_gap(a, c, half_window) for a, c in zip(normalized, normalized[1:]))
    logger.info(f"Delta-wing b={b:g}: Cauchy gaps {['%.3e' % g for g in gaps]} (tolerance {tolerance:g}).")
    if gaps[-1] > tolerance:
        raise ScheduleTooShortError(
            f"Normalized solves at L={schedule[-2]:g} and L={schedule[-1]:g} differ by {gaps[-1]:.3e} "
            f"on |x| <= {half_window:g}.",
            gaps[-1],
            tolerance,
        )

    wing_field = normalized[-1]
    index, _, value = wing_field.max_node()
    if index != wing_field.grid.center_index and value > 0.0:
        raise PostconditionError(f"Normalized wing peaks off the origin (value {value:.3e}).", value, 0.0)
    apex = apex_spectrum(wing_field)
    grad = gradient(wing_field)
    station = wing_field.node_index(np.array([0.75 * schedule[-1], 0.0]))
    slope = float(grad[0][station])
    return DeltaWing(
        b=b,
        h=h,
        L_schedule=schedule,
        field=wing_field,
        apex_heights=tuple(heights),
        cauchy_gaps=gaps,
        tilt=math.atan(abs(slope)),
        apex=apex,
        reports=reports,
        warm_started=tuple(warm),
    )


class SlopeCheck(BaseModel):
    """Centerline slopes of a wing at two far stations compared with the asymptotic tilt."""

    stations: Tuple[float, float]
    slopes: Tuple[float, float]
    expected: float
    relative_error: float
    monotone: bool
    reflection_gap: float
    tolerance: float
    passed: bool


def asymptotic_slope_check(wing: DeltaWing, tolerance: float = 0.05) -> SlopeCheck:
    """
    Reads du/dx(x, 0) at x = L_max/2 and 3L_max/4 and compares the far one with -tan(theta).

    Raises:
        UsageError: if L_max < 10 b.
    """
    if wing.L_max < 10 * wing.b:
        raise UsageError(f"Slope extraction needs L_max >= 10 b = {10 * wing.b:g}, got {wing.L_max:g}.")
    grad = gradient(wing.field)[0]
    stations = (0.5 * wing.L_max, 0.75 * wing.L_max)
    slopes = tuple(float(grad[wing.field.node_index(np.array([x, 0.0]))]) for x in stations)
    mirrored = tuple(float(grad[wing.field.node_index(np.array([-x, 0.0]))]) for x in stations)
    expected = math.tan(tilt_angle(wing.b))
    error = abs(abs(slopes[1]) - expected) / expected
    monotone = abs(slopes[1]) > abs(slopes[0])
    reflection = max(abs(s + m) for s, m in zip(slopes, mirrored))
    return SlopeCheck(
        stations=stations,
        slopes=slopes,
        expected=expected,
        relative_error=error,
        monotone=monotone,
        reflection_gap=reflection,
        tolerance=tolerance,
        passed=error <= tolerance and monotone,
    )


class ConvexityCheck(BaseModel):
    fraction: float
    counted: int
    threshold: float
    floor: float
    passed: bool


def _trusted_field(target: Union[DeltaWing, ScalarField]) -> Tuple[ScalarField, np.ndarray]:
    if isinstance(target, DeltaWing):
        return target.field, target.window()
    field = target.full()
    return field, field.mask.core(2)


def convexity_check(
    target: Union[DeltaWing, ScalarField], floor: float = 1e-10, threshold: float = 0.99
) -> ConvexityCheck:
    """Fraction of trusted nodes with discrete Gauss curvature above ``floor``."""
    field, region = _trusted_field(target)
    curvature = gauss_curvature(field)[region]
    fraction = float(np.mean(curvature > floor)) if curvature.size else 0.0
    return ConvexityCheck(
        fraction=fraction, counted=int(curvature.size), threshold=threshold, floor=floor, passed=fraction >= threshold
    )


class GaussImageCheck(BaseModel):
    """
    Range of du/dx against the bounding tilt; wings stay strictly inside it, bowls do not.

    For a wing the bound comes from its measured tilt, and ``tilt_error`` compares that tilt with
    the asymptotic value ``expected_tan_theta``.
    """

    max_abs_slope: float
    bound: float
    tan_theta: float
    expected_tan_theta: Optional[float] = None
    tilt_error: Optional[float] = None
    bounded: bool
    passed: bool


def gauss_image_bounds(
    target: Union[DeltaWing, ScalarField],
    tan_theta: Optional[float] = None,
    margin: float = 0.02,
) -> GaussImageCheck:
    """
    Checks |du/dx| < (1 + margin) tan(theta) over the trusted nodes.

    For a wing theta defaults to its measured tilt, reported next to arccos(pi / 2b); for a plain
    field it must be given.
    """
    expected: Optional[float] = None
    error: Optional[float] = None
    if isinstance(target, DeltaWing):
        expected = math.tan(tilt_angle(target.b))
        if tan_theta is None:
            tan_theta = math.tan(target.tilt)
        error = abs(tan_theta - expected) / expected if expected > 0 else abs(tan_theta)
    elif tan_theta is None:
        raise UsageError("gauss_image_bounds needs tan_theta for a field that is not a wing.")
    field, region = _trusted_field(target)
    slopes = np.abs(gradient(field)[0][region])
    largest = float(np.max(slopes)) if slopes.size else 0.0
    bound = (1.0 + margin) * tan_theta
    bounded = largest < bound
    return GaussImageCheck(
        max_abs_slope=largest,
        bound=bound,
        tan_theta=tan_theta,
        expected_tan_theta=expected,
        tilt_error=error,
        bounded=bounded,
        passed=bounded,
    )


class SpineComparison(BaseModel):
    b_small: float
    b_large: float
    margin: float
    nodes: int
    degenerate: bool
    passed: bool


def spine_comparison(
    b_small: float,
    b_large: float,
    h: float,
    L_schedule: Sequence[float] = DEFAULT_SCHEDULE,
    tolerance: float = DEFAULT_CAUCHY_TOLERANCE,
    settings: Optional[NewtonSettings] = None,
) -> SpineComparison:
    """
    Checks that the narrower wing's spine lies above the wider one's: u_small(x, 0) > u_large(x, 0)
    at every node with h <= |x| <= L_1 / 2.
    """
    if b_large < b_small:
        raise ConfigurationError(f"Need b_small <= b_large, got {b_small} > {b_large}.")
    if b_small == b_large:
        return SpineComparison(b_small=b_small, b_large=b_large, margin=0.0, nodes=0, degenerate=True, passed=True)
    small = construct(b_small, h, L_schedule, tolerance, settings)
    large = construct(b_large, h, L_schedule, tolerance, settings)
    x = small.field.grid.axis_coordinates(0)
    spacing = small.field.grid.spacing[0]
    select = (np.abs(x) >= spacing * (1 - 1e-9)) & (np.abs(x) <= L_schedule[0] / 2 + 1e-12)
    upper_spine = small.field.values[:, small.field.grid.center_index[1]][select]
    lower_spine = np.interp(
        x[select], large.field.grid.axis_coordinates(0), large.field.values[:, large.field.grid.center_index[1]]
    )
    margin = float(np.min(upper_spine - lower_spine))
    return SpineComparison(
        b_small=b_small, b_large=b_large, margin=margin, nodes=int(select.sum()), degenerate=False, passed=margin > 0
    )


class ContinuityGap(BaseModel):
    b: float
    delta: float
    gap: float
    window: Tuple[float, float]


def continuity_in_b(
    b: float,
    delta: float,
    h: float,
    L_schedule: Sequence[float] = DEFAULT_SCHEDULE,
    tolerance: float = DEFAULT_CAUCHY_TOLERANCE,
    settings: Optional[NewtonSettings] = None,
) -> ContinuityGap:
    """
    Max-norm gap between the wings of half widths b and b - delta on |x| <= L_1/2, |y| <= (b - delta)/2.

    Raises:
        DomainError: if b - delta <= pi/2.
    """
    narrow_b = b - delta
    if narrow_b <= math.pi / 2:
        raise DomainError(f"Need b - delta > pi/2, got {narrow_b}.")
    window = (L_schedule[0] / 2, narrow_b / 2)
    if delta == 0:
        return ContinuityGap(b=b, delta=delta, gap=0.0, window=window)
    wide = construct(b, h, L_schedule, tolerance, settings)
    narrow = construct(narrow_b, h, L_schedule, tolerance, settings)
    grid = narrow.field.grid
    x, y = grid.coordinates()
    region = narrow.field.mask.interior & (np.abs(x) <= window[0] + 1e-12) & (np.abs(y) <= window[1] + 1e-12)
    wide_values = np.where(wide.field.mask.non_exterior, wide.field.values, 0.0)
    interpolator = RegularGridInterpolator(
        (wide.field.grid.axis_coordinates(0), wide.field.grid.axis_coordinates(1)), wide_values
    )
    sampled = interpolator(np.stack([x[region], y[region]], axis=1))
    gap = float(np.max(np.abs(sampled - narrow.field.values[region])))
    logger.info(f"Continuity in b: gap {gap:.3e} between b={b:g} and b={narrow_b:g}.")
    return ContinuityGap(b=b, delta=delta, gap=gap, window=window)
