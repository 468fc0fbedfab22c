# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Discrete audits of the qualitative properties of Dirichlet translators.

Sign checks skip a one-cell collar next to the boundary, where the embedded-boundary stencils are
only first order. Checks that compare two domains take the larger solve as an optional companion
and compute it when it is not given.
"""

from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from translator_lab.exceptions import UsageError
from translator_lab.geometry import apex_spectrum, slope_v
from translator_lab.grid.domains import EllipsoidDomain, EllipsoidSlabDomain, RectangleDomain
from translator_lab.grid.fields import ScalarField
from translator_lab.grid.stencils import gradient, hessian
from translator_lab.logging import logger
from translator_lab.suite.models import AuditCheck, AuditReport
from translator_lab.suite.solves import solve_rectangle, solve_slab

DEFAULT_SLACK = 1e-8
TRACE_TOLERANCE = 0.05
W_STABLE_TOLERANCE = 0.10
W_SLAB_TOLERANCE = 0.15
COEFFICIENT_TIE = 1e-12
# Rotational derivatives of tied coefficients vanish only to the discretization level.
TIE_RULE = "tie tolerance 10 h^2 (1 + max|D^2 u|)"


def _require(field: ScalarField, kind: type, name: str) -> ScalarField:
    field = field.full()
    if not isinstance(field.mask.descriptor, kind):
        raise UsageError(f"{name} needs a field solved on a {kind.__name__}, got {field.mask.descriptor.kind}.")
    return field


def _location(field: ScalarField, index) -> Tuple[float, ...]:
    return tuple(float(c[index]) for c in field.grid.coordinates())


def _worst(field: ScalarField, values: np.ndarray, region: np.ndarray) -> Tuple[float, Optional[Tuple[float, ...]]]:
    """Largest entry of ``values`` over ``region`` and its location; (-inf, None) for an empty region."""
    if not np.any(region):
        return float("-inf"), None
    masked = np.where(region, values, -np.inf)
    index = np.unravel_index(int(np.argmax(masked)), masked.shape)
    return float(masked[index]), _location(field, index)


def _sign_check(
    check_id: str, field: ScalarField, grad: np.ndarray, axes: List[int], slack: float
) -> AuditCheck:
    """D_i u opposes x_i: the largest x_i D_i u over the core nodes with |x_i| > h_i must stay below slack."""
    coordinates = field.grid.coordinates()
    core = field.mask.core(1)
    worst, where = float("-inf"), None
    for axis in axes:
        region = core & (np.abs(coordinates[axis]) > field.grid.spacing[axis] * (1 + 1e-9))
        value, location = _worst(field, coordinates[axis] * grad[axis], region)
        if value > worst:
            worst, where = value, location
    return AuditCheck(id=check_id, passed=worst < slack, value=worst, tolerance=slack, location=where)


def _trace_check(field: ScalarField) -> AuditCheck:
    spectrum = apex_spectrum(field)
    gap = abs(spectrum.trace + 1.0)
    return AuditCheck(
        id="TRACE_APEX",
        passed=gap <= TRACE_TOLERANCE,
        value=spectrum.trace,
        tolerance=TRACE_TOLERANCE,
        location=spectrum.location,
    )


def _max_w(field: ScalarField) -> Tuple[float, Tuple[float, ...]]:
    """Maximum of (b - |s|) v over the INTERIOR nodes, s being the last coordinate."""
    b = field.mask.descriptor.strip_half_width
    s = field.grid.coordinates()[-1]
    w = (b - np.abs(s)) * slope_v(field)
    value, location = _worst(field, w, field.mask.interior)
    return value, location


def _relative_change(first: float, second: float) -> float:
    return abs(second - first) / abs(first)


def _tie_tolerance(field: ScalarField) -> float:
    h = max(field.grid.spacing)
    return 10.0 * h * h * (1.0 + float(np.nanmax(np.abs(hessian(field)))))


def _rotational_derivative(field: ScalarField, grad: np.ndarray, i: int, j: int) -> np.ndarray:
    coordinates = field.grid.coordinates()
    return coordinates[i] * grad[j] - coordinates[j] * grad[i]


def _rot_sign_check(field: ScalarField, grad: np.ndarray, a: Tuple[float, ...], slack: float) -> AuditCheck:
    """
    For a_i > a_j the rotational derivative (x_i D_j - x_j D_i) u carries the sign of x_i x_j.

    Tied coefficients must give a vanishing rotational derivative up to the discretization level.
    """
    coordinates = field.grid.coordinates()
    h = max(field.grid.spacing)
    core = field.mask.core(1)
    worst, where = float("-inf"), None
    tie_worst, tie_where = 0.0, None
    tie_tolerance = _tie_tolerance(field)
    pairs = ties = 0
    for i, j in combinations(range(len(a)), 2):
        if abs(a[i] - a[j]) <= COEFFICIENT_TIE:
            ties += 1
            value, location = _worst(field, np.abs(_rotational_derivative(field, grad, i, j)), core)
            if value > tie_worst:
                tie_worst, tie_where = value, location
            continue
        if a[i] < a[j]:
            i, j = j, i
        pairs += 1
        product = coordinates[i] * coordinates[j]
        region = core & (np.abs(product) > h * h)
        value, location = _worst(field, -np.sign(product) * _rotational_derivative(field, grad, i, j), region)
        if value > worst:
            worst, where = value, location
    if pairs == 0:
        return AuditCheck(
            id="ROT_SIGN",
            passed=tie_worst <= tie_tolerance,
            value=tie_worst,
            tolerance=tie_tolerance,
            location=tie_where,
            note=f"no distinct coefficient pairs; {TIE_RULE}",
        )
    passed = worst < slack and tie_worst <= tie_tolerance
    note = None
    if ties:
        note = f"tied pairs: max |rotational derivative| {tie_worst:.3e} against {tie_tolerance:.3e}; {TIE_RULE}"
    return AuditCheck(id="ROT_SIGN", passed=passed, value=worst, tolerance=slack, location=where, note=note)


def audit_rectangle(
    field: ScalarField, companion: Optional[ScalarField] = None, slack: float = DEFAULT_SLACK
) -> AuditReport:
    """
    Checks SIGN_X, SIGN_Y, EDGE_MONOTONE, W_ARGMAX, W_STABLE and TRACE_APEX on a rectangle solve.

    ``companion`` is the solve on the rectangle of twice the length; it is computed when omitted.

    Raises:
        UsageError: if the field was not solved on a rectangle.
    """
    field = _require(field, RectangleDomain, "audit_rectangle")
    descriptor = field.mask.descriptor
    grid = field.grid
    grad = gradient(field)
    report = AuditReport(audit="rectangle")
    report.checks.append(_sign_check("SIGN_X", field, grad, [0], slack))
    report.checks.append(_sign_check("SIGN_Y", field, grad, [1], slack))

    # one-sided normal derivative on the edge x = L, read from the column x = L - h
    column = grid.nodes[0] - 2
    ys = grid.axis_coordinates(1)
    upper = ys >= -1e-12
    edge = field.values[column, upper] / grid.spacing[0]
    increase = float(np.max(np.diff(edge))) if len(edge) > 1 else float("-inf")
    report.checks.append(
        AuditCheck(
            id="EDGE_MONOTONE",
            passed=increase <= slack,
            value=increase,
            tolerance=slack,
            location=(float(grid.axis_coordinates(0)[column]), 0.0),
        )
    )

    w_value, w_location = _max_w(field)
    h_y = grid.spacing[1]
    report.checks.append(
        AuditCheck(
            id="W_ARGMAX",
            passed=abs(w_location[1]) <= h_y * (1 + 1e-9),
            value=abs(w_location[1]),
            tolerance=h_y,
            location=w_location,
        )
    )

    if companion is None:
        logger.info(f"Solving the companion rectangle L={2 * descriptor.L:g} for W_STABLE.")
        companion, _ = solve_rectangle(2 * descriptor.L, descriptor.b, h_y)
    companion_w, _ = _max_w(_require(companion, RectangleDomain, "audit_rectangle companion"))
    change = _relative_change(w_value, companion_w)
    report.checks.append(
        AuditCheck(id="W_STABLE", passed=change <= W_STABLE_TOLERANCE, value=change, tolerance=W_STABLE_TOLERANCE)
    )
    report.checks.append(_trace_check(field))
    return report


def _radially_projected(field: ScalarField, grad: np.ndarray, rho: float) -> np.ndarray:
    """u moved to the sphere |x| = rho along each node's ray to first order."""
    coordinates = field.grid.coordinates()
    r = np.sqrt(sum(c * c for c in coordinates))
    safe_r = np.where(r > 0, r, 1.0)
    radial = sum(c * g for c, g in zip(coordinates, grad)) / safe_r
    return field.values + (rho - r) * radial


def _rotation_check(field: ScalarField, a: Tuple[float, ...]) -> AuditCheck:
    """u agrees with its 45 degree rotation in every plane of tied coefficients, by multilinear interpolation."""
    grid = field.grid
    tolerance = _tie_tolerance(field)
    tied = [(i, j) for i, j in combinations(range(len(a)), 2) if abs(a[i] - a[j]) <= COEFFICIENT_TIE]
    if not tied:
        return AuditCheck(id="ROT_INV", passed=True, value=0.0, tolerance=tolerance, note="no tied coefficients")
    points = grid.points()
    lower = np.asarray(grid.lower)
    spacing = np.asarray(grid.spacing)
    values = np.where(field.mask.non_exterior, field.values, 0.0)
    interior = field.mask.interior.astype(float)
    region = field.mask.core(2).ravel()
    worst, where = 0.0, None
    c = s = np.sqrt(0.5)
    for i, j in tied:
        rotated = points.copy()
        rotated[:, i] = c * points[:, i] - s * points[:, j]
        rotated[:, j] = s * points[:, i] + c * points[:, j]
        index_coords = ((rotated - lower) / spacing).T
        inside = ndimage.map_coordinates(interior, index_coords, order=1, mode="constant", cval=0.0)
        sampled = ndimage.map_coordinates(values, index_coords, order=1, mode="constant", cval=0.0)
        usable = region & (inside >= 1.0 - 1e-12)
        if not np.any(usable):
            continue
        gap = np.abs(sampled - values.ravel())
        gap[~usable] = -np.inf
        k = int(np.argmax(gap))
        if gap[k] > worst:
            worst, where = float(gap[k]), tuple(float(x) for x in points[k])
    return AuditCheck(id="ROT_INV", passed=worst <= tolerance, value=worst, tolerance=tolerance, location=where)


def audit_ellipsoid(field: ScalarField, rho: Optional[float] = None, slack: float = DEFAULT_SLACK) -> AuditReport:
    """
    Checks ROT_SIGN, ORDER, LOW_POINT and ROT_INV on an ellipsoid solve.

    LOW_POINT takes the nodes within h/2 of the sphere |x| = rho (by default half the smallest
    semi-axis), moves their values to the sphere along the ray to first order, and requires the
    minimum within 2h of the span of the axes with the largest coefficient.

    Raises:
        UsageError: if the field was not solved on an ellipsoid, or ``rho`` leaves the ellipsoid.
    """
    field = _require(field, EllipsoidDomain, "audit_ellipsoid")
    a = field.mask.descriptor.a
    grid = field.grid
    h = max(grid.spacing)
    grad = gradient(field)
    report = AuditReport(audit="ellipsoid")
    report.checks.append(_rot_sign_check(field, grad, a, slack))

    spectrum = apex_spectrum(field)
    k = spectrum.axis_curvatures
    margins = [
        k[i] - k[j] if a[i] > a[j] else k[j] - k[i]
        for i, j in combinations(range(len(a)), 2)
        if abs(a[i] - a[j]) > COEFFICIENT_TIE
    ]
    margin = min(margins) if margins else 0.0
    report.checks.append(
        AuditCheck(
            id="ORDER",
            passed=margin > 0.0 if margins else True,
            value=margin,
            tolerance=0.0,
            location=spectrum.location,
            note=None if margins else "no distinct coefficients",
        )
    )

    semi_axes = field.mask.descriptor.semi_axes
    rho = 0.5 * min(semi_axes) if rho is None else rho
    if not 0 < rho < min(semi_axes):
        raise UsageError(f"LOW_POINT radius {rho} must lie in (0, {min(semi_axes):.6g}).")
    coordinates = grid.coordinates()
    r = np.sqrt(sum(c * c for c in coordinates))
    annulus = field.mask.interior & (np.abs(r - rho) <= 0.5 * h)
    projected = _radially_projected(field, grad, rho)
    _, where = _worst(field, -projected, annulus)
    widest = max(a)
    off_axes = [i for i in range(len(a)) if widest - a[i] > COEFFICIENT_TIE]
    distance = float(np.sqrt(sum(where[i] ** 2 for i in off_axes))) if where is not None else float("inf")
    report.checks.append(
        AuditCheck(id="LOW_POINT", passed=distance <= 2 * h, value=distance, tolerance=2 * h, location=where)
    )
    report.checks.append(_rotation_check(field, a))
    return report


def audit_slab(
    field: ScalarField, companion: Optional[ScalarField] = None, slack: float = DEFAULT_SLACK
) -> AuditReport:
    """
    Checks SIGN_ALL, EDGE_S_MONOTONE, W_SLAB and ROT_SIGN on an ellipsoid x slab solve.

    ``companion`` is the solve at radius 2R; when omitted it is computed at twice the spacing.

    Raises:
        UsageError: if the field was not solved on an ellipsoid x slab domain.
    """
    field = _require(field, EllipsoidSlabDomain, "audit_slab")
    descriptor = field.mask.descriptor
    grid = field.grid
    dim = grid.dim
    grad = gradient(field)
    report = AuditReport(audit="slab")
    report.checks.append(_sign_check("SIGN_ALL", field, grad, list(range(dim)), slack))

    # nodes of the slab mid-plane whose ellipsoid cross-section neighbor is not INTERIOR
    interior = field.mask.interior
    center = grid.center_index[-1]
    plane = interior[..., center]
    structure = ndimage.generate_binary_structure(dim - 1, 1)
    ring = plane & ~ndimage.binary_erosion(plane, structure=structure, border_value=0)
    columns = field.values[ring][:, center:]
    interior_columns = interior[ring][:, center:]
    increases = np.where(interior_columns[:, 1:] & interior_columns[:, :-1], np.diff(columns, axis=1), -np.inf)
    increase = float(np.max(increases)) if increases.size else float("-inf")
    report.checks.append(
        AuditCheck(id="EDGE_S_MONOTONE", passed=increase <= slack, value=increase, tolerance=slack)
    )

    w_value, w_location = _max_w(field)
    if companion is None:
        h = 2.0 * max(grid.spacing)
        logger.info(f"Solving the companion slab R={2 * descriptor.R:g} at h={h:g} for W_SLAB.")
        companion, _ = solve_slab(descriptor.a, 2 * descriptor.R, descriptor.b, h)
    companion_w, _ = _max_w(_require(companion, EllipsoidSlabDomain, "audit_slab companion"))
    change = _relative_change(w_value, companion_w)
    report.checks.append(
        AuditCheck(
            id="W_SLAB",
            passed=change <= W_SLAB_TOLERANCE,
            value=change,
            tolerance=W_SLAB_TOLERANCE,
            location=w_location,
        )
    )
    report.checks.append(_rot_sign_check(field, grad, descriptor.a, slack))
    return report
