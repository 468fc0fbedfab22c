# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Differential-geometric diagnostics of graph fields.

Every field-valued function returns an array of grid shape that is NaN wherever the quantity is
undefined (outside the INTERIOR nodes, or where a stencil would leave the known values).
"""

from itertools import product
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from translator_lab.exceptions import UsageError
from translator_lab.grid.domains import shift
from translator_lab.grid.fields import ScalarField
from translator_lab.grid.stencils import gradient, hessian


def slope_v(field: ScalarField) -> np.ndarray:
    """v = sqrt(1 + |Du|^2)."""
    grad = gradient(field)
    return np.sqrt(1.0 + np.sum(grad**2, axis=0))


def gauss_curvature(field: ScalarField) -> np.ndarray:
    """K = det(D^2 u) / (1 + |Du|^2)^((n + 2) / 2)."""
    grad = gradient(field)
    hess = hessian(field)
    dim = grad.shape[0]
    det = np.linalg.det(np.moveaxis(hess, (0, 1), (-2, -1)))
    return det / (1.0 + np.sum(grad**2, axis=0)) ** ((dim + 2) / 2)


def mean_curvature_residual(field: ScalarField) -> np.ndarray:
    """
    div(Du / W) + 1 / W with W = sqrt(1 + |Du|^2), in conservative flux form.

    Fluxes live on the half-edges between neighboring known nodes; the normal derivative on a
    half-edge is the one-step difference and each transverse derivative averages the central
    differences at its two end nodes. Nodes whose fluxes would need unknown values get NaN.
    """
    field = field.full()
    mask = field.mask
    grid = mask.grid
    spacing = grid.spacing
    dim = grid.dim
    known = np.where(mask.known, field.values, np.nan)

    central = [(shift(known, k, 1, np.nan) - shift(known, k, -1, np.nan)) / (2 * spacing[k]) for k in range(dim)]
    divergence = np.zeros(grid.shape)
    for i in range(dim):
        normal = (shift(known, i, 1, np.nan) - known) / spacing[i]
        squared = normal**2
        for k in range(dim):
            if k != i:
                transverse = 0.5 * (central[k] + shift(central[k], i, 1, np.nan))
                squared = squared + transverse**2
        flux = normal / np.sqrt(1.0 + squared)
        divergence += (flux - shift(flux, i, -1, np.nan)) / spacing[i]

    w = slope_v(field)
    out = divergence + 1.0 / w
    out[~mask.interior] = np.nan
    return out


def weighted_area(field: ScalarField) -> float:
    """
    Integral of e^{-u} sqrt(1 + |Du|^2) over the INTERIOR nodes.

    This is the area of the graph in the conformal metric in which translators are minimal
    surfaces; its critical points with fixed boundary values are the translators.
    """
    full = field.full()
    v = slope_v(full)
    interior = full.mask.interior
    return float(np.sum(np.exp(-full.values[interior]) * v[interior]) * full.grid.cell_volume())


class ApexSpectrum(BaseModel):
    """Second-order data of a field at its maximum node."""

    model_config = ConfigDict(frozen=True)

    index: Tuple[int, ...]
    location: Tuple[float, ...]
    refined_location: Tuple[float, ...]
    value: float
    gradient: Tuple[float, ...]
    hessian: Tuple[Tuple[float, ...], ...]
    eigenvalues: Tuple[float, ...]
    curvatures: Tuple[float, ...]
    axis_curvatures: Tuple[float, ...]
    spacing: Tuple[float, ...]

    @property
    def trace(self) -> float:
        return float(sum(self.hessian[i][i] for i in range(len(self.hessian))))

    @property
    def gradient_norm(self) -> float:
        return float(np.linalg.norm(self.gradient))

    @property
    def max_off_diagonal(self) -> float:
        n = len(self.hessian)
        return max((abs(self.hessian[i][j]) for i in range(n) for j in range(n) if i != j), default=0.0)

    def trace_ok(self, tolerance: float = 0.05) -> bool:
        return abs(self.trace + 1.0) <= tolerance


def _quadratic_design(offsets: np.ndarray) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    dim = offsets.shape[1]
    pairs = [(i, j) for i in range(dim) for j in range(i, dim)]
    columns = [np.ones(len(offsets))] + [offsets[:, i] for i in range(dim)]
    for i, j in pairs:
        columns.append(0.5 * offsets[:, i] ** 2 if i == j else offsets[:, i] * offsets[:, j])
    return np.stack(columns, axis=1), pairs


def apex_spectrum(field: ScalarField) -> ApexSpectrum:
    """
    Locates the maximum node and fits a quadratic over its 3^n neighborhood.

    Raises:
        UsageError: if the maximum lies in the one-cell collar next to the boundary.
    """
    field = field.full()
    mask = field.mask
    grid = field.grid
    index, location, value = field.max_node()
    if mask.collar(1)[index]:
        raise UsageError(f"Maximum at {tuple(location)} lies in the boundary collar; no interior apex.")
    dim = grid.dim
    spacing = np.asarray(grid.spacing)
    steps = np.array(list(product((-1, 0, 1), repeat=dim)))
    nodes = np.asarray(index)[None, :] + steps
    samples = field.values[tuple(nodes.T)]
    design, pairs = _quadratic_design(steps * spacing[None, :])
    coefficients, *_ = np.linalg.lstsq(design, samples, rcond=None)
    grad = coefficients[1 : dim + 1]
    hess = np.zeros((dim, dim))
    for (i, j), c in zip(pairs, coefficients[dim + 1 :]):
        hess[i, j] = hess[j, i] = c
    try:
        refined = location - np.linalg.solve(hess, grad)
    except np.linalg.LinAlgError:
        refined = location
    eigenvalues = np.linalg.eigvalsh(hess)
    eigenvalues = eigenvalues[np.argsort(-np.abs(eigenvalues), kind="stable")]
    return ApexSpectrum(
        index=index,
        location=tuple(float(c) for c in location),
        refined_location=tuple(float(c) for c in refined),
        value=value,
        gradient=tuple(float(g) for g in grad),
        hessian=tuple(tuple(float(h) for h in row) for row in hess),
        eigenvalues=tuple(float(e) for e in eigenvalues),
        curvatures=tuple(float(-e) for e in eigenvalues),
        axis_curvatures=tuple(float(-hess[i, i]) for i in range(dim)),
        spacing=grid.spacing,
    )


class AffineFunction(BaseModel):
    """eta(x) = coefficients . x + offset."""

    model_config = ConfigDict(frozen=True)

    coefficients: Tuple[float, ...]
    offset: float = 0.0

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points) @ np.asarray(self.coefficients) + self.offset


class EtaVAudit(BaseModel):
    """Result of scanning eta * v for strict interior local maxima where eta > 0."""

    passed: bool
    violations: int
    worst_excess: float
    worst_location: Optional[Tuple[float, ...]]
    global_max_location: Optional[Tuple[float, ...]]
    slack: float
    scanned: int


def eta_v_max_audit(
    field: ScalarField,
    eta: Union[AffineFunction, Callable[[np.ndarray], np.ndarray]],
    slack: Optional[float] = None,
) -> EtaVAudit:
    """
    Reports INTERIOR nodes where eta * v beats all axis and diagonal neighbors by more than ``slack``.

    Only nodes with eta > 0 whose whole 3^n neighborhood carries a value are scanned. The default
    slack is 10 h^2 (1 + max v^2).
    """
    field = field.full()
    grid = field.grid
    v = slope_v(field)
    eta_values = np.asarray(eta(grid.points())).reshape(grid.shape)
    product_field = eta_values * v
    h = max(grid.spacing)
    if slack is None:
        slack = 10.0 * h * h * (1.0 + float(np.nanmax(v)) ** 2)

    neighbor_max = np.full(grid.shape, -np.inf)
    complete = field.mask.interior.copy()
    for step in product((-1, 0, 1), repeat=grid.dim):
        if not any(step):
            continue
        shifted = product_field
        for axis, s in enumerate(step):
            if s:
                shifted = shift(shifted, axis, s, np.nan)
        complete &= np.isfinite(shifted)
        neighbor_max = np.fmax(neighbor_max, shifted)

    scan = complete & (eta_values > 0)
    excess = np.where(scan, product_field - neighbor_max, -np.inf)
    violating = excess > slack
    coordinates = grid.coordinates()

    def _where(index) -> Tuple[float, ...]:
        return tuple(float(c[index]) for c in coordinates)

    worst_location = None
    worst = float(np.max(excess)) if np.any(scan) else float("-inf")
    if np.any(scan):
        worst_location = _where(np.unravel_index(int(np.argmax(excess)), grid.shape))
    candidates = np.where(field.mask.interior & (eta_values > 0), product_field, -np.inf)
    global_location = None
    if np.any(np.isfinite(candidates)):
        global_location = _where(np.unravel_index(int(np.argmax(candidates)), grid.shape))
    return EtaVAudit(
        passed=not np.any(violating),
        violations=int(np.sum(violating)),
        worst_excess=worst,
        worst_location=worst_location,
        global_max_location=global_location,
        slack=slack,
        scanned=int(np.sum(scan)),
    )
