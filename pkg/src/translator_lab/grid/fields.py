# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

from translator_lab.exceptions import ConfigurationError, UsageError
from translator_lab.grid.domains import DomainMask, NodeClass, build_domain
from translator_lab.grid.spec import GridSpec, SymmetryFlags

PointFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class ScalarField:
    """
    Values of a candidate translator on a masked grid.

    ``values`` has the grid shape: unknowns at INTERIOR nodes, the boundary value at
    BOUNDARY_ADJACENT nodes (0 unless sampled from a closed form), NaN at EXTERIOR nodes.
    ``boundary_values`` holds the Dirichlet data at the mask's crossing points; None means 0.
    ``symmetry`` is set only on fields produced by ``reduce_to_octant``.
    """

    mask: DomainMask
    values: np.ndarray
    boundary_values: Optional[np.ndarray] = None
    symmetry: Optional[SymmetryFlags] = None

    def __post_init__(self) -> None:
        if self.values.shape != self.mask.grid.shape:
            raise ConfigurationError(
                f"Field shape {self.values.shape} does not match grid shape {self.mask.grid.shape}."
            )
        if not np.all(np.isfinite(self.values[self.mask.non_exterior])):
            raise ConfigurationError("Field values must be finite at every non-EXTERIOR node.")

    @property
    def grid(self) -> GridSpec:
        return self.mask.grid

    @classmethod
    def zeros(cls, mask: DomainMask) -> "ScalarField":
        values = np.where(mask.non_exterior, 0.0, np.nan)
        return cls(mask=mask, values=values)

    @classmethod
    def from_interior(cls, mask: DomainMask, interior_values: np.ndarray) -> "ScalarField":
        """Builds a zero-boundary field from values at INTERIOR nodes given in lexicographic order."""
        values = np.where(mask.non_exterior, 0.0, np.nan)
        values[mask.interior] = interior_values
        return cls(mask=mask, values=values)

    @classmethod
    def sample(cls, mask: DomainMask, function: PointFunction) -> "ScalarField":
        """
        Samples ``function`` (mapping an (N, dim) array of points to N values) on the mask.

        INTERIOR nodes, boundary nodes lying on the analytic boundary, and the crossing points are
        sampled; the remaining BOUNDARY_ADJACENT nodes lie outside the domain and hold 0.
        """
        points = mask.grid.points()
        values = np.where(mask.non_exterior, 0.0, np.nan).ravel()
        on_boundary = (mask.on_boundary & mask.non_exterior).ravel()
        take = mask.interior.ravel() | on_boundary
        values[take] = function(points[take])
        boundary = function(mask.crossing_points) if len(mask.crossing_points) else np.zeros(0)
        return cls(mask=mask, values=values.reshape(mask.grid.shape), boundary_values=np.asarray(boundary, float))

    def boundary_data(self) -> np.ndarray:
        if self.boundary_values is None:
            return np.zeros(len(self.mask.crossing_points))
        return self.boundary_values

    def interior_values(self) -> np.ndarray:
        return self.values[self.mask.interior]

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return replace(self, values=values)

    def shifted(self, offset: float) -> "ScalarField":
        """Vertical translate; boundary data moves with it."""
        values = np.where(self.mask.non_exterior, self.values + offset, np.nan)
        boundary = self.boundary_data() + offset
        return replace(self, values=values, boundary_values=boundary)

    def full(self) -> "ScalarField":
        """The field on its full grid (reflects a reduced field, returns others unchanged)."""
        if self.symmetry is None:
            return self
        return reflect_full(self)

    def max_node(self) -> Tuple[Tuple[int, ...], np.ndarray, float]:
        """Index, location and value of the largest INTERIOR node value (first in node order on ties)."""
        masked = np.where(self.mask.interior, self.values, -np.inf)
        flat = int(np.argmax(masked))
        index = tuple(int(i) for i in np.unravel_index(flat, self.grid.shape))
        location = np.array([self.grid.axis_coordinates(a)[index[a]] for a in range(self.grid.dim)])
        return index, location, float(self.values[index])

    def node_index(self, point: np.ndarray) -> Tuple[int, ...]:
        """Index of the grid node nearest to ``point``."""
        grid = self.grid
        return tuple(
            int(np.clip(round((point[a] - grid.lower[a]) / grid.spacing[a]), 0, grid.nodes[a] - 1))
            for a in range(grid.dim)
        )


def _restrict_mask(mask: DomainMask, grid: GridSpec, slices: Tuple[slice, ...]) -> DomainMask:
    axis_slices = (slice(None), slice(None)) + slices
    return DomainMask(
        descriptor=mask.descriptor,
        grid=grid,
        classes=mask.classes[slices],
        fractions=mask.fractions[axis_slices],
        crossing_index=mask.crossing_index[axis_slices],
        crossing_points=mask.crossing_points,
        on_boundary=mask.on_boundary[slices],
        node_crossing=mask.node_crossing[slices],
    )


def reduce_to_octant(field: ScalarField, flags: SymmetryFlags) -> ScalarField:
    """
    Restricts a field to the non-negative half of every flagged axis.

    Raises:
        ConfigurationError: if a flagged axis has an asymmetric extent.
        UsageError: if the field is already reduced.
    """
    if field.symmetry is not None:
        raise UsageError("Field is already reduced; reflect it to the full grid first.")
    grid = field.grid
    flags.validate_for(grid)
    center = grid.center_index
    slices = tuple(slice(center[a], None) if flags.even[a] else slice(None) for a in range(grid.dim))
    reduced_grid = GridSpec(
        lower=tuple(0.0 if flags.even[a] else grid.lower[a] for a in range(grid.dim)),
        upper=grid.upper,
        nodes=tuple(grid.nodes[a] - center[a] if flags.even[a] else grid.nodes[a] for a in range(grid.dim)),
    )
    return ScalarField(
        mask=_restrict_mask(field.mask, reduced_grid, slices),
        values=field.values[slices].copy(),
        boundary_values=field.boundary_values,
        symmetry=flags,
    )


def reflect_full(reduced: ScalarField) -> ScalarField:
    """
    Extends a reduced field to the full grid by even reflection across every flagged axis.

    Raises:
        UsageError: if the field was not produced by ``reduce_to_octant``.
    """
    flags = reduced.symmetry
    if flags is None:
        raise UsageError("reflect_full needs a field produced by reduce_to_octant.")
    grid = reduced.grid
    full_grid = GridSpec(
        lower=tuple(-grid.upper[a] if flags.even[a] else grid.lower[a] for a in range(grid.dim)),
        upper=grid.upper,
        nodes=tuple(2 * grid.nodes[a] - 1 if flags.even[a] else grid.nodes[a] for a in range(grid.dim)),
    )
    values = reduced.values
    for axis, flag in enumerate(flags.even):
        if flag:
            mirrored = np.flip(np.take(values, np.arange(1, values.shape[axis]), axis=axis), axis=axis)
            values = np.concatenate([mirrored, values], axis=axis)
    mask = build_domain(reduced.mask.descriptor, full_grid)
    values = np.where(mask.classes == NodeClass.EXTERIOR, np.nan, values)
    return ScalarField(mask=mask, values=values, boundary_values=reduced.boundary_values)
