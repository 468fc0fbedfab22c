# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import Annotated, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import ndimage

from translator_lab.exceptions import ConfigurationError
from translator_lab.grid.spec import GridSpec

# Relative tolerance of the normalized level function below which a node counts as on the boundary.
LEVEL_TOLERANCE = 1e-12
# Smallest embedded-boundary fraction kept; nodes closer to the boundary still solve, just stiffer.
MIN_FRACTION = 1e-6


class NodeClass(IntEnum):
    """Classification of a grid node relative to the analytic domain."""

    INTERIOR = 0
    BOUNDARY_ADJACENT = 1
    EXTERIOR = 2


class _Domain(BaseModel):
    model_config = ConfigDict(frozen=True)

    @property
    def dim(self) -> int:  # pragma: no cover
        raise NotImplementedError

    @property
    def half_extents(self) -> Tuple[float, ...]:  # pragma: no cover
        """Half lengths of the bounding box of the domain, centered at the origin."""
        raise NotImplementedError

    @property
    def strip_half_width(self) -> Optional[float]:
        """Half width b of the bounded direction of a strip or slab, if the domain has one."""
        return None

    @property
    def circumradius(self) -> float:
        """Largest distance from the origin to a point of the closed domain."""
        return float(math.sqrt(sum(e * e for e in self.half_extents)))

    def validate_parameters(self) -> None:  # pragma: no cover
        raise NotImplementedError

    def level(self, points: np.ndarray) -> np.ndarray:  # pragma: no cover
        """Dimensionless level function: negative inside, zero on the boundary, positive outside."""
        raise NotImplementedError

    def exit_distance(self, points: np.ndarray, axis: int, sign: int) -> np.ndarray:  # pragma: no cover
        """Distance from interior points to the boundary along the ray ``sign * e_axis``."""
        raise NotImplementedError

    def default_grid(self, h: float) -> GridSpec:  # pragma: no cover
        raise NotImplementedError

    def contains(self, points: np.ndarray) -> np.ndarray:
        return self.level(np.atleast_2d(points)) < 0.0


def _ellipsoid_exit(a: np.ndarray, radius: float, points: np.ndarray, axis: int, sign: int) -> np.ndarray:
    others = np.delete(np.arange(len(a)), axis)
    remaining = radius**2 - (points[:, others] ** 2) @ a[others]
    edge = np.sqrt(np.maximum(remaining, 0.0) / a[axis])
    return edge - sign * points[:, axis]


class RectangleDomain(_Domain):
    """The rectangle [-L, L] x [-b, b]."""

    kind: Literal["rectangle"] = "rectangle"
    L: float
    b: float

    @property
    def dim(self) -> int:
        return 2

    @property
    def half_extents(self) -> Tuple[float, ...]:
        return (self.L, self.b)

    @property
    def strip_half_width(self) -> Optional[float]:
        return self.b

    def validate_parameters(self) -> None:
        if not (self.L > 0 and self.b > 0):
            raise ConfigurationError(f"Rectangle needs L > 0 and b > 0, got L={self.L}, b={self.b}.")

    def level(self, points: np.ndarray) -> np.ndarray:
        return np.maximum(np.abs(points[:, 0]) / self.L, np.abs(points[:, 1]) / self.b) - 1.0

    def exit_distance(self, points: np.ndarray, axis: int, sign: int) -> np.ndarray:
        return self.half_extents[axis] - sign * points[:, axis]

    def default_grid(self, h: float) -> GridSpec:
        return GridSpec.node_aligned(self.half_extents, h)


class EllipsoidDomain(_Domain):
    """The ellipsoidal region sum_i a_i x_i^2 < R^2."""

    kind: Literal["ellipsoid"] = "ellipsoid"
    a: Tuple[float, ...]
    R: float

    @property
    def dim(self) -> int:
        return len(self.a)

    @property
    def semi_axes(self) -> Tuple[float, ...]:
        return tuple(self.R / math.sqrt(ai) for ai in self.a)

    @property
    def half_extents(self) -> Tuple[float, ...]:
        return self.semi_axes

    def validate_parameters(self) -> None:
        if not 1 <= len(self.a) <= 3:
            raise ConfigurationError(f"Ellipsoids are supported in dimensions 1 to 3, got {len(self.a)}.")
        if self.R <= 0:
            raise ConfigurationError(f"Ellipsoid radius must be positive, got R={self.R}.")
        if any(ai <= 0 for ai in self.a):
            raise ConfigurationError(
                f"All ellipsoid coefficients must be positive, got a={list(self.a)}; "
                "drop the zero coefficients and solve in the reduced dimension instead."
            )

    def level(self, points: np.ndarray) -> np.ndarray:
        return (points**2) @ np.asarray(self.a) / self.R**2 - 1.0

    def exit_distance(self, points: np.ndarray, axis: int, sign: int) -> np.ndarray:
        return _ellipsoid_exit(np.asarray(self.a), self.R, points, axis, sign)

    def default_grid(self, h: float) -> GridSpec:
        return GridSpec.enclosing(self.semi_axes, h)


class EllipsoidSlabDomain(_Domain):
    """The product of the ellipsoid sum_i a_i x_i^2 < R^2 in R^n with the slab |s| < b."""

    kind: Literal["ellipsoid_slab"] = "ellipsoid_slab"
    a: Tuple[float, ...]
    R: float
    b: float

    @property
    def dim(self) -> int:
        return len(self.a) + 1

    @property
    def semi_axes(self) -> Tuple[float, ...]:
        return tuple(self.R / math.sqrt(ai) for ai in self.a)

    @property
    def half_extents(self) -> Tuple[float, ...]:
        return self.semi_axes + (self.b,)

    @property
    def strip_half_width(self) -> Optional[float]:
        return self.b

    def validate_parameters(self) -> None:
        if not 1 <= len(self.a) <= 2:
            raise ConfigurationError(f"Ellipsoid x slab domains need 1 or 2 ellipsoid axes, got {len(self.a)}.")
        if self.R <= 0 or self.b <= 0:
            raise ConfigurationError(f"Need R > 0 and b > 0, got R={self.R}, b={self.b}.")
        if any(ai <= 0 for ai in self.a):
            raise ConfigurationError(
                f"All ellipsoid coefficients must be positive, got a={list(self.a)}; "
                "drop the zero coefficients and solve in the reduced dimension instead."
            )

    def level(self, points: np.ndarray) -> np.ndarray:
        ellipsoid = (points[:, :-1] ** 2) @ np.asarray(self.a) / self.R**2 - 1.0
        slab = np.abs(points[:, -1]) / self.b - 1.0
        return np.maximum(ellipsoid, slab)

    def exit_distance(self, points: np.ndarray, axis: int, sign: int) -> np.ndarray:
        if axis == len(self.a):
            return self.b - sign * points[:, axis]
        return _ellipsoid_exit(np.asarray(self.a), self.R, points[:, :-1], axis, sign)

    def default_grid(self, h: float) -> GridSpec:
        ellipsoid = GridSpec.enclosing(self.semi_axes, h)
        slab = GridSpec.node_aligned((self.b,), h)
        return GridSpec(
            lower=ellipsoid.lower + slab.lower,
            upper=ellipsoid.upper + slab.upper,
            nodes=ellipsoid.nodes + slab.nodes,
        )


DomainDescriptor = Annotated[
    Union[RectangleDomain, EllipsoidDomain, EllipsoidSlabDomain],
    Field(discriminator="kind"),
]


def shift(array: np.ndarray, axis: int, step: int, fill) -> np.ndarray:
    """Returns ``out`` with ``out[p] = array[p + step * e_axis]`` and ``fill`` where that leaves the grid."""
    out = np.full_like(array, fill)
    n = array.shape[axis]
    src = [slice(None)] * array.ndim
    dst = [slice(None)] * array.ndim
    if step > 0:
        src[axis] = slice(step, n)
        dst[axis] = slice(0, n - step)
    else:
        src[axis] = slice(0, n + step)
        dst[axis] = slice(-step, n)
    out[tuple(dst)] = array[tuple(src)]
    return out


@dataclass(frozen=True, eq=False)
class DomainMask:
    """
    Node classification of a grid against an analytic domain, with embedded-boundary geometry.

    ``fractions[axis, d]`` holds, at every INTERIOR node, the distance to the next node or boundary
    crossing in direction d (0 = negative, 1 = positive) in units of the axis spacing; it is 1 where
    that neighbor is INTERIOR. ``crossing_index`` points into ``crossing_points`` for stencil arms
    that end on the boundary, and ``node_crossing`` does the same for nodes lying on the boundary.
    """

    descriptor: DomainDescriptor
    grid: GridSpec
    classes: np.ndarray
    fractions: np.ndarray
    crossing_index: np.ndarray
    crossing_points: np.ndarray
    on_boundary: np.ndarray
    node_crossing: np.ndarray

    @cached_property
    def interior(self) -> np.ndarray:
        return self.classes == NodeClass.INTERIOR

    @cached_property
    def non_exterior(self) -> np.ndarray:
        return self.classes != NodeClass.EXTERIOR

    @cached_property
    def known(self) -> np.ndarray:
        """Nodes whose value is available to stencils: INTERIOR or exactly on the boundary."""
        return self.interior | (self.on_boundary & self.non_exterior)

    @property
    def interior_count(self) -> int:
        return int(self.interior.sum())

    def collar(self, width: int = 1) -> np.ndarray:
        """INTERIOR nodes within ``width`` axis steps of a non-INTERIOR node."""
        structure = ndimage.generate_binary_structure(self.grid.dim, 1)
        inner = ndimage.binary_erosion(self.interior, structure=structure, iterations=width, border_value=0)
        return self.interior & ~inner

    def core(self, width: int = 1) -> np.ndarray:
        """INTERIOR nodes at least ``width + 1`` axis steps away from every non-INTERIOR node."""
        return self.interior & ~self.collar(width)

    def check_invariants(self) -> None:
        interior_fractions = self.fractions[:, :, self.interior]
        if interior_fractions.size and not (
            np.all(interior_fractions > 0.0) and np.all(interior_fractions <= 1.0)
        ):
            raise ConfigurationError("Embedded-boundary fractions must lie in (0, 1].")
        inside = self.descriptor.level(self.grid.points()).reshape(self.grid.shape) < -LEVEL_TOLERANCE
        if not np.array_equal(inside, self.interior):
            raise ConfigurationError("Node classes disagree with the analytic inside test.")
        for axis in range(self.grid.dim):
            for step in (-1, 1):
                neighbor = shift(self.classes, axis, step, NodeClass.EXTERIOR)
                if np.any(self.interior & (neighbor == NodeClass.EXTERIOR)):
                    raise ConfigurationError("An INTERIOR node has an EXTERIOR axis neighbor.")


def _check_containment(descriptor: DomainDescriptor, grid: GridSpec) -> None:
    if grid.dim != descriptor.dim:
        raise ConfigurationError(f"Grid dimension {grid.dim} does not match domain dimension {descriptor.dim}.")
    for axis, extent in enumerate(descriptor.half_extents):
        slack = 1e-9 * max(1.0, extent)
        if grid.lower[axis] > -extent + slack or grid.upper[axis] < extent - slack:
            raise ConfigurationError(
                f"Grid extent [{grid.lower[axis]}, {grid.upper[axis]}] on axis {axis} does not contain "
                f"the domain extent [{-extent}, {extent}]."
            )


def build_domain(descriptor: DomainDescriptor, grid: GridSpec) -> DomainMask:
    """
    Classifies the nodes of ``grid`` against ``descriptor`` and computes embedded-boundary fractions.

    Raises:
        ConfigurationError: if parameters are invalid or the grid does not contain the domain.
    """
    descriptor.validate_parameters()
    _check_containment(descriptor, grid)

    shape = grid.shape
    points = grid.points()
    level = descriptor.level(points).reshape(shape)
    interior = level < -LEVEL_TOLERANCE
    on_boundary = np.abs(level) <= LEVEL_TOLERANCE

    neighborhood = np.ones((3,) * grid.dim, dtype=bool)
    near = ndimage.binary_dilation(interior, structure=neighborhood)
    classes = np.full(shape, NodeClass.EXTERIOR, dtype=np.int8)
    classes[near] = NodeClass.BOUNDARY_ADJACENT
    classes[interior] = NodeClass.INTERIOR

    fractions = np.full((grid.dim, 2) + shape, np.nan)
    crossing_index = np.full((grid.dim, 2) + shape, -1, dtype=np.int64)
    crossing_chunks = []
    offset = 0
    spacing = grid.spacing
    for axis in range(grid.dim):
        for d, sign in enumerate((-1, 1)):
            neighbor_inside = shift(interior, axis, sign, False)
            fractions[axis, d][interior & neighbor_inside] = 1.0
            arms = interior & ~neighbor_inside
            arm_points = points[arms.ravel()]
            distance = descriptor.exit_distance(arm_points, axis, sign)
            theta = np.clip(distance / spacing[axis], MIN_FRACTION, 1.0)
            fractions[axis, d][arms] = theta
            crossings = arm_points.copy()
            crossings[:, axis] += sign * theta * spacing[axis]
            crossing_index[axis, d][arms] = np.arange(offset, offset + len(crossings))
            crossing_chunks.append(crossings)
            offset += len(crossings)

    node_crossing = np.full(shape, -1, dtype=np.int64)
    boundary_nodes = on_boundary & near & ~interior
    count = int(boundary_nodes.sum())
    node_crossing[boundary_nodes] = np.arange(offset, offset + count)
    crossing_chunks.append(points[boundary_nodes.ravel()])

    crossing_points = np.concatenate(crossing_chunks, axis=0) if crossing_chunks else np.zeros((0, grid.dim))
    return DomainMask(
        descriptor=descriptor,
        grid=grid,
        classes=classes,
        fractions=fractions,
        crossing_index=crossing_index,
        crossing_points=crossing_points,
        on_boundary=on_boundary,
        node_crossing=node_crossing,
    )
