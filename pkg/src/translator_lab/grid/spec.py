# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import math
from typing import List, Self, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from translator_lab.exceptions import ConfigurationError

_SYMMETRY_ATOL = 1e-12


class GridSpec(BaseModel):
    """
    A structured tensor grid over a box in R^n, n in {1, 2, 3}.

    Nodes are uniformly spaced per axis; the spacing is derived from the extent and node count.
    """

    model_config = ConfigDict(frozen=True)

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    nodes: Tuple[int, ...]

    @model_validator(mode="after")
    def _validate_axes(self) -> Self:
        if not 1 <= len(self.nodes) <= 3:
            raise ValueError(f"Grid dimension must be 1, 2 or 3, got {len(self.nodes)}.")
        if not len(self.lower) == len(self.upper) == len(self.nodes):
            raise ValueError("lower, upper and nodes must have the same length.")
        for axis, (lo, hi, count) in enumerate(zip(self.lower, self.upper, self.nodes)):
            if not hi > lo:
                raise ValueError(f"Axis {axis}: upper bound {hi} must exceed lower bound {lo}.")
            if count < 3:
                raise ValueError(f"Axis {axis}: at least 3 nodes are required, got {count}.")
            if math.isclose(lo, -hi, abs_tol=_SYMMETRY_ATOL) and count % 2 == 0:
                raise ValueError(f"Axis {axis}: a symmetric extent needs an odd node count so 0 is a node.")
        return self

    @classmethod
    def symmetric(cls, half_extents: Sequence[float], spacing: Sequence[float]) -> "GridSpec":
        """Builds the grid over prod [-e_i, e_i] with exactly the requested spacing per axis."""
        half_nodes = [int(round(e / h)) for e, h in zip(half_extents, spacing)]
        for e, h, m in zip(half_extents, spacing, half_nodes):
            if m < 1 or not math.isclose(m * h, e, rel_tol=1e-9):
                raise ConfigurationError(f"Half extent {e} is not a positive multiple of spacing {h}.")
        return cls(
            lower=tuple(-m * h for m, h in zip(half_nodes, spacing)),
            upper=tuple(m * h for m, h in zip(half_nodes, spacing)),
            nodes=tuple(2 * m + 1 for m in half_nodes),
        )

    @classmethod
    def node_aligned(cls, half_extents: Sequence[float], h: float) -> "GridSpec":
        """Symmetric grid whose extent equals the half extents, spacing as close to ``h`` as possible."""
        half_nodes = [max(1, int(math.ceil(e / h - 1e-9))) for e in half_extents]
        return cls(
            lower=tuple(-e for e in half_extents),
            upper=tuple(half_extents),
            nodes=tuple(2 * m + 1 for m in half_nodes),
        )

    @classmethod
    def enclosing(cls, half_extents: Sequence[float], h: float) -> "GridSpec":
        """Symmetric grid with spacing exactly ``h`` whose extent strictly contains the half extents."""
        half_nodes = [int(math.floor(e / h + 1e-9)) + 1 for e in half_extents]
        return cls.symmetric([m * h for m in half_nodes], [h] * len(half_nodes))

    @property
    def dim(self) -> int:
        return len(self.nodes)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.nodes

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple((hi - lo) / (n - 1) for lo, hi, n in zip(self.lower, self.upper, self.nodes))

    @property
    def center_index(self) -> Tuple[int, ...]:
        """Index of the node closest to the origin on every axis."""
        return tuple(int(round(-lo / h)) for lo, h in zip(self.lower, self.spacing))

    def is_symmetric(self, axis: int) -> bool:
        return math.isclose(self.lower[axis], -self.upper[axis], abs_tol=_SYMMETRY_ATOL)

    def axis_coordinates(self, axis: int) -> np.ndarray:
        # linspace keeps the end points exact, so boundary nodes sit exactly on the extent
        return np.linspace(self.lower[axis], self.upper[axis], self.nodes[axis])

    def coordinates(self) -> List[np.ndarray]:
        """Coordinate arrays of every node, one array of grid shape per axis ("ij" indexing)."""
        return list(np.meshgrid(*[self.axis_coordinates(i) for i in range(self.dim)], indexing="ij"))

    def points(self) -> np.ndarray:
        """All node coordinates as an (N, dim) array in lexicographic node order."""
        return np.stack([c.ravel() for c in self.coordinates()], axis=1)

    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))


class SymmetryFlags(BaseModel):
    """Per-axis flags declaring that a field is even in that coordinate."""

    model_config = ConfigDict(frozen=True)

    even: Tuple[bool, ...]

    @classmethod
    def all_axes(cls, dim: int) -> "SymmetryFlags":
        return cls(even=(True,) * dim)

    @classmethod
    def none(cls, dim: int) -> "SymmetryFlags":
        return cls(even=(False,) * dim)

    @property
    def any(self) -> bool:
        return any(self.even)

    def validate_for(self, grid: GridSpec) -> None:
        """Raises ConfigurationError if a flag is set on an axis whose extent is not symmetric about 0."""
        if len(self.even) != grid.dim:
            raise ConfigurationError(f"Expected {grid.dim} symmetry flags, got {len(self.even)}.")
        for axis, flag in enumerate(self.even):
            if flag and not grid.is_symmetric(axis):
                raise ConfigurationError(
                    f"Axis {axis} extent [{grid.lower[axis]}, {grid.upper[axis]}] is not symmetric about 0."
                )
