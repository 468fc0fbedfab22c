# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Sparse finite-difference operators on masked tensor grids.

Every derivative is an affine map of the unknown vector (values at INTERIOR nodes) and the
boundary data vector (values at the mask's crossing points):

    D u = A_int @ u + A_bnd @ g

Axis derivatives use three-point Shortley-Weller stencils whose arm lengths are the embedded
boundary fractions, so the Dirichlet data enters at the analytic boundary. Mixed derivatives use
the four diagonal nodes where all of them carry a value and fall back to a first-order one-sided
quadrant stencil elsewhere.
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from translator_lab.grid.domains import DomainMask, shift
from translator_lab.grid.spec import SymmetryFlags
from translator_lab.logging import logger


@dataclass(frozen=True)
class LinearStencil:
    """One discrete derivative as a pair of sparse matrices (unknowns, boundary data)."""

    interior: sp.csr_matrix
    boundary: sp.csr_matrix

    def apply(self, u: np.ndarray, g: Optional[np.ndarray] = None) -> np.ndarray:
        out = self.interior @ u
        if g is not None and self.boundary.nnz:
            out = out + self.boundary @ g
        return out


class _Triplets:
    """COO accumulator for one LinearStencil."""

    def __init__(self, n_rows: int, n_unknowns: int, n_boundary: int):
        self.shape_int = (n_rows, n_unknowns)
        self.shape_bnd = (n_rows, n_boundary)
        self.int_parts: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = []
        self.bnd_parts: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = []

    def add(self, rows: np.ndarray, int_cols: np.ndarray, bnd_cols: np.ndarray, coef: np.ndarray) -> None:
        """Adds ``coef`` at each row, routed to the unknown or the boundary column that is valid (>= 0)."""
        coef = np.broadcast_to(coef, rows.shape)
        use_int = int_cols >= 0
        use_bnd = ~use_int & (bnd_cols >= 0)
        self.int_parts.append((rows[use_int], int_cols[use_int], coef[use_int]))
        self.bnd_parts.append((rows[use_bnd], bnd_cols[use_bnd], coef[use_bnd]))

    def build(self) -> LinearStencil:
        return LinearStencil(
            interior=_assemble(self.int_parts, self.shape_int),
            boundary=_assemble(self.bnd_parts, self.shape_bnd),
        )


def _assemble(parts: List[Tuple[np.ndarray, np.ndarray, np.ndarray]], shape: Tuple[int, int]) -> sp.csr_matrix:
    if not parts:
        return sp.csr_matrix(shape)
    rows = np.concatenate([p[0] for p in parts])
    cols = np.concatenate([p[1] for p in parts])
    data = np.concatenate([p[2] for p in parts])
    # duplicates are summed by the COO -> CSR conversion
    return sp.coo_matrix((data, (rows, cols)), shape=shape).tocsr()


class StencilOperators:
    """
    First, second and mixed difference operators for one mask.

    With symmetry flags, unknowns live only on the non-negative half of each flagged axis and any
    stencil reaching across a symmetry plane reads the mirrored unknown, which imposes the even
    reflection (a discrete homogeneous Neumann condition) exactly.
    """

    def __init__(self, mask: DomainMask, symmetry: Optional[SymmetryFlags] = None):
        grid = mask.grid
        self.mask = mask
        self.symmetry = symmetry or SymmetryFlags.none(grid.dim)
        self.symmetry.validate_for(grid)

        shape = grid.shape
        center = grid.center_index
        reduced_region = np.ones(shape, dtype=bool)
        mirror_maps = []
        for axis, flag in enumerate(self.symmetry.even):
            idx = np.arange(shape[axis])
            if flag:
                keep = np.zeros(shape[axis], dtype=bool)
                keep[center[axis] :] = True
                reduced_region &= keep.reshape([-1 if i == axis else 1 for i in range(grid.dim)])
                mirror_maps.append(center[axis] + np.abs(idx - center[axis]))
            else:
                mirror_maps.append(idx)

        row_region = mask.interior & reduced_region
        self.row_nodes = np.flatnonzero(row_region.ravel())
        self.n_unknowns = len(self.row_nodes)
        own_index = np.full(shape, -1, dtype=np.int64)
        own_index[row_region] = np.arange(self.n_unknowns)
        column_of = own_index[np.ix_(*mirror_maps)]
        column_of[~mask.interior] = -1
        self.column_of = column_of
        self.n_boundary = len(mask.crossing_points)

        self._row_mask = row_region
        self._rows = np.arange(self.n_unknowns)
        self.first: List[LinearStencil] = []
        self.second: List[LinearStencil] = []
        self.cross: Dict[Tuple[int, int], LinearStencil] = {}
        self.fallback_rows: Dict[Tuple[int, int], int] = {}
        self._build_axis_operators()
        self._build_cross_operators()

    @property
    def dim(self) -> int:
        return self.mask.grid.dim

    def mixed(self, i: int, j: int) -> LinearStencil:
        """The (i, j) second derivative; ``mixed(i, i)`` is the pure second derivative."""
        if i == j:
            return self.second[i]
        return self.cross[(min(i, j), max(i, j))]

    def unknowns_from_values(self, values: np.ndarray) -> np.ndarray:
        """Extracts the unknown vector from grid-shaped node values."""
        return values.ravel()[self.row_nodes]

    def scatter(self, vector: np.ndarray, fill: float = np.nan) -> np.ndarray:
        """Places a per-row vector on the grid; mirrored INTERIOR nodes receive their representative's value."""
        out = np.full(self.mask.grid.shape, fill)
        interior = self.mask.interior
        out[interior] = vector[self.column_of[interior]]
        return out

    def _lookup(self, offset: Tuple[int, ...]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """For every row: (node carries a value, unknown column, boundary column) at ``p + offset``."""
        known = self.mask.known
        cols = self.column_of
        bnd = self.mask.node_crossing
        for axis, step in enumerate(offset):
            if step:
                known = shift(known, axis, step, False)
                cols = shift(cols, axis, step, -1)
                bnd = shift(bnd, axis, step, -1)
        region = self._row_mask
        return known[region], cols[region], bnd[region]

    def _build_axis_operators(self) -> None:
        mask = self.mask
        spacing = mask.grid.spacing
        region = self._row_mask
        rows = self._rows
        own = self.column_of[region]
        no_bnd = np.full(self.n_unknowns, -1, dtype=np.int64)
        for axis in range(self.dim):
            h = spacing[axis]
            hm = mask.fractions[axis, 0][region] * h
            hp = mask.fractions[axis, 1][region] * h
            cm_int = shift(self.column_of, axis, -1, -1)[region]
            cp_int = shift(self.column_of, axis, 1, -1)[region]
            cm_bnd = mask.crossing_index[axis, 0][region]
            cp_bnd = mask.crossing_index[axis, 1][region]
            # an arm ending on the boundary reads the crossing value, never the node beyond it
            cm_int = np.where(cm_bnd >= 0, -1, cm_int)
            cp_int = np.where(cp_bnd >= 0, -1, cp_int)

            first = _Triplets(self.n_unknowns, self.n_unknowns, self.n_boundary)
            first.add(rows, own, no_bnd, (hp - hm) / (hm * hp))
            first.add(rows, cp_int, cp_bnd, hm / (hp * (hm + hp)))
            first.add(rows, cm_int, cm_bnd, -hp / (hm * (hm + hp)))
            self.first.append(first.build())

            second = _Triplets(self.n_unknowns, self.n_unknowns, self.n_boundary)
            second.add(rows, own, no_bnd, -2.0 / (hm * hp))
            second.add(rows, cp_int, cp_bnd, 2.0 / (hp * (hm + hp)))
            second.add(rows, cm_int, cm_bnd, 2.0 / (hm * (hm + hp)))
            self.second.append(second.build())

    def _build_cross_operators(self) -> None:
        spacing = self.mask.grid.spacing
        coords = self.mask.grid.coordinates()
        region = self._row_mask
        rows = self._rows
        own = self.column_of[region]
        no_bnd = np.full(self.n_unknowns, -1, dtype=np.int64)
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                scale = 1.0 / (spacing[i] * spacing[j])
                triplets = _Triplets(self.n_unknowns, self.n_unknowns, self.n_boundary)

                def offset(si: int, sj: int) -> Tuple[int, ...]:
                    step = [0] * self.dim
                    step[i], step[j] = si, sj
                    return tuple(step)

                diagonals = {(si, sj): self._lookup(offset(si, sj)) for si, sj in product((-1, 1), repeat=2)}
                axis_i = {si: self._lookup(offset(si, 0)) for si in (-1, 1)}
                axis_j = {sj: self._lookup(offset(0, sj)) for sj in (-1, 1)}

                central = np.logical_and.reduce([diagonals[q][0] for q in diagonals])
                for (si, sj), (_, cols, bnd) in diagonals.items():
                    r = central
                    triplets.add(rows[r], cols[r], bnd[r], si * sj * 0.25 * scale)

                # one-sided quadrant stencils, preferring the quadrant that points toward the origin
                xi = coords[i][region]
                xj = coords[j][region]
                best_score = np.full(self.n_unknowns, -np.inf)
                choice = np.full(self.n_unknowns, -1)
                quadrants = list(product((-1, 1), repeat=2))
                for q, (si, sj) in enumerate(quadrants):
                    usable = ~central & diagonals[(si, sj)][0] & axis_i[si][0] & axis_j[sj][0]
                    score = np.where(usable, -(si * xi + sj * xj), -np.inf)
                    better = score > best_score
                    best_score = np.where(better, score, best_score)
                    choice = np.where(better, q, choice)
                for q, (si, sj) in enumerate(quadrants):
                    r = choice == q
                    if not np.any(r):
                        continue
                    sign = si * sj * scale
                    _, dcols, dbnd = diagonals[(si, sj)]
                    _, icols, ibnd = axis_i[si]
                    _, jcols, jbnd = axis_j[sj]
                    triplets.add(rows[r], dcols[r], dbnd[r], sign)
                    triplets.add(rows[r], icols[r], ibnd[r], -sign)
                    triplets.add(rows[r], jcols[r], jbnd[r], -sign)
                    triplets.add(rows[r], own[r], no_bnd[r], sign)

                missing = int(np.sum(~central & (choice < 0)))
                self.fallback_rows[(i, j)] = int(np.sum(~central))
                if missing:
                    logger.debug(f"Mixed derivative ({i},{j}) unavailable at {missing} nodes; set to zero there.")
                self.cross[(i, j)] = triplets.build()


def _full_operators(field) -> Tuple[StencilOperators, np.ndarray, np.ndarray]:
    ops = StencilOperators(field.mask)
    u = ops.unknowns_from_values(field.values)
    return ops, u, field.boundary_data()


def gradient(field) -> np.ndarray:
    """
    Discrete gradient at INTERIOR nodes.

    Returns:
        Array of shape (dim, *grid.shape) with NaN outside the INTERIOR nodes.
    """
    field = field.full()
    ops, u, g = _full_operators(field)
    return np.stack([ops.scatter(ops.first[axis].apply(u, g)) for axis in range(ops.dim)])


def hessian(field) -> np.ndarray:
    """
    Discrete Hessian at INTERIOR nodes.

    Returns:
        Array of shape (dim, dim, *grid.shape) with NaN outside the INTERIOR nodes.
    """
    field = field.full()
    ops, u, g = _full_operators(field)
    dim = ops.dim
    out = np.empty((dim, dim) + field.mask.grid.shape)
    for i in range(dim):
        for j in range(i, dim):
            values = ops.scatter(ops.mixed(i, j).apply(u, g))
            out[i, j] = values
            out[j, i] = values
    return out
