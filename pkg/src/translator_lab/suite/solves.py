# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""Dirichlet solves on rectangles, ellipsoids and ellipsoid x slab domains."""

import math
from typing import Optional, Sequence, Tuple

from translator_lab.cache import SolveCache
from translator_lab.exceptions import ConfigurationError
from translator_lab.grid.domains import (
    DomainDescriptor,
    EllipsoidDomain,
    EllipsoidSlabDomain,
    RectangleDomain,
    build_domain,
)
from translator_lab.grid.fields import ScalarField
from translator_lab.grid.spec import SymmetryFlags
from translator_lab.pde.models import ContinuationSchedule, NewtonSettings, SolveReport
from translator_lab.pde.solver import solve_dirichlet

SIMPLEX_TOLERANCE = 1e-12

Solution = Tuple[ScalarField, SolveReport]


def _check_simplex(a: Sequence[float]) -> None:
    if abs(math.fsum(a) - 1.0) > SIMPLEX_TOLERANCE:
        raise ConfigurationError(f"Coefficients {tuple(a)} must sum to 1.")


def solve_domain(
    descriptor: DomainDescriptor,
    h: float,
    schedule: Optional[ContinuationSchedule] = None,
    settings: Optional[NewtonSettings] = None,
    cache: Optional[SolveCache] = None,
    initial_guess: Optional[ScalarField] = None,
) -> Solution:
    """Solves on the descriptor's default grid with even symmetry in every axis."""
    if h <= 0:
        raise ConfigurationError(f"Grid spacing must be positive, got {h}.")
    descriptor.validate_parameters()
    mask = build_domain(descriptor, descriptor.default_grid(h))
    symmetry = SymmetryFlags.all_axes(mask.grid.dim)
    schedule = schedule or ContinuationSchedule.uniform()
    settings = settings or NewtonSettings()
    key = None
    if cache is not None and initial_guess is None:
        key = SolveCache.key(mask, schedule, settings, symmetry)
        hit = cache.get(key, mask)
        if hit is not None:
            return hit
    field, report = solve_dirichlet(mask, schedule, settings, symmetry, initial_guess=initial_guess)
    if key is not None:
        cache.put(key, field, report)
    return field, report


def solve_rectangle(L: float, b: float, h: float, **kwargs) -> Solution:
    """The translator over [-L, L] x [-b, b] with zero boundary values."""
    return solve_domain(RectangleDomain(L=L, b=b), h, **kwargs)


def solve_ellipsoid(a: Sequence[float], R: float, h: float, **kwargs) -> Solution:
    """The translator over {sum a_i x_i^2 < R^2}; ``a`` must lie on the open simplex."""
    _check_simplex(a)
    return solve_domain(EllipsoidDomain(a=tuple(a), R=R), h, **kwargs)


def solve_slab(a: Sequence[float], R: float, b: float, h: float, **kwargs) -> Solution:
    """The translator over the ellipsoid {sum a_i x_i^2 < R^2} times [-b, b]."""
    _check_simplex(a)
    return solve_domain(EllipsoidSlabDomain(a=tuple(a), R=R, b=b), h, **kwargs)
