# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from translator_lab.grid.domains import (
    DomainDescriptor,
    DomainMask,
    EllipsoidDomain,
    EllipsoidSlabDomain,
    NodeClass,
    RectangleDomain,
    build_domain,
)
from translator_lab.grid.fields import ScalarField, reduce_to_octant, reflect_full
from translator_lab.grid.spec import GridSpec, SymmetryFlags
from translator_lab.grid.stencils import StencilOperators, gradient, hessian

__all__ = [
    "DomainDescriptor",
    "DomainMask",
    "EllipsoidDomain",
    "EllipsoidSlabDomain",
    "GridSpec",
    "NodeClass",
    "RectangleDomain",
    "ScalarField",
    "StencilOperators",
    "SymmetryFlags",
    "build_domain",
    "gradient",
    "hessian",
    "reduce_to_octant",
    "reflect_full",
]
