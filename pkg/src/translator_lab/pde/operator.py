# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
The discrete translator operator in nondivergence form.

For a speed lam in [0, 1] and A = 1 + |Du|^2,

    R(u) = A tr(D^2 u) - D_i u D_j u D_ij u + lam A,

which is the minimal surface operator at lam = 0 and the translator equation at lam = 1.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.sparse as sp

from translator_lab.grid.domains import DomainMask
from translator_lab.grid.fields import ScalarField
from translator_lab.grid.spec import SymmetryFlags
from translator_lab.grid.stencils import StencilOperators


@dataclass(frozen=True)
class _Derivatives:
    gradient: List[np.ndarray]
    hessian: List[List[np.ndarray]]

    @property
    def slope_factor(self) -> np.ndarray:
        return 1.0 + sum(g * g for g in self.gradient)

    @property
    def trace(self) -> np.ndarray:
        return sum(self.hessian[i][i] for i in range(len(self.gradient)))


class TranslatorOperator:
    """Residual and exact Jacobian of the translator equation on one mask."""

    def __init__(
        self,
        mask: DomainMask,
        symmetry: Optional[SymmetryFlags] = None,
        boundary_values: Optional[np.ndarray] = None,
    ):
        self.mask = mask
        self.stencils = StencilOperators(mask, symmetry)
        self.boundary_values = boundary_values
        if boundary_values is not None and len(boundary_values) != self.stencils.n_boundary:
            raise ValueError("Boundary data must have one value per crossing point.")

    @property
    def n_unknowns(self) -> int:
        return self.stencils.n_unknowns

    @property
    def dim(self) -> int:
        return self.stencils.dim

    def derivatives(self, u: np.ndarray) -> _Derivatives:
        ops, g = self.stencils, self.boundary_values
        gradient = [ops.first[i].apply(u, g) for i in range(self.dim)]
        hessian = [[ops.mixed(i, j).apply(u, g) for j in range(self.dim)] for i in range(self.dim)]
        return _Derivatives(gradient=gradient, hessian=hessian)

    def residual(self, u: np.ndarray, lam: float) -> np.ndarray:
        d = self.derivatives(u)
        a = d.slope_factor
        out = a * d.trace + lam * a
        for i in range(self.dim):
            for j in range(self.dim):
                out -= d.gradient[i] * d.gradient[j] * d.hessian[i][j]
        return out

    def roundoff_scale(self, u: np.ndarray) -> float:
        """
        Size of the terms that cancel in ``residual``: twice the largest slope factor times the
        largest height over the squared spacings. Round-off in the residual is eps times this.
        """
        if not len(u):
            return 0.0
        peak = float(np.max(np.abs(u)))
        if self.boundary_values is not None and len(self.boundary_values):
            peak = max(peak, float(np.max(np.abs(self.boundary_values))))
        slope_factor = float(np.max(self.derivatives(u).slope_factor))
        return 2.0 * slope_factor * (1.0 + peak) * sum(1.0 / h**2 for h in self.mask.grid.spacing)

    def source(self, u: np.ndarray) -> np.ndarray:
        """dR/dlam, the slope factor 1 + |Du|^2."""
        return self.derivatives(u).slope_factor

    def jacobian(self, u: np.ndarray, lam: float) -> sp.csr_matrix:
        ops = self.stencils
        d = self.derivatives(u)
        a = d.slope_factor
        trace = d.trace
        jac = sp.csr_matrix((self.n_unknowns, self.n_unknowns))
        for i in range(self.dim):
            for j in range(self.dim):
                coef = (a if i == j else 0.0) - d.gradient[i] * d.gradient[j]
                jac = jac + sp.diags(coef) @ ops.mixed(i, j).interior
        for k in range(self.dim):
            coupling = sum(d.gradient[j] * d.hessian[k][j] for j in range(self.dim))
            coef = 2.0 * d.gradient[k] * (trace + lam) - 2.0 * coupling
            jac = jac + sp.diags(coef) @ ops.first[k].interior
        return jac.tocsr()

    def unknowns(self, field: ScalarField) -> np.ndarray:
        return self.stencils.unknowns_from_values(field.values)

    def to_field(self, u: np.ndarray) -> ScalarField:
        """Full-grid field with zero boundary values (or this operator's boundary data)."""
        values = self.stencils.scatter(u, fill=0.0)
        values[~self.mask.non_exterior] = np.nan
        return ScalarField(mask=self.mask, values=values, boundary_values=self.boundary_values)


def _operator_for(field: ScalarField) -> TranslatorOperator:
    field = field.full()
    return TranslatorOperator(field.mask, boundary_values=field.boundary_values)


def residual(field: ScalarField, lam: float) -> np.ndarray:
    """
    Discrete translator residual at every INTERIOR node.

    Returns:
        Array of grid shape with NaN outside the INTERIOR nodes.
    """
    field = field.full()
    op = _operator_for(field)
    return op.stencils.scatter(op.residual(op.unknowns(field), lam))


def linearize(field: ScalarField, lam: float) -> sp.csr_matrix:
    """Jacobian of ``residual`` with respect to the INTERIOR values, in lexicographic node order."""
    field = field.full()
    op = _operator_for(field)
    return op.jacobian(op.unknowns(field), lam)
