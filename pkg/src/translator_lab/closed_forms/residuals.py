# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import numpy as np

from translator_lab.closed_forms.surfaces import ClosedFormSurface
from translator_lab.grid.domains import DomainMask
from translator_lab.grid.fields import ScalarField
from translator_lab.pde.operator import residual


def sample_surface(surface: ClosedFormSurface, mask: DomainMask) -> ScalarField:
    """The surface sampled on ``mask``, with its exact values as boundary data."""
    return ScalarField.sample(mask, surface.values)


def residual_of_closed_form(surface: ClosedFormSurface, mask: DomainMask, lam: float = 1.0) -> np.ndarray:
    """
    The discrete translator residual of a sampled closed form.

    Raises:
        DomainError: if the mask reaches outside the surface's natural domain.
    """
    return residual(sample_surface(surface, mask), lam)
