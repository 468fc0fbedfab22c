# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import math

import numpy as np
import pytest

from translator_lab.closed_forms.residuals import residual_of_closed_form, sample_surface
from translator_lab.closed_forms.surfaces import GrimReaper, Plane, TiltedGrimReaper
from translator_lab.exceptions import DomainError
from translator_lab.grid.domains import RectangleDomain, build_domain


def _square(h):
    domain = RectangleDomain(L=1.0, b=1.0)
    return build_domain(domain, domain.default_grid(h))


@pytest.mark.parametrize("surface", [GrimReaper(), TiltedGrimReaper(theta=math.pi / 6)])
def test_residual_converges_at_second_order(surface):
    """Tests that halving h divides the closed-form residual by about four on the shared nodes."""
    coarse_mask = _square(1 / 32)
    coarse = residual_of_closed_form(surface, coarse_mask)[coarse_mask.interior]
    fine = residual_of_closed_form(surface, _square(1 / 64))[::2, ::2][coarse_mask.interior]
    assert np.max(np.abs(fine)) < 1e-2
    assert 3.4 <= np.max(np.abs(coarse)) / np.max(np.abs(fine)) <= 4.6


def test_plane_residual_is_the_source_term():
    """Tests that a plane's residual equals lam * (1 + |slope|^2)."""
    mask = _square(0.25)
    result = residual_of_closed_form(Plane(height=0.3, slope=(0.5, 0.0)), mask, lam=1.0)
    np.testing.assert_allclose(result[mask.interior], 1.25, atol=1e-10)
    assert np.all(np.isnan(result[~mask.interior]))
    zero = residual_of_closed_form(Plane(slope=(0.5, 0.0)), mask, lam=0.0)
    np.testing.assert_allclose(zero[mask.interior], 0.0, atol=1e-10)


def test_sample_surface_carries_exact_boundary_data():
    """Tests that sampling stores the exact surface values at crossing points."""
    mask = _square(0.5)
    field = sample_surface(GrimReaper(), mask)
    np.testing.assert_allclose(field.boundary_data(), np.log(np.cos(mask.crossing_points[:, 1])))


def test_mask_outside_natural_domain_raises():
    """Tests that a strip wider than pi/2 is outside the grim reaper's domain."""
    domain = RectangleDomain(L=1.0, b=2.0)
    mask = build_domain(domain, domain.default_grid(0.5))
    with pytest.raises(DomainError):
        residual_of_closed_form(GrimReaper(), mask)
