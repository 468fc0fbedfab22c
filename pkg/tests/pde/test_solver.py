# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import math
from unittest.mock import patch

import numpy as np
import pytest
import scipy.sparse as sp

from translator_lab.exceptions import PostconditionError, SolverError
from translator_lab.grid.domains import EllipsoidDomain, RectangleDomain, build_domain
from translator_lab.grid.spec import SymmetryFlags
from translator_lab.pde.models import BarrierCheck, ContinuationSchedule, NewtonSettings
from translator_lab.pde.solver import LinearSolver, solve_dirichlet


def _rectangle(L, b, h):
    domain = RectangleDomain(L=L, b=b)
    return build_domain(domain, domain.default_grid(h))


def test_interval_solution_is_the_grim_reaper_arc():
    """Tests that the one-dimensional solve on (-1, 1) reproduces log(cos y / cos 1)."""
    domain = EllipsoidDomain(a=(1.0,), R=1.0)
    mask = build_domain(domain, domain.default_grid(1 / 64))
    field, report = solve_dirichlet(mask)
    y = mask.grid.axis_coordinates(0)
    exact = np.log(np.cos(y[mask.interior]) / math.cos(1.0))
    np.testing.assert_allclose(field.values[mask.interior], exact, atol=1e-3)
    assert report.converged
    assert report.final_residual <= 1e-8
    assert report.max_location == pytest.approx((0.0,), abs=1e-12)
    assert [check.name for check in report.barriers] == ["bowl"]


def test_rectangle_solve_is_positive_and_centered():
    """Tests that a coarse rectangle solve is positive, peaks at the origin and obeys the arc barrier."""
    mask = _rectangle(1.0, 1.0, 0.25)
    field, report = solve_dirichlet(mask, ContinuationSchedule.uniform(4))
    assert report.min_interior_value > 0
    assert report.max_index == mask.grid.center_index
    assert report.accepted_lambdas == [0.25, 0.5, 0.75, 1.0]
    assert {check.name for check in report.barriers} == {"bowl", "arc"}
    assert all(check.passed for check in report.barriers)
    assert report.linear_solver == "spsolve"
    assert report.wall_time_s >= 0


def test_symmetric_solve_matches_full_solve():
    """Tests that mirrored unknowns give the same solution as the full grid."""
    mask = _rectangle(2.0, 1.0, 0.25)
    full, _ = solve_dirichlet(mask, ContinuationSchedule.uniform(4))
    reduced, report = solve_dirichlet(mask, ContinuationSchedule.uniform(4), symmetry=SymmetryFlags.all_axes(2))
    assert report.n_unknowns < mask.interior_count
    np.testing.assert_allclose(reduced.values[mask.interior], full.values[mask.interior], atol=1e-9)


def test_warm_start_converges_in_one_step():
    """Tests that a converged solution as initial guess is accepted by a direct schedule."""
    mask = _rectangle(1.0, 1.0, 0.25)
    field, _ = solve_dirichlet(mask, ContinuationSchedule.uniform(4))
    _, report = solve_dirichlet(mask, ContinuationSchedule.direct(), initial_guess=field)
    assert report.warm_started
    assert len(report.steps) == 1
    assert report.steps[0].iterations <= 1


def test_failed_step_raises_solver_error_with_report():
    """Tests that exhausting the bisection limit raises SolverError carrying the partial report."""
    mask = _rectangle(1.0, 1.0, 0.25)
    settings = NewtonSettings(max_iterations=1, max_bisections=0)
    with pytest.raises(SolverError, match="Newton failed") as excinfo:
        solve_dirichlet(mask, ContinuationSchedule.direct(), settings)
    report = excinfo.value.report
    assert report is not None
    assert not report.converged
    assert len(report.steps) == 1
    assert report.bisections == 0


def test_failed_step_is_bisected():
    """Tests that a failed speed is bisected before giving up."""
    mask = _rectangle(1.0, 1.0, 0.25)
    settings = NewtonSettings(max_iterations=2, max_bisections=1, use_predictor=False)
    with pytest.raises(SolverError) as excinfo:
        solve_dirichlet(mask, ContinuationSchedule.direct(), settings)
    assert excinfo.value.report.bisections == 1
    assert excinfo.value.report.steps[1].lam == 0.5


def test_barrier_violation_is_a_postcondition_error():
    """Tests that a failed barrier check raises PostconditionError."""
    mask = _rectangle(1.0, 1.0, 0.5)
    failing = [BarrierCheck(name="bowl", excess=0.5, slack=1e-3, passed=False)]
    with patch("translator_lab.pde.solver._barrier_checks", return_value=failing):
        with pytest.raises(PostconditionError, match="bowl barrier") as excinfo:
            solve_dirichlet(mask, ContinuationSchedule.uniform(2))
    assert excinfo.value.measured == 0.5


def test_barrier_checks_can_be_disabled():
    """Tests that check_barrier=False skips the barrier comparison."""
    mask = _rectangle(1.0, 1.0, 0.5)
    with patch("translator_lab.pde.solver._barrier_checks") as checks:
        _, report = solve_dirichlet(mask, ContinuationSchedule.uniform(2), NewtonSettings(check_barrier=False))
    checks.assert_not_called()
    assert report.barriers == []


def test_near_critical_width_is_flagged():
    """Tests that a strip half width within 1e-3 of pi/2 is reported as near critical."""
    mask = _rectangle(1.0, math.pi / 2 + 5e-4, 0.5)
    _, report = solve_dirichlet(mask, ContinuationSchedule.uniform(4))
    assert report.near_critical


def test_three_dimensional_solve_uses_gmres():
    """Tests that a coarse ball solve runs the iterative linear solver."""
    domain = EllipsoidDomain(a=(1.0, 1.0, 1.0), R=1.0)
    mask = build_domain(domain, domain.default_grid(0.25))
    field, report = solve_dirichlet(mask, ContinuationSchedule.uniform(4), symmetry=SymmetryFlags.all_axes(3))
    assert report.linear_solver == "gmres+ilu"
    assert report.max_index == mask.grid.center_index
    assert report.min_interior_value > 0


@pytest.mark.parametrize("dim, name", [(2, "spsolve"), (3, "gmres+ilu")])
def test_linear_solver_solves_small_systems(dim, name):
    """Tests that both linear solver paths solve a diagonally dominant system."""
    solver = LinearSolver(dim, 1e-12)
    matrix = sp.csr_matrix(sp.diags([-1.0, 4.0, -1.0], [-1, 0, 1], shape=(20, 20)))
    rhs = np.arange(20.0)
    assert solver.name == name
    np.testing.assert_allclose(matrix @ solver.solve(matrix, rhs), rhs, atol=1e-9)


def test_residual_stalled_near_the_floor_is_accepted():
    """Tests that steps whose residual stops falling within stall_factor of the threshold are accepted."""
    mask = _rectangle(1.0, 1.0, 0.25)
    settings = NewtonSettings(tolerance=1e-30, roundoff_factor=1e-20, stall_factor=1e20)
    _, report = solve_dirichlet(mask, ContinuationSchedule.uniform(4), settings)
    accepted = [step for step in report.steps if step.converged]
    assert report.converged
    assert [step.lam for step in accepted] == [0.25, 0.5, 0.75, 1.0]
    assert all(step.stalled for step in accepted)
    assert all(step.threshold == 1e-30 for step in accepted)
    assert report.final_residual <= 1e-10


def test_stall_far_above_the_threshold_still_fails():
    """Tests that a residual stuck above stall_factor times the threshold fails the step."""
    mask = _rectangle(1.0, 1.0, 0.25)
    settings = NewtonSettings(tolerance=1e-30, roundoff_factor=1e-20, stall_factor=1.0, max_bisections=0)
    with pytest.raises(SolverError, match="Newton failed") as excinfo:
        solve_dirichlet(mask, ContinuationSchedule.direct(), settings)
    assert not excinfo.value.report.steps[0].stalled


def test_threshold_rises_to_the_roundoff_floor():
    """Tests that the recorded threshold is the round-off floor when that exceeds the tolerance."""
    mask = _rectangle(1.0, 1.0, 0.25)
    settings = NewtonSettings(tolerance=1e-30, roundoff_factor=1e6)
    _, report = solve_dirichlet(mask, ContinuationSchedule.uniform(2), settings)
    assert report.converged
    assert all(step.threshold > 1e-8 for step in report.steps)
    assert not any(step.stalled for step in report.steps)


def test_positivity_floor_is_strict():
    """Tests that an interior minimum equal to positivity_floor is a postcondition error."""
    mask = _rectangle(1.0, 1.0, 0.25)
    _, report = solve_dirichlet(mask, ContinuationSchedule.uniform(4))
    floor = report.min_interior_value
    with pytest.raises(PostconditionError, match="not positive") as excinfo:
        solve_dirichlet(mask, ContinuationSchedule.uniform(4), NewtonSettings(positivity_floor=floor))
    assert excinfo.value.measured == floor
    assert excinfo.value.tolerance == floor


@pytest.mark.slow
def test_continuation_path_does_not_change_the_solution():
    """Tests that 8 and 16 continuation steps reach the same discrete solution."""
    mask = _rectangle(2.0, 1.0, 1 / 16)
    coarse, _ = solve_dirichlet(mask, ContinuationSchedule.uniform(8), symmetry=SymmetryFlags.all_axes(2))
    fine, _ = solve_dirichlet(mask, ContinuationSchedule.uniform(16), symmetry=SymmetryFlags.all_axes(2))
    np.testing.assert_allclose(coarse.values[mask.interior], fine.values[mask.interior], atol=1e-8)


@pytest.mark.slow
def test_apex_height_converges_at_second_order():
    """Tests that successive differences of u(0, 0) under h -> h/2 shrink by about four."""
    heights = []
    for h in (1 / 8, 1 / 16, 1 / 32):
        mask = _rectangle(1.0, 1.0, h)
        field, _ = solve_dirichlet(mask, symmetry=SymmetryFlags.all_axes(2))
        heights.append(float(field.values[mask.grid.center_index]))
    ratio = (heights[1] - heights[0]) / (heights[2] - heights[1])
    assert 3.0 <= ratio <= 5.0
