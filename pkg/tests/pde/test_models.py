# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import json

import pytest
from pydantic import ValidationError

from translator_lab.pde.models import ContinuationSchedule, NewtonSettings, SolveReport, StepRecord


def test_uniform_schedule():
    """Tests that a uniform schedule steps evenly up to 1."""
    schedule = ContinuationSchedule.uniform(4)
    assert schedule.lambdas == (0.25, 0.5, 0.75, 1.0)
    assert ContinuationSchedule.direct().lambdas == (1.0,)
    with pytest.raises(ValueError, match="at least one step"):
        ContinuationSchedule.uniform(0)


def test_targets_skip_leading_zero():
    """Tests that a leading zero speed is skipped."""
    assert ContinuationSchedule(lambdas=(0.0, 0.5, 1.0)).targets() == [0.5, 1.0]


@pytest.mark.parametrize(
    "lambdas, message",
    [
        ((), "at least one step"),
        ((0.5, 1.5), "must lie in"),
        ((0.5, 0.5, 1.0), "strictly increasing"),
        ((0.25, 0.5), "must end at 1"),
    ],
)
def test_schedule_validation(lambdas, message):
    """Tests that malformed schedules are rejected."""
    with pytest.raises(ValidationError, match=message):
        ContinuationSchedule(lambdas=lambdas)


def test_newton_settings_defaults_and_validation():
    """Tests the Newton defaults and that non-positive tolerances are rejected."""
    settings = NewtonSettings()
    assert settings.tolerance == 1e-10
    assert settings.max_bisections == 8
    assert settings.positivity_floor == 0.0
    with pytest.raises(ValidationError):
        NewtonSettings(tolerance=-1.0)
    with pytest.raises(ValidationError):
        NewtonSettings(stall_ratio=1.0)
    with pytest.raises(ValidationError):
        NewtonSettings(max_bisections=-1)


def test_solve_report_totals():
    """Tests the iteration total and accepted speeds of a report."""
    report = SolveReport(
        descriptor={"kind": "rectangle"},
        grid_shape=(3, 3),
        spacing=(1.0, 1.0),
        symmetry=(False, False),
        n_unknowns=1,
        linear_solver="spsolve",
        steps=[
            StepRecord(lam=0.5, iterations=3, residual_norms=[1.0], step_lengths=[], converged=True),
            StepRecord(lam=1.0, iterations=4, residual_norms=[1.0], step_lengths=[], converged=False),
            StepRecord(lam=0.75, iterations=2, residual_norms=[1.0], step_lengths=[], converged=True),
        ],
    )
    assert report.total_iterations == 9
    assert report.accepted_lambdas == [0.5, 0.75]


def test_wall_time_is_dropped_without_timing():
    """Tests that dumps with a timing=False context write wall_time_s as null and keep it otherwise."""
    report = SolveReport(
        descriptor={"kind": "rectangle"},
        grid_shape=(3, 3),
        spacing=(1.0, 1.0),
        symmetry=(False, False),
        n_unknowns=1,
        linear_solver="spsolve",
        wall_time_s=0.25,
    )
    assert json.loads(report.model_dump_json(context={"timing": False}))["wall_time_s"] is None
    assert json.loads(report.model_dump_json(context={"timing": True}))["wall_time_s"] == 0.25
    assert report.model_dump()["wall_time_s"] == 0.25
    assert report.wall_time_s == 0.25
