# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import pytest

from translator_lab.exceptions import (
    AuditFailure,
    CalibrationError,
    ConfigurationError,
    DomainError,
    ExportError,
    InversionError,
    NumericalAccuracyError,
    PostconditionError,
    ScheduleTooShortError,
    SolverError,
    TranslatorLabError,
    UsageError,
)
from translator_lab.pde.models import SolveReport


def test_base_exception_can_be_raised():
    """Tests that the base exception can be raised and has empty details."""
    with pytest.raises(TranslatorLabError) as excinfo:
        raise TranslatorLabError("A base error occurred.")
    assert excinfo.value.details() == {}


@pytest.mark.parametrize(
    "exc_class",
    [ConfigurationError, DomainError, NumericalAccuracyError, UsageError, ExportError],
)
def test_simple_exceptions_inherit_from_base(exc_class):
    """Tests that the simple exceptions are caught as the base error."""
    with pytest.raises(TranslatorLabError, match="boom"):
        raise exc_class("boom")


def test_every_exception_derives_from_base():
    """Tests that all package exceptions share the base class."""
    for exc_class in (SolverError, PostconditionError, CalibrationError, InversionError, AuditFailure):
        assert issubclass(exc_class, TranslatorLabError)
    assert ScheduleTooShortError in TranslatorLabError.__subclasses__()


def test_solver_error_carries_report():
    """Tests that SolverError stores its partial report and serializes it in details."""
    report = SolveReport(
        descriptor={"kind": "rectangle", "L": 1.0, "b": 1.0},
        grid_shape=(5, 5),
        spacing=(0.5, 0.5),
        symmetry=(False, False),
        n_unknowns=9,
        linear_solver="spsolve",
        wall_time_s=1.5,
    )
    exc = SolverError("Newton stalled", report=report)
    assert exc.report is report
    assert exc.details()["report"]["n_unknowns"] == 9
    assert exc.details()["report"]["wall_time_s"] is None
    assert SolverError("no report").details() == {}


def test_postcondition_error_attributes():
    """Tests that PostconditionError keeps the measured value and tolerance."""
    exc = PostconditionError("Negative interior value", measured=-0.5, tolerance=1e-10)
    assert exc.measured == -0.5
    assert exc.tolerance == 1e-10
    assert "measured -0.5" in str(exc)
    assert exc.details() == {"measured": -0.5, "tolerance": 1e-10}


def test_calibration_error_lists_evaluations():
    """Tests that CalibrationError reports the evaluated radii and heights."""
    exc = CalibrationError("No bracket", evaluations=[(1.0, 0.2), (2.0, 0.4)])
    assert exc.details() == {
        "evaluations": [{"R": 1.0, "apex_height": 0.2}, {"R": 2.0, "apex_height": 0.4}]
    }


def test_inversion_error_attributes():
    """Tests that InversionError keeps the best iterate."""
    exc = InversionError("Stalled", best_a=[0.5, 0.5], best_k=[0.4, 0.4], best_error=0.1)
    assert exc.best_a == [0.5, 0.5]
    assert exc.best_k == [0.4, 0.4]
    assert "best error 0.1" in str(exc)
    assert exc.details()["best_error"] == 0.1


def test_schedule_too_short_error_message():
    """Tests that ScheduleTooShortError reports gap and tolerance."""
    exc = ScheduleTooShortError("Cauchy check failed", gap=0.01, tolerance=0.001)
    assert exc.gap == 0.01
    assert exc.details() == {"gap": 0.01, "tolerance": 0.001}
    assert "exceeds tolerance" in str(exc)


def test_audit_failure_lists_checks():
    """Tests that AuditFailure names the failed checks."""
    exc = AuditFailure("Audit failed", failed_checks=["SIGN_X", "W_ARGMAX"])
    assert exc.failed_checks == ["SIGN_X", "W_ARGMAX"]
    assert str(exc) == "Audit failed: SIGN_X, W_ARGMAX"
