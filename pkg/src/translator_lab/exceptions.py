# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence

if TYPE_CHECKING:
    from translator_lab.pde.models import SolveReport


class TranslatorLabError(Exception):
    """Base exception for all translator_lab errors."""

    def details(self) -> Dict[str, Any]:
        """Machine-readable context written into CLI error records."""
        return {}


class ConfigurationError(TranslatorLabError):
    """Errors related to run, grid, or domain configuration."""

    pass


class DomainError(TranslatorLabError):
    """A point or parameter lies outside the natural domain of a closed form."""

    pass


class NumericalAccuracyError(TranslatorLabError):
    """An integration or discretization cannot meet its accuracy target."""

    pass


class UsageError(TranslatorLabError):
    """An operation was applied to an input it is not defined for."""

    pass


class ExportError(TranslatorLabError):
    """Errors raised while writing or reloading exported data."""

    pass


class SolverError(TranslatorLabError):
    """The damped Newton / continuation solve failed; carries the partial report."""

    def __init__(self, message: str, report: Optional["SolveReport"] = None):
        super().__init__(message)
        self.report = report

    def details(self) -> Dict[str, Any]:
        if self.report is None:
            return {}
        return {"report": self.report.model_dump(mode="json", context={"timing": False})}


class PostconditionError(TranslatorLabError):
    """A converged solve violates a property it must have (e.g. positivity)."""

    def __init__(self, message: str, measured: float, tolerance: float):
        super().__init__(f"{message} (measured {measured:.6g}, tolerance {tolerance:.3g})")
        self.measured = measured
        self.tolerance = tolerance

    def details(self) -> Dict[str, Any]:
        return {"measured": self.measured, "tolerance": self.tolerance}


class CalibrationError(TranslatorLabError):
    """The apex-height calibration of an ellipsoid radius failed."""

    def __init__(self, message: str, evaluations: Sequence[tuple[float, float]] = ()):
        super().__init__(message)
        self.evaluations: List[tuple[float, float]] = list(evaluations)

    def details(self) -> Dict[str, Any]:
        return {"evaluations": [{"R": r, "apex_height": v} for r, v in self.evaluations]}


class InversionError(TranslatorLabError):
    """The coefficient search for prescribed apex curvatures stagnated."""

    def __init__(self, message: str, best_a: Sequence[float], best_k: Sequence[float], best_error: float):
        super().__init__(f"{message} (best error {best_error:.4g})")
        self.best_a = list(best_a)
        self.best_k = list(best_k)
        self.best_error = best_error

    def details(self) -> Dict[str, Any]:
        return {"best_a": self.best_a, "best_k": self.best_k, "best_error": self.best_error}


class ScheduleTooShortError(TranslatorLabError):
    """Successive normalized rectangle solves failed the Cauchy-in-L certificate."""

    def __init__(self, message: str, gap: float, tolerance: float):
        super().__init__(f"{message}: gap {gap:.4g} exceeds tolerance {tolerance:.3g}")
        self.gap = gap
        self.tolerance = tolerance

    def details(self) -> Dict[str, Any]:
        return {"gap": self.gap, "tolerance": self.tolerance}


class AuditFailure(TranslatorLabError):
    """One or more audit checks did not pass."""

    def __init__(self, message: str, failed_checks: Sequence[str]):
        super().__init__(f"{message}: {', '.join(failed_checks)}")
        self.failed_checks = list(failed_checks)

    def details(self) -> Dict[str, Any]:
        return {"failed_checks": self.failed_checks}
