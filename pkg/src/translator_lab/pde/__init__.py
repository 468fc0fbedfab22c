# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from translator_lab.pde.models import BarrierCheck, ContinuationSchedule, NewtonSettings, SolveReport, StepRecord
from translator_lab.pde.operator import TranslatorOperator, linearize, residual
from translator_lab.pde.solver import solve_dirichlet

__all__ = [
    "BarrierCheck",
    "ContinuationSchedule",
    "NewtonSettings",
    "SolveReport",
    "StepRecord",
    "TranslatorOperator",
    "linearize",
    "residual",
    "solve_dirichlet",
]
