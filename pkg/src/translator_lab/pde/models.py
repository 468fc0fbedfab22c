# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from typing import Any, Dict, List, Optional, Self, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    PositiveInt,
    SerializationInfo,
    field_serializer,
    model_validator,
)


class NewtonSettings(BaseModel):
    """
    Damped Newton parameters shared by every continuation step.

    A step converges once the max-norm residual is below ``tolerance``, or below the round-off
    floor ``roundoff_factor * eps * TranslatorOperator.roundoff_scale(u)`` when that is larger. A
    step whose residual stops decreasing within ``stall_factor`` times that threshold is accepted
    as stalled. Interior values must exceed ``positivity_floor``.
    """

    model_config = ConfigDict(frozen=True)

    tolerance: PositiveFloat = 1e-10
    roundoff_factor: PositiveFloat = 8.0
    stall_factor: PositiveFloat = 100.0
    stall_ratio: float = Field(default=0.5, gt=0.0, lt=1.0)
    max_iterations: PositiveInt = 40
    armijo: PositiveFloat = 1e-4
    max_halvings: PositiveInt = 30
    linear_tolerance: PositiveFloat = 1e-12
    max_bisections: int = Field(default=8, ge=0)
    use_predictor: bool = True
    positivity_floor: float = Field(default=0.0, ge=0.0)
    check_barrier: bool = True
    barrier_slack: PositiveFloat = 1e-3


class ContinuationSchedule(BaseModel):
    """
    Speeds at which the translator equation is solved in turn, starting from the zero field.

    A leading 0 is accepted and skipped, since the zero field solves the lambda = 0 problem exactly.
    """

    model_config = ConfigDict(frozen=True)

    lambdas: Tuple[float, ...]

    @model_validator(mode="after")
    def _validate_lambdas(self) -> Self:
        if not self.lambdas:
            raise ValueError("A continuation schedule needs at least one step.")
        if any(lam < 0.0 or lam > 1.0 for lam in self.lambdas):
            raise ValueError("Continuation speeds must lie in [0, 1].")
        if any(b <= a for a, b in zip(self.lambdas, self.lambdas[1:])):
            raise ValueError("Continuation speeds must be strictly increasing.")
        if self.lambdas[-1] != 1.0:
            raise ValueError("A continuation schedule must end at 1.")
        return self

    @classmethod
    def uniform(cls, steps: int = 16) -> "ContinuationSchedule":
        if steps < 1:
            raise ValueError("A uniform schedule needs at least one step.")
        return cls(lambdas=tuple((k + 1) / steps for k in range(steps - 1)) + (1.0,))

    @classmethod
    def direct(cls) -> "ContinuationSchedule":
        """A single step at lambda = 1, for warm starts."""
        return cls(lambdas=(1.0,))

    def targets(self) -> List[float]:
        return [lam for lam in self.lambdas if lam > 0.0]


class StepRecord(BaseModel):
    """Newton trace of one accepted or rejected continuation step."""

    lam: float
    iterations: int
    residual_norms: List[float]
    step_lengths: List[float]
    converged: bool
    predicted: bool = False
    threshold: Optional[float] = None
    stalled: bool = False


class BarrierCheck(BaseModel):
    """Comparison of a solution against an explicit supersolution; ``excess`` is max(u - barrier)."""

    name: str
    excess: float
    slack: float
    passed: bool


class SolveReport(BaseModel):
    """Convergence trace and summary of a Dirichlet solve."""

    descriptor: Dict[str, Any]
    grid_shape: Tuple[int, ...]
    spacing: Tuple[float, ...]
    symmetry: Tuple[bool, ...]
    n_unknowns: int
    linear_solver: str
    steps: List[StepRecord] = []
    bisections: int = 0
    converged: bool = False
    final_residual: Optional[float] = None
    core_residual: Optional[float] = None
    max_index: Optional[Tuple[int, ...]] = None
    max_location: Optional[Tuple[float, ...]] = None
    max_value: Optional[float] = None
    min_interior_value: Optional[float] = None
    barriers: List[BarrierCheck] = []
    near_critical: bool = False
    warm_started: bool = False
    wall_time_s: Optional[float] = None

    @field_serializer("wall_time_s")
    def _serialize_wall_time(self, value: Optional[float], info: SerializationInfo) -> Optional[float]:
        # a dump with context={"timing": False} leaves the clock out
        context = info.context or {}
        return value if context.get("timing", True) else None

    @property
    def total_iterations(self) -> int:
        return sum(step.iterations for step in self.steps)

    @property
    def accepted_lambdas(self) -> List[float]:
        return [step.lam for step in self.steps if step.converged]
