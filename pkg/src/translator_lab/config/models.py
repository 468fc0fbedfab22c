# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from pathlib import Path
from typing import Dict, List, Literal, Optional, Self, Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from translator_lab.pde.models import NewtonSettings

Command = Literal[
    "closed-form",
    "bowl",
    "solve-rect",
    "solve-ellipsoid",
    "solve-slab",
    "delta-wing",
    "fmap",
    "invert-fmap",
    "audit",
    "export",
]
ExportFormat = Literal["csv", "obj", "json"]

# Parameters each command cannot run without.
REQUIRED_PARAMETERS: Dict[str, Tuple[str, ...]] = {
    "closed-form": ("family", "eval_point"),
    "bowl": ("n",),
    "solve-rect": ("L", "b", "h"),
    "solve-ellipsoid": ("a", "R", "h"),
    "solve-slab": ("a", "R", "b", "h"),
    "delta-wing": ("b", "h", "L_schedule"),
    "fmap": ("a", "h"),
    "invert-fmap": ("k", "h"),
    "audit": ("domain", "h"),
    "export": ("source",),
}


class LabSettings(BaseSettings):
    """Process-wide settings read from ``TRANSLATOR_LAB_*`` environment variables."""

    threads: PositiveInt = 1
    cache_dir: Optional[Path] = None
    log_level: str = "INFO"

    model_config = SettingsConfigDict(env_prefix="TRANSLATOR_LAB_", case_sensitive=False)


class RunConfig(BaseModel):
    """One CLI invocation: the command, its parameters and where its outputs go."""

    model_config = ConfigDict(extra="forbid")

    command: Command
    out: Path = Path(".")
    formats: List[ExportFormat] = ["csv", "obj", "json"]
    timing: bool = False

    # closed forms
    family: Optional[str] = None
    theta: Optional[float] = None
    n: Optional[PositiveInt] = None
    r_max: PositiveFloat = 10.0
    dr: PositiveFloat = 1e-3
    height: Optional[float] = None
    slope: Optional[List[float]] = None
    eval_point: Optional[List[float]] = None

    # domains and grids
    domain: Optional[Literal["rect", "ellipsoid", "slab"]] = None
    L: Optional[PositiveFloat] = None
    b: Optional[PositiveFloat] = None
    a: Optional[List[float]] = None
    R: Optional[PositiveFloat] = None
    h: Optional[PositiveFloat] = None
    L_schedule: Optional[List[PositiveFloat]] = None
    rho: Optional[PositiveFloat] = None

    # simplex map
    lam: PositiveFloat = 0.5
    k: Optional[List[float]] = None
    tol: PositiveFloat = 0.02

    # solver
    steps: PositiveInt = 16
    newton: NewtonSettings = Field(default_factory=NewtonSettings)
    cauchy_tolerance: PositiveFloat = 1e-3

    # export
    source: Optional[Path] = None

    @model_validator(mode="after")
    def _validate_required(self) -> Self:
        missing = [name for name in REQUIRED_PARAMETERS[self.command] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"Command '{self.command}' requires: {', '.join(missing)}.")
        if self.command == "audit":
            extra = {"rect": ("L", "b"), "ellipsoid": ("a", "R"), "slab": ("a", "R", "b")}[self.domain]
            missing = [name for name in extra if getattr(self, name) is None]
            if missing:
                raise ValueError(f"Auditing a {self.domain} domain requires: {', '.join(missing)}.")
        return self

    def params(self) -> Dict[str, object]:
        """The parameters echoed into reports: everything that was set, minus the output directory, in JSON form."""
        return self.model_dump(mode="json", exclude_none=True, exclude={"command", "out"})
