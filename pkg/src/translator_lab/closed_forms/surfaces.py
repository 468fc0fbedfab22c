# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Exact reference translators.

Points are (N, dim) arrays. Families that depend on one strip coordinate (the grim reaper, its
arcs and tilted versions) read it from the last axis; the tilted family reads x from axis 0.
"""

import math
from typing import Annotated, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from translator_lab.closed_forms.bowl import BowlProfile, cached_bowl_profile
from translator_lab.exceptions import ConfigurationError, DomainError

SurfaceEvaluation = Tuple[float, np.ndarray, np.ndarray]


class _Surface(BaseModel):
    model_config = ConfigDict(frozen=True)

    def accepts_dim(self, dim: int) -> bool:
        return 1 <= dim <= 3

    def natural_contains(self, points: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def _values(self, points: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def _gradients(self, points: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def _hessians(self, points: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def _checked(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.accepts_dim(points.shape[1]):
            raise DomainError(f"{type(self).__name__} is not defined on R^{points.shape[1]}.")
        outside = ~self.natural_contains(points)
        if np.any(outside):
            first = points[np.argmax(outside)]
            raise DomainError(f"Point {tuple(float(c) for c in first)} is outside the natural domain of {self!r}.")
        return points

    def values(self, points: np.ndarray) -> np.ndarray:
        return self._values(self._checked(points))

    def gradients(self, points: np.ndarray) -> np.ndarray:
        return self._gradients(self._checked(points))

    def hessians(self, points: np.ndarray) -> np.ndarray:
        return self._hessians(self._checked(points))

    def eval(self, point) -> SurfaceEvaluation:
        """
        Value, gradient and Hessian at a single point.

        Raises:
            DomainError: if the point lies outside the family's natural domain.
        """
        points = self._checked(np.asarray(point, dtype=float).reshape(1, -1))
        return float(self._values(points)[0]), self._gradients(points)[0], self._hessians(points)[0]


def _strip_hessian(points: np.ndarray, yy: np.ndarray) -> np.ndarray:
    dim = points.shape[1]
    out = np.zeros((len(points), dim, dim))
    out[:, -1, -1] = yy
    return out


class GrimReaper(_Surface):
    """log cos y on the strip |y| < pi/2."""

    family: Literal["grim_reaper"] = "grim_reaper"

    def natural_contains(self, points: np.ndarray) -> np.ndarray:
        return np.abs(points[:, -1]) < math.pi / 2

    def _values(self, points: np.ndarray) -> np.ndarray:
        return np.log(np.cos(points[:, -1]))

    def _gradients(self, points: np.ndarray) -> np.ndarray:
        out = np.zeros_like(points)
        out[:, -1] = -np.tan(points[:, -1])
        return out

    def _hessians(self, points: np.ndarray) -> np.ndarray:
        return _strip_hessian(points, -1.0 / np.cos(points[:, -1]) ** 2)


class TiltedGrimReaper(_Surface):
    """
    The grim reaper rotated by theta about the y-axis and dilated by 1/cos(theta):

        u(x, y) = log(cos(y cos theta)) / cos^2 theta + x tan theta,   |y| < pi / (2 cos theta).
    """

    family: Literal["tilted"] = "tilted"
    theta: float

    @model_validator(mode="after")
    def _check_theta(self) -> "TiltedGrimReaper":
        if not -math.pi / 2 < self.theta < math.pi / 2:
            raise ValueError(f"Tilt angle must lie in (-pi/2, pi/2), got {self.theta}.")
        return self

    @classmethod
    def from_half_width(cls, b: float) -> "TiltedGrimReaper":
        """The tilted grim reaper living on the strip of half width b >= pi/2."""
        if b < math.pi / 2:
            raise DomainError(f"No tilted grim reaper has half width {b} < pi/2.")
        return cls(theta=math.acos(math.pi / (2 * b)))

    @property
    def half_width(self) -> float:
        return math.pi / (2 * math.cos(self.theta))

    def accepts_dim(self, dim: int) -> bool:
        return dim == 2

    def natural_contains(self, points: np.ndarray) -> np.ndarray:
        return np.abs(points[:, -1]) < self.half_width

    def _values(self, points: np.ndarray) -> np.ndarray:
        c = math.cos(self.theta)
        return np.log(np.cos(points[:, 1] * c)) / c**2 + points[:, 0] * math.tan(self.theta)

    def _gradients(self, points: np.ndarray) -> np.ndarray:
        c = math.cos(self.theta)
        out = np.empty_like(points)
        out[:, 0] = math.tan(self.theta)
        out[:, 1] = -np.tan(points[:, 1] * c) / c
        return out

    def _hessians(self, points: np.ndarray) -> np.ndarray:
        c = math.cos(self.theta)
        return _strip_hessian(points, -1.0 / np.cos(points[:, 1] * c) ** 2)


class GrimReaperArc(_Surface):
    """log(cos y / cos b) on |y| <= b < pi/2: the translator of the interval [-b, b] with zero end values."""

    family: Literal["arc"] = "arc"
    b: float

    @model_validator(mode="after")
    def _check_b(self) -> "GrimReaperArc":
        if not 0 < self.b < math.pi / 2:
            raise ValueError(f"Arc half width must lie in (0, pi/2), got {self.b}.")
        return self

    @property
    def apex_height(self) -> float:
        return -math.log(math.cos(self.b))

    def natural_contains(self, points: np.ndarray) -> np.ndarray:
        return np.abs(points[:, -1]) <= self.b * (1 + 1e-12)

    def _values(self, points: np.ndarray) -> np.ndarray:
        # clipped so crossing points a rounding error beyond |y| = b still read 0
        y = np.clip(points[:, -1], -self.b, self.b)
        return np.log(np.cos(y)) - math.log(math.cos(self.b))

    def _gradients(self, points: np.ndarray) -> np.ndarray:
        out = np.zeros_like(points)
        out[:, -1] = -np.tan(points[:, -1])
        return out

    def _hessians(self, points: np.ndarray) -> np.ndarray:
        return _strip_hessian(points, -1.0 / np.cos(points[:, -1]) ** 2)


class Plane(_Surface):
    """u = height + slope . x. Not a translator: its residual is the source term alone."""

    family: Literal["plane"] = "plane"
    height: float = 0.0
    slope: Optional[Tuple[float, ...]] = None

    def natural_contains(self, points: np.ndarray) -> np.ndarray:
        return np.ones(len(points), dtype=bool)

    def _slope(self, dim: int) -> np.ndarray:
        if self.slope is None:
            return np.zeros(dim)
        if len(self.slope) != dim:
            raise DomainError(f"Plane slope has {len(self.slope)} entries, points have {dim}.")
        return np.asarray(self.slope, dtype=float)

    def _values(self, points: np.ndarray) -> np.ndarray:
        return self.height + points @ self._slope(points.shape[1])

    def _gradients(self, points: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self._slope(points.shape[1]), points.shape).copy()

    def _hessians(self, points: np.ndarray) -> np.ndarray:
        dim = points.shape[1]
        return np.zeros((len(points), dim, dim))


class Bowl(_Surface):
    """The rotationally symmetric translator over R^n, evaluated by cubic interpolation of its radial profile."""

    family: Literal["bowl"] = "bowl"
    n: int = 2
    r_max: float = 10.0
    dr: float = 1e-3

    @model_validator(mode="after")
    def _check_n(self) -> "Bowl":
        if self.n not in (1, 2, 3):
            raise ValueError(f"Bowl dimension must be 1, 2 or 3, got {self.n}.")
        return self

    @property
    def profile(self) -> BowlProfile:
        return cached_bowl_profile(self.n, float(self.r_max), float(self.dr))

    def accepts_dim(self, dim: int) -> bool:
        return dim == self.n

    def natural_contains(self, points: np.ndarray) -> np.ndarray:
        return np.linalg.norm(points, axis=1) <= self.profile.r_max

    def _values(self, points: np.ndarray) -> np.ndarray:
        return self.profile.value(np.linalg.norm(points, axis=1))

    def _gradients(self, points: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(points, axis=1)
        slope = self.profile.slope(r)
        scale = np.where(r > 0, slope / np.where(r > 0, r, 1.0), 0.0)
        return points * scale[:, None]

    def _hessians(self, points: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(points, axis=1)
        safe_r = np.where(r > 0, r, 1.0)
        slope = self.profile.slope(r)
        radial = self.profile.curvature(r)
        tangential = np.where(r > 0, slope / safe_r, -1.0 / self.n)
        unit = points / safe_r[:, None]
        outer = unit[:, :, None] * unit[:, None, :]
        identity = np.eye(self.n)[None]
        hess = radial[:, None, None] * outer + tangential[:, None, None] * (identity - outer)
        hess[r == 0] = -np.eye(self.n) / self.n
        return hess


ClosedFormSurface = Annotated[
    Union[GrimReaper, TiltedGrimReaper, GrimReaperArc, Plane, Bowl],
    Field(discriminator="family"),
]

_surface_adapter: TypeAdapter = TypeAdapter(ClosedFormSurface)


def parse_surface(data: dict) -> ClosedFormSurface:
    """
    Builds a surface from a mapping such as ``{"family": "tilted", "theta": 0.5}``.

    Raises:
        ConfigurationError: for unknown families or invalid parameters.
    """
    try:
        return _surface_adapter.validate_python(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid closed-form surface {data!r}: {e}") from e
