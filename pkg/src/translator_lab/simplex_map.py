# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
The map from ellipsoid coefficients to apex curvatures.

A point ``a`` of the simplex selects the ellipsoid sum_i a_i x_i^2 < R^2, with R calibrated so the
translator over it reaches height lambda at the origin. The apex curvatures of that solution sum
to 1 and so form another simplex point. Zero coefficients are handled by solving in the reduced
dimension, which is what makes every face of the simplex map to itself.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Self, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.optimize import brentq

from translator_lab.cache import SolveCache
from translator_lab.config.models import LabSettings
from translator_lab.exceptions import CalibrationError, ConfigurationError, DomainError, InversionError
from translator_lab.geometry import ApexSpectrum, apex_spectrum
from translator_lab.grid.fields import ScalarField
from translator_lab.logging import logger
from translator_lab.pde.models import NewtonSettings, SolveReport
from translator_lab.suite.solves import solve_ellipsoid, solve_slab

SIMPLEX_TOLERANCE = 1e-12
DEFAULT_LAMBDA = 0.5
CALIBRATION_TOLERANCE = 0.01
R_MAX = 50.0
# Coefficients of a two-point inversion are kept below this so the long semi-axis stays bounded.
MAX_COEFFICIENT = 15 / 16


class SimplexPoint(BaseModel):
    """Nonnegative entries summing to 1."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[float, ...]

    @model_validator(mode="after")
    def _validate_entries(self) -> Self:
        if not 1 <= len(self.entries) <= 3:
            raise ValueError(f"Simplex points have 1 to 3 entries, got {len(self.entries)}.")
        if any(e < 0 or not math.isfinite(e) for e in self.entries):
            raise ValueError(f"Simplex entries must be finite and nonnegative, got {self.entries}.")
        if abs(math.fsum(self.entries) - 1.0) > SIMPLEX_TOLERANCE:
            raise ValueError(f"Simplex entries must sum to 1, got {math.fsum(self.entries)!r}.")
        return self

    @classmethod
    def of(cls, entries: Sequence[float]) -> "SimplexPoint":
        try:
            return cls(entries=tuple(float(e) for e in entries))
        except ValueError as e:
            raise ConfigurationError(f"Invalid simplex point {tuple(entries)}: {e}") from e

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e > 0)

    def reduced(self) -> Tuple[float, ...]:
        """The positive entries, which still sum to 1."""
        return tuple(self.entries[i] for i in self.support)

    def lift(self, values: Sequence[float]) -> Tuple[float, ...]:
        """Places values given on the support back into a full-length tuple, zeros elsewhere."""
        full = [0.0] * self.n
        for i, value in zip(self.support, values):
            full[i] = float(value)
        return tuple(full)


class Calibration(BaseModel):
    R: float
    height: float
    evaluations: List[Tuple[float, float]]
    used_fallback: bool


class FMapResult(BaseModel):
    a: Tuple[float, ...]
    lam: float
    R: float
    k: Tuple[float, ...]
    apex: ApexSpectrum
    report: SolveReport
    calibration: Calibration

    @property
    def trace_error(self) -> float:
        return abs(math.fsum(self.k) - 1.0)


class _HeightOracle:
    """Apex heights u(0) of ellipsoid solves as a function of R, memoised per R."""

    def __init__(self, a: Tuple[float, ...], h: float, settings: Optional[NewtonSettings], cache: Optional[SolveCache]):
        self.a = a
        self.h = h
        self.settings = settings
        self.cache = cache
        self.solves: Dict[float, Tuple[ScalarField, SolveReport]] = {}
        self.evaluations: List[Tuple[float, float]] = []

    def __call__(self, R: float) -> float:
        if R not in self.solves:
            self.solves[R] = solve_ellipsoid(self.a, R, self.h, settings=self.settings, cache=self.cache)
            field = self.solves[R][0]
            self.evaluations.append((R, float(field.values[field.grid.center_index])))
            logger.debug(f"Calibration a={self.a}: u(0)={self.evaluations[-1][1]:.6g} at R={R:.6g}.")
        field = self.solves[R][0]
        return float(field.values[field.grid.center_index])


def _bracket(height: _HeightOracle, lam: float, R_max: float) -> Tuple[float, float]:
    # Small-speed limit: u(0) ~ R^2 / 2 for every simplex point.
    R = math.sqrt(2 * lam)
    R_min = 4 * height.h * math.sqrt(max(height.a))
    if height(R) < lam:
        while height(R) < lam:
            if 2 * R > R_max:
                raise CalibrationError(
                    f"u(0) stays below {lam} up to R={R:g}; bracket would exceed R_max={R_max:g}.",
                    height.evaluations,
                )
            R *= 2
        return R / 2, R
    while height(R) > lam:
        if R / 2 < R_min:
            raise CalibrationError(
                f"u(0) stays above {lam} down to R={R:g}; the grid cannot resolve smaller ellipsoids.",
                height.evaluations,
            )
        R /= 2
    return R, 2 * R


def _scan_and_bisect(height: _HeightOracle, lam: float, lo: float, hi: float, tolerance: float) -> float:
    radii = np.linspace(lo, hi, 9)
    excess = [height(float(R)) - lam for R in radii]
    for left, right, e_left, e_right in zip(radii, radii[1:], excess, excess[1:]):
        if e_left <= 0 <= e_right:
            break
    else:
        raise CalibrationError(f"No sign change of u(0) - {lam} on [{lo:g}, {hi:g}].", height.evaluations)
    left, right = float(left), float(right)
    for _ in range(40):
        middle = 0.5 * (left + right)
        e_middle = height(middle) - lam
        if abs(e_middle) <= tolerance * lam:
            return middle
        if e_middle < 0:
            left = middle
        else:
            right = middle
    return 0.5 * (left + right)


def _calibrate(
    a: Tuple[float, ...],
    lam: float,
    h: float,
    settings: Optional[NewtonSettings],
    cache: Optional[SolveCache],
    R_max: float,
    tolerance: float,
) -> Tuple[Calibration, _HeightOracle]:
    if lam <= 0:
        raise ConfigurationError(f"Target height must be positive, got lambda={lam}.")
    height = _HeightOracle(a, h, settings, cache)
    lo, hi = _bracket(height, lam, R_max)
    logger.info(f"Calibration a={a}, lambda={lam:g}: bracket [{lo:.4g}, {hi:.4g}].")

    middle = 0.5 * (lo + hi)
    monotone = height(lo) < height(middle) < height(hi)
    if monotone:
        R = brentq(lambda r: height(r) - lam, lo, hi, xtol=1e-6 * hi, rtol=1e-10, maxiter=60)
    else:
        logger.warning(f"u(0) is not increasing in R on [{lo:.4g}, {hi:.4g}]; falling back to scan and bisection.")
        R = _scan_and_bisect(height, lam, lo, hi, tolerance)
    value = height(R)
    if abs(value - lam) > tolerance * lam:
        raise CalibrationError(
            f"Calibrated u(0)={value:.6g} misses lambda={lam:g} by more than {tolerance:.0%}.", height.evaluations
        )
    calibration = Calibration(R=R, height=value, evaluations=height.evaluations, used_fallback=not monotone)
    return calibration, height


def calibrate_R(
    a: Sequence[float],
    lam: float = DEFAULT_LAMBDA,
    h: float = 1 / 32,
    settings: Optional[NewtonSettings] = None,
    cache: Optional[SolveCache] = None,
    R_max: float = R_MAX,
    tolerance: float = CALIBRATION_TOLERANCE,
) -> float:
    """
    The ellipsoid radius R at which the translator over sum a_i x_i^2 < R^2 has u(0) = lam.

    Zero entries of ``a`` are dropped first and the problem solved in the reduced dimension.

    Raises:
        CalibrationError: if the bracket would leave (0, R_max] or u(0) cannot be matched.
    """
    point = SimplexPoint.of(a)
    calibration, _ = _calibrate(point.reduced(), lam, h, settings, cache, R_max, tolerance)
    return calibration.R


def f_map(
    a: Sequence[float],
    lam: float = DEFAULT_LAMBDA,
    h: float = 1 / 32,
    settings: Optional[NewtonSettings] = None,
    cache: Optional[SolveCache] = None,
) -> FMapResult:
    """Apex curvatures of the calibrated ellipsoid solve; entries at zero coefficients are exactly 0."""
    point = SimplexPoint.of(a)
    calibration, height = _calibrate(point.reduced(), lam, h, settings, cache, R_MAX, CALIBRATION_TOLERANCE)
    field, report = height.solves[calibration.R]
    apex = apex_spectrum(field)
    k = point.lift(apex.axis_curvatures)
    logger.info(f"F({point.entries}) = {tuple(round(x, 6) for x in k)} at lambda={lam:g}, R={calibration.R:.6g}.")
    return FMapResult(a=point.entries, lam=lam, R=calibration.R, k=k, apex=apex, report=report, calibration=calibration)


def f_map_batch(
    points: Sequence[Sequence[float]],
    lam: float = DEFAULT_LAMBDA,
    h: float = 1 / 32,
    settings: Optional[NewtonSettings] = None,
    threads: Optional[int] = None,
) -> List[FMapResult]:
    """Evaluates ``f_map`` at independent points on a thread pool; results come back in input order."""
    workers = threads or LabSettings().threads
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda a: f_map(a, lam, h, settings), points))


class InversionResult(BaseModel):
    target: Tuple[float, ...]
    a: Tuple[float, ...]
    achieved: Tuple[float, ...]
    error: float
    iterations: int


def _error(achieved: Sequence[float], target: Sequence[float]) -> float:
    return float(max(abs(x - y) for x, y in zip(achieved, target)))


def _invert_pair(
    target: Tuple[float, float],
    lam: float,
    h: float,
    tol: float,
    max_iterations: int,
    settings: Optional[NewtonSettings],
    cache: Optional[SolveCache],
) -> InversionResult:
    # Bisection on the coefficient of the larger curvature, which lies in [1/2, 1).
    big = 0 if target[0] >= target[1] else 1

    def place(a_big: float) -> Tuple[float, float]:
        return (a_big, 1.0 - a_big) if big == 0 else (1.0 - a_big, a_big)

    evaluated: Dict[float, FMapResult] = {}

    def excess(a_big: float) -> float:
        if a_big not in evaluated:
            evaluated[a_big] = f_map(place(a_big), lam, h, settings, cache)
        return evaluated[a_big].k[big] - target[big]

    def best() -> InversionResult:
        a_big = min(evaluated, key=lambda x: _error(evaluated[x].k, target))
        result = evaluated[a_big]
        return InversionResult(
            target=target, a=result.a, achieved=result.k, error=_error(result.k, target), iterations=len(evaluated)
        )

    lo, hi = 0.5, 0.75
    while excess(hi) < 0:
        if hi >= MAX_COEFFICIENT:
            found = best()
            raise InversionError(
                f"Target {target} lies beyond a <= {MAX_COEFFICIENT}.", found.a, found.achieved, found.error
            )
        lo, hi = hi, 1.0 - (1.0 - hi) / 2
    if excess(lo) > excess(hi):
        logger.warning(f"F is not order preserving on [{lo:g}, {hi:g}]; bisection may not converge.")
    if best().error <= tol:
        return best()
    for _ in range(max_iterations):
        middle = 0.5 * (lo + hi)
        shortfall = excess(middle)
        if _error(evaluated[middle].k, target) <= tol:
            return best()
        if shortfall < 0:
            lo = middle
        else:
            hi = middle
    found = best()
    if found.error <= tol:
        return found
    raise InversionError(
        f"Bisection stalled at error {found.error:.3e} > {tol:g}.", found.a, found.achieved, found.error
    )


def _tied_groups(target: Sequence[float]) -> List[List[int]]:
    groups: List[List[int]] = []
    for i, value in enumerate(target):
        for group in groups:
            if abs(target[group[0]] - value) <= SIMPLEX_TOLERANCE:
                group.append(i)
                break
        else:
            groups.append([i])
    return groups


def _invert_triple(
    target: Tuple[float, ...],
    lam: float,
    h: float,
    tol: float,
    max_iterations: int,
    settings: Optional[NewtonSettings],
    cache: Optional[SolveCache],
    damping: float,
) -> InversionResult:
    # Multiplicative fixed point a_i <- a_i (k_i / F_i)^damping, renormalized and averaged over tied targets.
    groups = _tied_groups(target)
    a = np.asarray(target, dtype=float)
    best: Optional[InversionResult] = None
    stalled = 0
    for iteration in range(1, max_iterations + 1):
        result = f_map(tuple(a), lam, h, settings, cache)
        error = _error(result.k, target)
        if best is None or error < best.error:
            best = InversionResult(target=target, a=result.a, achieved=result.k, error=error, iterations=iteration)
            stalled = 0
        else:
            stalled += 1
        logger.info(f"Inversion step {iteration}: a={tuple(np.round(a, 6))}, error {error:.3e}.")
        if error <= tol:
            return best.model_copy(update={"iterations": iteration})
        if stalled >= 3:
            break
        a = a * (np.asarray(target) / np.maximum(np.asarray(result.k), 1e-12)) ** damping
        for group in groups:
            a[group] = a[group].mean()
        a = a / a.sum()
        a[-1] = 1.0 - a[:-1].sum()
    assert best is not None
    raise InversionError(f"Search stagnated at error {best.error:.3e} > {tol:g}.", best.a, best.achieved, best.error)


def invert_f(
    k_target: Sequence[float],
    lam: float = DEFAULT_LAMBDA,
    h: float = 1 / 32,
    tol: float = 0.02,
    max_iterations: int = 30,
    settings: Optional[NewtonSettings] = None,
    cache: Optional[SolveCache] = None,
    damping: float = 0.7,
) -> InversionResult:
    """
    Finds a with max_i |F(a)_i - k_i| <= tol.

    Equal target entries force equal coefficients; all-equal targets return the center at once.
    Zero target entries are matched by zero coefficients. Two free entries are found by bisection,
    three by a damped multiplicative search on the simplex.

    Raises:
        InversionError: if the search stalls above ``tol``; carries the best iterate.
    """
    target_point = SimplexPoint.of(k_target)
    target = target_point.entries
    support = target_point.support
    reduced = target_point.reduced()
    if len(support) == 1 or all(abs(k - reduced[0]) <= SIMPLEX_TOLERANCE for k in reduced):
        a = target_point.lift([1.0 / len(support)] * len(support))
        achieved = f_map(a, lam, h, settings, cache).k
        logger.info(f"Target {target} is symmetric; a={a} needs no search.")
        return InversionResult(target=target, a=a, achieved=achieved, error=_error(achieved, target), iterations=0)
    if len(support) == 2:
        found = _invert_pair((reduced[0], reduced[1]), lam, h, tol, max_iterations, settings, cache)
    else:
        found = _invert_triple(reduced, lam, h, tol, max_iterations, settings, cache, damping)
    a = target_point.lift(found.a)
    achieved = target_point.lift(found.achieved)
    return InversionResult(
        target=target, a=a, achieved=achieved, error=_error(achieved, target), iterations=found.iterations
    )


class SlabFMapResult(BaseModel):
    a: Tuple[float, ...]
    b: float
    R: float
    k: Tuple[float, ...]
    spectrum: Tuple[float, ...]
    apex: ApexSpectrum
    report: SolveReport


def slab_f_map(
    a: Sequence[float],
    b: float,
    R: float,
    h: float,
    settings: Optional[NewtonSettings] = None,
    cache: Optional[SolveCache] = None,
) -> SlabFMapResult:
    """
    Apex curvatures over the ellipsoid x slab, first n entries normalized to sum 1.

    ``spectrum`` keeps all n + 1 axis curvatures, the last being the slab direction.
    """
    point = SimplexPoint.of(a)
    if b <= math.pi / 2:
        raise DomainError(f"The slab map needs b > pi/2, got b={b}.")
    if point.n > 2:
        raise ConfigurationError(f"Slab domains support n <= 2 ellipsoid coordinates, got n={point.n}.")
    field, report = solve_slab(point.reduced(), R, b, h, settings=settings, cache=cache)
    apex = apex_spectrum(field)
    ellipsoid_part = apex.axis_curvatures[:-1]
    total = math.fsum(ellipsoid_part)
    k = point.lift([value / total for value in ellipsoid_part])
    spectrum = point.lift(ellipsoid_part) + (apex.axis_curvatures[-1],)
    return SlabFMapResult(a=point.entries, b=b, R=R, k=k, spectrum=spectrum, apex=apex, report=report)
