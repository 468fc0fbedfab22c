# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Damped Newton with continuation in the translation speed.

The zero field solves the lambda = 0 (minimal surface) problem exactly; each later speed starts
from the previous solution, moved along the tangent du/dlam when the predictor is enabled. A
step whose Newton iteration fails is bisected until it succeeds or the bisection limit is reached.
"""

import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from translator_lab.closed_forms.bowl import bowl_barrier
from translator_lab.exceptions import DomainError, NumericalAccuracyError, PostconditionError, SolverError
from translator_lab.grid.domains import DomainMask, RectangleDomain
from translator_lab.grid.fields import ScalarField
from translator_lab.grid.spec import SymmetryFlags
from translator_lab.logging import logger
from translator_lab.pde.models import (
    BarrierCheck,
    ContinuationSchedule,
    NewtonSettings,
    SolveReport,
    StepRecord,
)
from translator_lab.pde.operator import TranslatorOperator

# Widths this close to pi/2 sit at the bounded/unbounded height dichotomy and are flagged.
NEAR_CRITICAL_WIDTH = 1e-3


@dataclass
class _NewtonOutcome:
    u: np.ndarray
    record: StepRecord


class LinearSolver:
    """Direct sparse factorization up to two dimensions, ILU-preconditioned GMRES in three."""

    def __init__(self, dim: int, tolerance: float):
        self.iterative = dim >= 3
        self.tolerance = tolerance

    @property
    def name(self) -> str:
        return "gmres+ilu" if self.iterative else "spsolve"

    def solve(self, matrix: sp.csr_matrix, rhs: np.ndarray) -> np.ndarray:
        if not self.iterative:
            return spla.spsolve(matrix.tocsc(), rhs)
        try:
            ilu = spla.spilu(matrix.tocsc(), drop_tol=1e-6, fill_factor=20.0)
            preconditioner = spla.LinearOperator(matrix.shape, ilu.solve)
        except RuntimeError as err:
            logger.warning(f"ILU factorization failed ({err}); using the diagonal preconditioner.")
            preconditioner = spla.aslinearoperator(sp.diags(1.0 / matrix.diagonal()))
        solution, info = spla.gmres(
            matrix, rhs, M=preconditioner, rtol=self.tolerance, atol=0.0, restart=60, maxiter=200
        )
        if info != 0:
            logger.warning(f"GMRES stopped with info={info}; falling back to a direct solve.")
            return spla.spsolve(matrix.tocsc(), rhs)
        return solution


def _threshold(op: TranslatorOperator, u: np.ndarray, settings: NewtonSettings) -> float:
    """The absolute tolerance, raised to the residual's round-off floor for tall or steep solutions."""
    floor = settings.roundoff_factor * np.finfo(float).eps * op.roundoff_scale(u)
    return max(settings.tolerance, floor)


def _newton(
    op: TranslatorOperator,
    linear: LinearSolver,
    u0: np.ndarray,
    lam: float,
    settings: NewtonSettings,
    predicted: bool,
) -> Tuple[Optional[np.ndarray], StepRecord]:
    u = u0.copy()
    r = op.residual(u, lam)
    norm = float(np.max(np.abs(r))) if len(r) else 0.0
    threshold = _threshold(op, u, settings)
    norms = [norm]
    lengths: List[float] = []
    iterations = 0
    stalled = False
    while norm > threshold:
        if iterations >= settings.max_iterations or not math.isfinite(norm):
            break
        iterations += 1
        step = linear.solve(op.jacobian(u, lam), -r)
        if not np.all(np.isfinite(step)):
            break
        t = 1.0
        accepted = False
        for _ in range(settings.max_halvings + 1):
            trial = u + t * step
            r_trial = op.residual(trial, lam)
            n_trial = float(np.max(np.abs(r_trial)))
            if math.isfinite(n_trial) and n_trial <= (1.0 - settings.armijo * t) * norm:
                accepted = True
                break
            t *= 0.5
        logger.debug(f"lam={lam:.6g} iteration {iterations}: residual {norm:.3e} -> {n_trial:.3e}, step {t:.3g}")
        if not accepted:
            stalled = norm <= settings.stall_factor * threshold
            break
        slow = n_trial > settings.stall_ratio * norm
        u, r, norm = trial, r_trial, n_trial
        norms.append(norm)
        lengths.append(t)
        threshold = _threshold(op, u, settings)
        if slow and threshold < norm <= settings.stall_factor * threshold:
            stalled = True
            break
    if stalled:
        logger.info(f"lam={lam:.6g}: residual stalled at {norm:.3e} (threshold {threshold:.3e}); accepting.")
    converged = norm <= threshold or stalled
    record = StepRecord(
        lam=lam,
        iterations=iterations,
        residual_norms=norms,
        step_lengths=lengths,
        converged=converged,
        predicted=predicted,
        threshold=threshold,
        stalled=stalled,
    )
    return (u if converged else None), record


def _barrier_checks(
    mask: DomainMask, field: ScalarField, settings: NewtonSettings
) -> List[BarrierCheck]:
    descriptor = mask.descriptor
    slack = settings.barrier_slack + 10.0 * max(mask.grid.spacing) ** 2
    interior = mask.interior
    points = mask.grid.points()[interior.ravel()]
    u = field.values[interior]
    checks = []

    radius = descriptor.circumradius
    if not (mask.grid.dim == 1 and radius >= math.pi / 2):
        try:
            profile, offset = bowl_barrier(mask.grid.dim, radius)
            bowl = profile.value(np.linalg.norm(points, axis=1)) + offset
            excess = float(np.max(u - bowl)) if len(u) else 0.0
            checks.append(BarrierCheck(name="bowl", excess=excess, slack=slack, passed=excess <= slack))
        except (DomainError, NumericalAccuracyError) as e:
            logger.warning(f"Bowl barrier unavailable for radius {radius:.4g}: {e}")

    if isinstance(descriptor, RectangleDomain) and descriptor.b < math.pi / 2:
        y = points[:, -1]
        arc = np.log(np.cos(y) / math.cos(descriptor.b))
        excess = float(np.max(u - arc)) if len(u) else 0.0
        checks.append(BarrierCheck(name="arc", excess=excess, slack=slack, passed=excess <= slack))
    return checks


def solve_dirichlet(
    mask: DomainMask,
    schedule: Optional[ContinuationSchedule] = None,
    settings: Optional[NewtonSettings] = None,
    symmetry: Optional[SymmetryFlags] = None,
    initial_guess: Optional[ScalarField] = None,
) -> Tuple[ScalarField, SolveReport]:
    """
    Solves the translator equation with zero boundary values on ``mask``.

    Args:
        mask: The domain mask; its INTERIOR nodes are the unknowns.
        schedule: Continuation speeds, 16 uniform steps by default.
        settings: Newton parameters.
        symmetry: Even-symmetry flags; unknowns are then restricted to the non-negative half axes.
        initial_guess: Starting field for the first step instead of zero.

    Returns:
        The solution on the full grid and its report.

    Raises:
        SolverError: when a continuation step fails even after bisection; carries the partial report.
        PostconditionError: when the solution is not positive or exceeds an enabled barrier.
    """
    schedule = schedule or ContinuationSchedule.uniform()
    settings = settings or NewtonSettings()
    symmetry = symmetry or SymmetryFlags.none(mask.grid.dim)
    started = time.perf_counter()

    op = TranslatorOperator(mask, symmetry)
    linear = LinearSolver(mask.grid.dim, settings.linear_tolerance)
    report = SolveReport(
        descriptor=mask.descriptor.model_dump(),
        grid_shape=mask.grid.shape,
        spacing=mask.grid.spacing,
        symmetry=symmetry.even,
        n_unknowns=op.n_unknowns,
        linear_solver=linear.name,
        warm_started=initial_guess is not None,
    )
    width = mask.descriptor.strip_half_width
    if width is not None and abs(width - math.pi / 2) < NEAR_CRITICAL_WIDTH:
        report.near_critical = True
        logger.warning(f"Half width {width:.6g} is within {NEAR_CRITICAL_WIDTH} of pi/2; conditioning is poor.")
    logger.info(
        f"Solving {mask.descriptor.kind} on grid {mask.grid.shape} ({op.n_unknowns} unknowns, {linear.name})."
    )

    u = op.unknowns(initial_guess) if initial_guess is not None else np.zeros(op.n_unknowns)
    lam_done = 0.0
    tangent: Optional[np.ndarray] = None
    pending = schedule.targets()
    min_step = min(b - a for a, b in zip([0.0] + pending, pending)) / 2**settings.max_bisections

    while pending:
        target = pending[0]
        predicted = settings.use_predictor and tangent is not None
        guess = u + (target - lam_done) * tangent if predicted else u
        solution, record = _newton(op, linear, guess, target, settings, predicted)
        if solution is None and predicted:
            solution, record = _newton(op, linear, u, target, settings, False)
        report.steps.append(record)
        if solution is not None:
            u, lam_done = solution, target
            pending.pop(0)
            logger.info(f"Accepted lam={target:.6g} after {record.iterations} iterations.")
            if settings.use_predictor and pending:
                tangent = linear.solve(op.jacobian(u, lam_done), -op.source(u))
            continue
        if target - lam_done <= min_step * (1 + 1e-12):
            report.wall_time_s = time.perf_counter() - started
            raise SolverError(f"Newton failed at lam={target:.6g} after {report.bisections} bisections.", report)
        report.bisections += 1
        midpoint = 0.5 * (lam_done + target)
        logger.warning(f"Newton failed at lam={target:.6g}; bisecting to {midpoint:.6g}.")
        pending.insert(0, midpoint)

    field = op.to_field(u)
    final = op.residual(u, 1.0)
    residual_grid = op.stencils.scatter(np.abs(final), fill=0.0)
    report.converged = True
    report.final_residual = float(np.max(np.abs(final))) if len(final) else 0.0
    core = mask.core(2)
    report.core_residual = float(np.max(residual_grid[core])) if np.any(core) else report.final_residual
    index, location, value = field.max_node()
    report.max_index = index
    report.max_location = tuple(float(c) for c in location)
    report.max_value = value
    minimum = float(np.min(field.values[mask.interior]))
    report.min_interior_value = minimum
    report.wall_time_s = time.perf_counter() - started

    if minimum <= settings.positivity_floor:
        raise PostconditionError(
            f"Solution is not positive at an interior node (min {minimum:.3e}).", minimum, settings.positivity_floor
        )
    if settings.check_barrier:
        report.barriers = _barrier_checks(mask, field, settings)
        for check in report.barriers:
            if not check.passed:
                raise PostconditionError(
                    f"Solution exceeds the {check.name} barrier by {check.excess:.3e}.", check.excess, check.slack
                )
    logger.info(
        f"Solve finished: u_max={value:.6g} at {report.max_location}, residual {report.final_residual:.2e}, "
        f"{report.total_iterations} Newton iterations in {report.wall_time_s:.2f}s."
    )
    return field, report
