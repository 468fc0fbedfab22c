# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Command-line entry point.

Every command writes ``report.json`` to its output directory, plus field files where it produces
a field. Exit codes: 0 on success, 1 on configuration errors, 2 on solver or audit failures; every
failure also writes ``error.json``.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ValidationError

from translator_lab.cache import SolveCache
from translator_lab.closed_forms import TiltedGrimReaper, bowl_profile, parse_surface
from translator_lab.config import ConfigManager, LabSettings, RunConfig
from translator_lab.delta_wing import (
    asymptotic_slope_check,
    construct,
    convexity_check,
    gauss_image_bounds,
    tilt_angle,
)
from translator_lab.exceptions import (
    AuditFailure,
    ConfigurationError,
    DomainError,
    ExportError,
    TranslatorLabError,
    UsageError,
)
from translator_lab.export import ApexRecord, AuditRecord, RunReport, export_field, load_field_csv, write_report
from translator_lab.geometry import ApexSpectrum, apex_spectrum
from translator_lab.grid.domains import (
    DomainDescriptor,
    EllipsoidDomain,
    EllipsoidSlabDomain,
    RectangleDomain,
    build_domain,
)
from translator_lab.grid.fields import ScalarField
from translator_lab.logging import logger, setup_logging
from translator_lab.pde.models import ContinuationSchedule, SolveReport
from translator_lab.simplex_map import f_map, invert_f
from translator_lab.suite import (
    audit_ellipsoid,
    audit_rectangle,
    audit_slab,
    solve_ellipsoid,
    solve_rectangle,
    solve_slab,
)

CONFIGURATION_EXIT = 1
FAILURE_EXIT = 2
TRACE_TOLERANCE = 0.05
TILT_TOLERANCE = 0.05


@dataclass
class CommandResult:
    """What a command hands back for the report and the output directory."""

    residual_max: Optional[float] = None
    apex: Optional[ApexRecord] = None
    audits: List[AuditRecord] = dataclass_field(default_factory=list)
    field: Optional[ScalarField] = None
    artifacts: Dict[str, BaseModel] = dataclass_field(default_factory=dict)


class PointEvaluation(BaseModel):
    family: str
    point: List[float]
    value: float
    gradient: List[float]
    hessian: List[List[float]]


def _check(check_id: str, value: float, tolerance: float) -> AuditRecord:
    return AuditRecord(id=check_id, passed=bool(value <= tolerance), value=value, tolerance=tolerance)


def _apex_checks(apex: ApexSpectrum, h: float) -> List[AuditRecord]:
    return [
        _check("TRACE_APEX", abs(apex.trace + 1.0), TRACE_TOLERANCE),
        _check("APEX_GRADIENT", apex.gradient_norm, h * h),
    ]


def _cache(settings: LabSettings) -> Optional[SolveCache]:
    return SolveCache(settings.cache_dir) if settings.cache_dir is not None else None


def _schedule(config: RunConfig) -> ContinuationSchedule:
    return ContinuationSchedule.uniform(config.steps)


def _solved(field: ScalarField, report: SolveReport, audits: Sequence[AuditRecord] = ()) -> CommandResult:
    apex = apex_spectrum(field)
    return CommandResult(
        residual_max=report.final_residual,
        apex=ApexRecord.from_spectrum(apex),
        audits=_apex_checks(apex, min(field.grid.spacing)) + list(audits),
        field=field,
        artifacts={"solve_report.json": report},
    )


def closed_form_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    if config.family == "tilted" and config.theta is None and config.b is not None:
        surface = TiltedGrimReaper.from_half_width(config.b)
    else:
        parameters = {
            "theta": config.theta,
            "b": config.b,
            "n": config.n,
            "height": config.height,
            "slope": config.slope,
        }
        data: Dict[str, Any] = {key: value for key, value in parameters.items() if value is not None}
        if config.family == "bowl":
            data.update(r_max=config.r_max, dr=config.dr)
        surface = parse_surface({"family": config.family, **data})
    value, grad, hess = surface.eval(config.eval_point)
    print(f"{value:.17g}")
    evaluation = PointEvaluation(
        family=surface.family,
        point=list(config.eval_point),
        value=value,
        gradient=grad.tolist(),
        hessian=hess.tolist(),
    )
    return CommandResult(artifacts={"closed_form.json": evaluation})


def bowl_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    profile = bowl_profile(config.n, config.r_max, config.dr)
    np.savetxt(
        config.out / "bowl_profile.csv",
        np.column_stack([profile.radii, profile.values, profile.slopes]),
        fmt="%.17g",
        delimiter=",",
        header="r,u,du_dr",
        comments="",
    )
    curvature = -profile.apex_second_derivative()
    apex = ApexRecord(location=[0.0] * config.n, value=0.0, curvatures=[curvature] * config.n)
    return CommandResult(apex=apex, audits=[_check("APEX_CURVATURE", abs(curvature - 1.0 / config.n), 1e-6)])


def solve_rect_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    field, report = solve_rectangle(
        config.L, config.b, config.h, schedule=_schedule(config), settings=config.newton, cache=cache
    )
    return _solved(field, report)


def solve_ellipsoid_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    field, report = solve_ellipsoid(
        config.a, config.R, config.h, schedule=_schedule(config), settings=config.newton, cache=cache
    )
    return _solved(field, report)


def solve_slab_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    field, report = solve_slab(
        config.a, config.R, config.b, config.h, schedule=_schedule(config), settings=config.newton, cache=cache
    )
    return _solved(field, report)


def delta_wing_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    wing = construct(config.b, config.h, config.L_schedule, config.cauchy_tolerance, config.newton, cache)
    expected = tilt_angle(config.b)
    audits = [
        AuditRecord(
            id="TILT",
            passed=abs(wing.tilt - expected) <= TILT_TOLERANCE * expected,
            value=wing.tilt,
            tolerance=TILT_TOLERANCE * expected,
        ),
        _check("CAUCHY", wing.cauchy_gaps[-1], config.cauchy_tolerance),
    ]
    if wing.L_max >= 10 * wing.b:
        slope = asymptotic_slope_check(wing)
        audits.append(
            AuditRecord(id="SLOPE", passed=slope.passed, value=slope.relative_error, tolerance=slope.tolerance)
        )
    convexity = convexity_check(wing)
    audits.append(
        AuditRecord(id="CONVEXITY", passed=convexity.passed, value=convexity.fraction, tolerance=convexity.threshold)
    )
    image = gauss_image_bounds(wing)
    audits.append(AuditRecord(id="GAUSS_IMAGE", passed=image.passed, value=image.max_abs_slope, tolerance=image.bound))
    audits.extend(_apex_checks(wing.apex, wing.h))
    return CommandResult(
        residual_max=max(report.final_residual for report in wing.reports),
        apex=ApexRecord.from_spectrum(wing.apex),
        audits=audits,
        field=wing.field,
    )


def fmap_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    result = f_map(config.a, config.lam, config.h, config.newton, cache)
    return CommandResult(
        residual_max=result.report.final_residual,
        apex=ApexRecord.from_spectrum(result.apex),
        audits=[_check("TRACE", result.trace_error, TRACE_TOLERANCE)],
        artifacts={"fmap.json": result},
    )


def invert_fmap_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    result = invert_f(config.k, config.lam, config.h, config.tol, settings=config.newton, cache=cache)
    return CommandResult(audits=[_check("INVERSION", result.error, config.tol)], artifacts={"inversion.json": result})


def audit_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    solve_options = dict(schedule=_schedule(config), settings=config.newton, cache=cache)
    if config.domain == "rect":
        field, report = solve_rectangle(config.L, config.b, config.h, **solve_options)
        audit = audit_rectangle(field)
    elif config.domain == "ellipsoid":
        field, report = solve_ellipsoid(config.a, config.R, config.h, **solve_options)
        audit = audit_ellipsoid(field, rho=config.rho)
    else:
        field, report = solve_slab(config.a, config.R, config.b, config.h, **solve_options)
        audit = audit_slab(field)
    result = _solved(field, report, [AuditRecord.from_check(check) for check in audit.checks])
    result.artifacts["audit.json"] = audit
    return result


def _descriptor(config: RunConfig) -> DomainDescriptor:
    domain = {
        "solve-rect": "rect",
        "solve-ellipsoid": "ellipsoid",
        "solve-slab": "slab",
        "delta-wing": "wing",
        "audit": config.domain,
    }.get(config.command)
    if domain == "rect":
        return RectangleDomain(L=config.L, b=config.b)
    if domain == "wing":
        return RectangleDomain(L=config.L_schedule[-1], b=config.b)
    if domain == "ellipsoid":
        return EllipsoidDomain(a=tuple(config.a), R=config.R)
    if domain == "slab":
        return EllipsoidSlabDomain(a=tuple(config.a), R=config.R, b=config.b)
    raise UsageError(f"Runs of '{config.command}' produce no field to export.")


def export_command(config: RunConfig, cache: Optional[SolveCache]) -> CommandResult:
    source = config.source
    try:
        recorded = RunReport.model_validate_json((source / "report.json").read_text())
        original = RunConfig.model_validate({"command": recorded.command, **recorded.params})
    except OSError as e:
        raise ExportError(f"Cannot read the report in {source}: {e}") from e
    except ValidationError as e:
        raise ConfigurationError(f"The report in {source} does not describe a valid run: {e}") from e
    descriptor = _descriptor(original)
    mask = build_domain(descriptor, descriptor.default_grid(original.h))
    field = load_field_csv(source / "field.csv", mask)
    return CommandResult(field=field)


COMMANDS: Dict[str, Callable[[RunConfig, Optional[SolveCache]], CommandResult]] = {
    "closed-form": closed_form_command,
    "bowl": bowl_command,
    "solve-rect": solve_rect_command,
    "solve-ellipsoid": solve_ellipsoid_command,
    "solve-slab": solve_slab_command,
    "delta-wing": delta_wing_command,
    "fmap": fmap_command,
    "invert-fmap": invert_fmap_command,
    "audit": audit_command,
    "export": export_command,
}


def _floats(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from e


def _formats(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="translator-lab", description="Translating solitons of mean curvature flow.")
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="Output directory (created if missing).")
    common.add_argument("--config", type=Path, help="YAML file of parameters; flags override it.")
    common.add_argument("--formats", type=_formats, help="Comma-separated subset of csv,obj,json.")
    common.add_argument("--timing", action="store_true", default=None, help="Record wall time in the report.")
    common.add_argument("--log-level", dest="log_level", help="Logging level, e.g. DEBUG.")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--h", type=float, help="Grid spacing.")
    grid.add_argument("--steps", type=int, help="Number of uniform continuation steps.")

    closed = commands.add_parser("closed-form", parents=[common], help="Evaluate an exact translator.")
    closed.add_argument("--family", choices=["grim_reaper", "tilted", "arc", "plane", "bowl"])
    closed.add_argument("--theta", type=float)
    closed.add_argument("--b", type=float)
    closed.add_argument("--n", type=int)
    closed.add_argument("--height", type=float)
    closed.add_argument("--slope", type=_floats)
    closed.add_argument("--r-max", dest="r_max", type=float)
    closed.add_argument("--dr", type=float)
    closed.add_argument("--eval", dest="eval_point", type=_floats, help="Point as comma-separated coordinates.")

    bowl = commands.add_parser("bowl", parents=[common], help="Integrate the bowl's radial profile.")
    bowl.add_argument("--n", type=int)
    bowl.add_argument("--r-max", dest="r_max", type=float)
    bowl.add_argument("--dr", type=float)

    rect = commands.add_parser("solve-rect", parents=[common, grid], help="Solve on [-L, L] x [-b, b].")
    rect.add_argument("--L", type=float)
    rect.add_argument("--b", type=float)

    ellipsoid = commands.add_parser("solve-ellipsoid", parents=[common, grid], help="Solve on an ellipsoid.")
    ellipsoid.add_argument("--a", type=_floats)
    ellipsoid.add_argument("--R", type=float)

    slab = commands.add_parser("solve-slab", parents=[common, grid], help="Solve on an ellipsoid x slab.")
    slab.add_argument("--a", type=_floats)
    slab.add_argument("--R", type=float)
    slab.add_argument("--b", type=float)

    wing = commands.add_parser("delta-wing", parents=[common, grid], help="Construct the wing over a strip.")
    wing.add_argument("--b", type=float)
    wing.add_argument("--L", dest="L_schedule", type=_floats, help="Increasing rectangle lengths, e.g. 20,40.")
    wing.add_argument("--cauchy-tolerance", dest="cauchy_tolerance", type=float)

    fmap = commands.add_parser("fmap", parents=[common, grid], help="Apex curvatures of a calibrated ellipsoid.")
    fmap.add_argument("--a", type=_floats)
    fmap.add_argument("--lam", type=float)

    invert = commands.add_parser("invert-fmap", parents=[common, grid], help="Coefficients for given curvatures.")
    invert.add_argument("--k", type=_floats)
    invert.add_argument("--lam", type=float)
    invert.add_argument("--tol", type=float)

    audit = commands.add_parser("audit", parents=[common, grid], help="Solve and run a property audit.")
    audit.add_argument("--domain", choices=["rect", "ellipsoid", "slab"])
    audit.add_argument("--L", type=float)
    audit.add_argument("--b", type=float)
    audit.add_argument("--a", type=_floats)
    audit.add_argument("--R", type=float)
    audit.add_argument("--rho", type=float)

    export = commands.add_parser("export", parents=[common], help="Re-export the field of an earlier run.")
    export.add_argument("--source", type=Path, help="Output directory of the earlier run.")
    return parser


def _write_error(out: Path, command: str, error: BaseException) -> None:
    details = error.details() if isinstance(error, TranslatorLabError) else {}
    record = {"command": command, "error_type": type(error).__name__, "message": str(error), "details": details}
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "error.json").write_text(json.dumps(record, indent=2, default=str) + "\n")
    except OSError as e:
        logger.error(f"Could not write the error record to {out}: {e}")


def execute(config: RunConfig, settings: LabSettings) -> RunReport:
    """Runs one configured command and writes its outputs; raises on failure."""
    try:
        config.out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ExportError(f"Cannot create output directory {config.out}: {e}") from e
    logger.info(f"Running '{config.command}' into {config.out}.")
    started = time.perf_counter()
    result = COMMANDS[config.command](config, _cache(settings))
    elapsed = time.perf_counter() - started

    if result.field is not None:
        export_field(result.field, config.out, config.formats)
    dump_context = {"timing": bool(config.timing)}
    for name, artifact in result.artifacts.items():
        artifact_path = config.out / name
        try:
            artifact_path.write_text(artifact.model_dump_json(indent=2, context=dump_context) + "\n")
        except OSError as e:
            raise ExportError(f"Cannot write {artifact_path}: {e}") from e
    report = RunReport(
        command=config.command,
        params=config.params(),
        residual_max=result.residual_max,
        apex=result.apex,
        audits=result.audits,
        timing_s=elapsed if config.timing else None,
    )
    if "json" in config.formats:
        write_report(report, config.out / "report.json")
    logger.info(f"Finished '{config.command}' in {elapsed:.2f}s.")
    if config.command == "audit" and not all(record.passed for record in report.audits):
        raise AuditFailure("Audit checks failed", [record.id for record in report.audits if not record.passed])
    return report


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parses ``argv``, runs the command and returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else CONFIGURATION_EXIT

    settings = LabSettings()
    setup_logging(args.log_level or settings.log_level)
    overrides = {key: value for key, value in vars(args).items() if key not in ("config", "log_level")}
    out = args.out or Path(".")
    try:
        config = ConfigManager().load_run_config(args.config, overrides)
        out = config.out
        execute(config, settings)
    except (ConfigurationError, DomainError, UsageError, ExportError) as e:
        logger.error(f"{args.command}: {e}")
        _write_error(out, args.command, e)
        return CONFIGURATION_EXIT
    except TranslatorLabError as e:
        logger.error(f"{args.command}: {e}")
        _write_error(out, args.command, e)
        return FAILURE_EXIT
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
