# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

"""
Writers for solved fields and run reports, and the CSV reader used to re-export them.

CSV rows are the non-EXTERIOR nodes in lexicographic node order, printed with 17 significant
digits so a reload reproduces every value bit for bit.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from translator_lab.exceptions import ExportError
from translator_lab.geometry import ApexSpectrum
from translator_lab.grid.domains import DomainMask
from translator_lab.grid.fields import ScalarField
from translator_lab.suite.models import AuditCheck

CSV_FORMAT = "%.17g"
# Coordinates read back from a CSV must match the rebuilt grid to this tolerance.
COORDINATE_TOLERANCE = 1e-12


class ApexRecord(BaseModel):
    location: List[float]
    value: float
    curvatures: List[float]

    @classmethod
    def from_spectrum(cls, apex: ApexSpectrum) -> "ApexRecord":
        return cls(location=list(apex.location), value=apex.value, curvatures=list(apex.axis_curvatures))


class AuditRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    id: str
    passed: bool = Field(alias="pass")
    value: float
    tolerance: float

    @classmethod
    def from_check(cls, check: AuditCheck) -> "AuditRecord":
        return cls(id=check.id, passed=check.passed, value=check.value, tolerance=check.tolerance)


class RunReport(BaseModel):
    """The JSON report of one CLI run. Non-finite floats serialize as null."""

    command: str
    params: Dict[str, Any]
    residual_max: Optional[float] = None
    apex: Optional[ApexRecord] = None
    audits: List[AuditRecord] = []
    timing_s: Optional[float] = None


def _nodes(field: ScalarField) -> np.ndarray:
    field = field.full()
    keep = field.mask.non_exterior.ravel()
    return np.column_stack([field.grid.points()[keep], field.values.ravel()[keep]])


def write_field_csv(field: ScalarField, path: Path) -> Path:
    """Writes ``x1,...,xn,u`` rows for every non-EXTERIOR node."""
    header = ",".join([f"x{i + 1}" for i in range(field.grid.dim)] + ["u"])
    try:
        np.savetxt(path, _nodes(field), fmt=CSV_FORMAT, delimiter=",", header=header, comments="")
    except OSError as e:
        raise ExportError(f"Cannot write CSV to {path}: {e}") from e
    return path


def load_field_csv(path: Path, mask: DomainMask) -> ScalarField:
    """
    Reads a CSV written by ``write_field_csv`` back onto ``mask``.

    Raises:
        ExportError: if the file is unreadable or its nodes do not match the mask.
    """
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as e:
        raise ExportError(f"Cannot read CSV from {path}: {e}") from e
    keep = mask.non_exterior.ravel()
    points = mask.grid.points()[keep]
    if data.shape != (len(points), mask.grid.dim + 1):
        raise ExportError(
            f"CSV {path} has shape {data.shape}; the mask needs {(len(points), mask.grid.dim + 1)}."
        )
    if np.max(np.abs(data[:, :-1] - points), initial=0.0) > COORDINATE_TOLERANCE:
        raise ExportError(f"CSV {path} nodes do not lie on the rebuilt grid.")
    values = np.full(mask.grid.shape, np.nan).ravel()
    values[keep] = data[:, -1]
    return ScalarField(mask=mask, values=values.reshape(mask.grid.shape))


def write_field_obj(field: ScalarField, path: Path) -> Path:
    """
    Writes the graph of a 2D field as a triangle mesh.

    Every non-EXTERIOR node is a vertex (x, y, u); every grid cell with four non-EXTERIOR corners
    is split into two triangles, counterclockwise seen from +u.
    """
    field = field.full()
    if field.grid.dim != 2:
        raise ExportError(f"OBJ export needs a 2D field, got dimension {field.grid.dim}.")
    present = field.mask.non_exterior
    numbering = np.full(field.grid.shape, -1, dtype=np.int64)
    numbering[present] = np.arange(1, int(present.sum()) + 1)
    corners = present[:-1, :-1] & present[1:, :-1] & present[1:, 1:] & present[:-1, 1:]
    i, j = np.nonzero(corners)
    v00, v10 = numbering[i, j], numbering[i + 1, j]
    v11, v01 = numbering[i + 1, j + 1], numbering[i, j + 1]
    faces = np.concatenate([np.column_stack([v00, v10, v11]), np.column_stack([v00, v11, v01])])
    vertices = _nodes(field)
    try:
        with open(path, "w") as f:
            f.write(f"# {len(vertices)} vertices, {len(faces)} faces\n")
            np.savetxt(f, vertices, fmt="v " + " ".join([CSV_FORMAT] * 3))
            np.savetxt(f, faces, fmt="f %d %d %d")
    except OSError as e:
        raise ExportError(f"Cannot write OBJ to {path}: {e}") from e
    return path


def write_report(report: RunReport, path: Path) -> Path:
    try:
        path.write_text(report.model_dump_json(by_alias=True, indent=2) + "\n")
    except OSError as e:
        raise ExportError(f"Cannot write report to {path}: {e}") from e
    return path


def export_field(
    field: ScalarField, out_dir: Path, formats: Sequence[str], stem: str = "field"
) -> List[Path]:
    """Writes the requested field formats (``csv``, ``obj``) into ``out_dir``; OBJ is skipped unless 2D."""
    written = []
    if "csv" in formats:
        written.append(write_field_csv(field, out_dir / f"{stem}.csv"))
    if "obj" in formats and field.grid.dim == 2:
        written.append(write_field_obj(field, out_dir / f"{stem}.obj"))
    return written
