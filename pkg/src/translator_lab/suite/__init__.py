# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from translator_lab.suite.audits import audit_ellipsoid, audit_rectangle, audit_slab
from translator_lab.suite.models import AuditCheck, AuditReport
from translator_lab.suite.solves import solve_domain, solve_ellipsoid, solve_rectangle, solve_slab

__all__ = [
    "AuditCheck",
    "AuditReport",
    "audit_ellipsoid",
    "audit_rectangle",
    "audit_slab",
    "solve_domain",
    "solve_ellipsoid",
    "solve_rectangle",
    "solve_slab",
]
