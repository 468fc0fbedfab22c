# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from typing import List, Optional, Tuple

from pydantic import BaseModel


class AuditCheck(BaseModel):
    """One named property check; ``value`` is the measured quantity compared against ``tolerance``."""

    id: str
    passed: bool
    value: float
    tolerance: float
    location: Optional[Tuple[float, ...]] = None
    note: Optional[str] = None


class AuditReport(BaseModel):
    """Results of an audit run, one entry per check id."""

    audit: str
    checks: List[AuditCheck] = []

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> List[str]:
        return [check.id for check in self.checks if not check.passed]

    def check(self, check_id: str) -> AuditCheck:
        for check in self.checks:
            if check.id == check_id:
                return check
        raise KeyError(check_id)

    @property
    def worst_location(self) -> Optional[Tuple[float, ...]]:
        """Location reported by the first failing check, if any."""
        for check in self.checks:
            if not check.passed and check.location is not None:
                return check.location
        return None
