# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

import hashlib
import json
from pathlib import Path
from typing import Optional, Tuple

import diskcache
import numpy as np

from translator_lab.grid.domains import DomainMask
from translator_lab.grid.fields import ScalarField
from translator_lab.grid.spec import SymmetryFlags
from translator_lab.logging import logger
from translator_lab.pde.models import ContinuationSchedule, NewtonSettings, SolveReport

# Bumped whenever a change to the discretization invalidates stored solutions.
CACHE_FORMAT = 1


class SolveCache:
    """Persists Dirichlet solutions keyed by every input that determines them."""

    def __init__(self, cache_dir: Optional[Path] = None):
        if cache_dir is None:
            cache_dir = Path.home() / ".translator_lab" / "cache"
        self.cache = diskcache.Cache(str(cache_dir))

    @staticmethod
    def key(
        mask: DomainMask,
        schedule: ContinuationSchedule,
        settings: NewtonSettings,
        symmetry: SymmetryFlags,
    ) -> str:
        payload = json.dumps(
            {
                "format": CACHE_FORMAT,
                "descriptor": mask.descriptor.model_dump(),
                "grid": mask.grid.model_dump(),
                "schedule": schedule.model_dump(),
                "settings": settings.model_dump(),
                "symmetry": symmetry.model_dump(),
            },
            sort_keys=True,
        )
        return "solve_" + hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def get(self, key: str, mask: DomainMask) -> Optional[Tuple[ScalarField, SolveReport]]:
        cached = self.cache.get(key)
        if cached is None:
            return None
        values, report_json = cached
        logger.debug(f"Solve cache hit for {key[:16]}.")
        return ScalarField(mask=mask, values=np.asarray(values)), SolveReport.model_validate_json(report_json)

    def put(self, key: str, field: ScalarField, report: SolveReport) -> None:
        self.cache.set(key, (field.values, report.model_dump_json()))

    def close(self) -> None:
        self.cache.close()
