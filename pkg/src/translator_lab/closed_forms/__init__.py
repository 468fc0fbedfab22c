# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from translator_lab.closed_forms.bowl import BowlProfile, bowl_profile
from translator_lab.closed_forms.surfaces import (
    Bowl,
    ClosedFormSurface,
    GrimReaper,
    GrimReaperArc,
    Plane,
    TiltedGrimReaper,
    parse_surface,
)

__all__ = [
    "Bowl",
    "BowlProfile",
    "ClosedFormSurface",
    "GrimReaper",
    "GrimReaperArc",
    "Plane",
    "TiltedGrimReaper",
    "bowl_profile",
    "parse_surface",
]
