# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from translator_lab.config.manager import ConfigManager
from translator_lab.config.models import LabSettings, RunConfig

__all__ = ["ConfigManager", "LabSettings", "RunConfig"]
