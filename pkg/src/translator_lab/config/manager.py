# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import ValidationError

from translator_lab.config.models import RunConfig
from translator_lab.exceptions import ConfigurationError


class ConfigManager:
    """Manages the loading and validation of run configuration."""

    def load_run_config(self, config_path: Optional[Path], overrides: Dict[str, Any]) -> RunConfig:
        """
        Loads an optional YAML file of parameters and applies command-line overrides on top.

        Args:
            config_path: Path to a YAML mapping of parameters, or None for flags only.
            overrides: Values given on the command line; None entries are ignored.

        Returns:
            A validated RunConfig.

        Raises:
            ConfigurationError: If the file is missing or malformed, or the merged values fail validation.
        """
        data: Dict[str, Any] = {}
        if config_path is not None:
            if not config_path.is_file():
                raise ConfigurationError(f"Configuration file not found at: {config_path}")
            try:
                with open(config_path, "r") as f:
                    loaded = yaml.safe_load(f)
                if loaded is None:
                    loaded = {}
                if not isinstance(loaded, dict):
                    raise TypeError("Configuration content is not a valid dictionary.")
            except (yaml.YAMLError, TypeError) as e:
                raise ConfigurationError(f"Failed to load configuration: {e}") from e
            data.update(loaded)

        data.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return RunConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigurationError(f"Failed to validate configuration: {e}") from e
