# Copyright (c) 2026 The translator_lab Authors
#
# Licensed under the MIT License.
# A copy of the license is available in the LICENSE file.

from pathlib import Path

import pytest
from pydantic import ValidationError

from translator_lab.config.models import REQUIRED_PARAMETERS, LabSettings, RunConfig


def test_run_config_defaults():
    """Tests the defaults of a minimal run."""
    config = RunConfig(command="bowl", n=1)
    assert config.out == Path(".")
    assert config.formats == ["csv", "obj", "json"]
    assert config.lam == 0.5
    assert config.steps == 16
    assert config.newton.max_iterations > 0
    assert not config.timing


@pytest.mark.parametrize("command", sorted(REQUIRED_PARAMETERS))
def test_every_command_lists_its_requirements(command):
    """Tests that a bare command fails validation naming what it lacks."""
    with pytest.raises(ValidationError, match="requires"):
        RunConfig(command=command)


def test_audit_requires_domain_parameters():
    """Tests that an audit checks the parameters of its domain kind."""
    with pytest.raises(ValidationError, match="Auditing a slab domain requires: a, R"):
        RunConfig(command="audit", domain="slab", h=0.1, b=2.0)
    config = RunConfig(command="audit", domain="rect", h=0.1, L=2.0, b=1.0)
    assert config.domain == "rect"


@pytest.mark.parametrize(
    "values",
    [
        {"command": "nonsense"},
        {"command": "solve-rect", "L": 1.0, "b": 1.0, "h": -0.1},
        {"command": "solve-rect", "L": 1.0, "b": 1.0, "h": 0.1, "unknown": 1},
        {"command": "export", "source": "run", "formats": ["png"]},
    ],
)
def test_run_config_rejects_bad_values(values):
    """Tests that unknown commands, nonpositive sizes, extra keys and unknown formats are rejected."""
    with pytest.raises(ValidationError):
        RunConfig(**values)


def test_params_echo_only_set_values():
    """Tests that params() drops unset values, the command and the output directory."""
    params = RunConfig(command="solve-rect", L=2.0, b=1.0, h=0.25).params()
    assert params["L"] == 2.0
    assert "out" not in params
    assert "command" not in params
    assert "a" not in params


def test_lab_settings_from_environment(monkeypatch, tmp_path):
    """Tests that TRANSLATOR_LAB_* variables configure the process settings."""
    monkeypatch.setenv("TRANSLATOR_LAB_THREADS", "4")
    monkeypatch.setenv("TRANSLATOR_LAB_CACHE_DIR", str(tmp_path))
    monkeypatch.setenv("TRANSLATOR_LAB_LOG_LEVEL", "DEBUG")
    settings = LabSettings()
    assert settings.threads == 4
    assert settings.cache_dir == tmp_path
    assert settings.log_level == "DEBUG"


def test_lab_settings_defaults(monkeypatch):
    """Tests the settings without any environment."""
    for name in ("TRANSLATOR_LAB_THREADS", "TRANSLATOR_LAB_CACHE_DIR", "TRANSLATOR_LAB_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    settings = LabSettings()
    assert settings.threads == 1
    assert settings.cache_dir is None
