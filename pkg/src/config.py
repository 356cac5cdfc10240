"""
Configuration loading

Two layers:
- BoxkitSettings: process settings from the environment (.env honoured by main.py)
- RunConfig: algorithm parameters from a YAML/JSON file, with CLI overrides

Usage:
    from src.config import load_run_config

    config = load_run_config("run.yaml", overrides={"nms": {"n_t": 0.5}})
"""

import json
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml
from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.errors import InvalidConfigError
from src.schemas import RunConfig


class BoxkitSettings(BaseSettings):
    """
    Environment Variables:
        BOXKIT_THREADS: Worker cap for per-image parallelism (default: 1)
        LOG_LEVEL: DEBUG, INFO, WARNING, ERROR (default: INFO)
        STRUCTURED_LOGS_JSON: true for JSON logs (default: false)
    """

    model_config = SettingsConfigDict(extra="ignore")

    threads: int = Field(default=1, ge=1, validation_alias=AliasChoices("BOXKIT_THREADS"))
    log_level: str = Field(default="INFO", validation_alias=AliasChoices("LOG_LEVEL"))
    structured_logs_json: bool = Field(
        default=False, validation_alias=AliasChoices("STRUCTURED_LOGS_JSON")
    )


@lru_cache(maxsize=1)
def get_settings() -> BoxkitSettings:
    return BoxkitSettings()


def _deep_merge(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict):
            current = merged.get(key)
            merged[key] = _deep_merge(current if isinstance(current, dict) else {}, value)
        else:
            merged[key] = value
    return merged


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Read a YAML or JSON config file into a plain dict."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InvalidConfigError(f"Cannot read config file {path}: {e}") from e

    try:
        data = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise InvalidConfigError(f"Malformed config file {path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InvalidConfigError(f"Config file {path} must contain a mapping at top level")
    return data


def load_run_config(
    path: str | Path | None = None, overrides: dict[str, Any] | None = None
) -> RunConfig:
    """
    Build a validated RunConfig.

    Precedence: defaults < config file < overrides. None values in
    overrides are skipped so unset CLI flags do not clobber the file.

    Raises:
        InvalidConfigError: unreadable or malformed file
        pydantic.ValidationError: a value violates its schema
    """
    data = read_config_file(path) if path is not None else {}
    if overrides:
        data = _deep_merge(data, overrides)
    return RunConfig.model_validate(data)
