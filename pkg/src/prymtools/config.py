from __future__ import annotations

import configparser
from pathlib import Path
from typing import Any

from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_CONFIG_FILE = "env/config.ini"


class Config:
    section = "prym"

    def __init__(self, config_file: str | Path | None = None) -> None:
        if config_file is None:
            config_file = DEFAULT_CONFIG_FILE
        self.config_file = Path(config_file)
        self.config = configparser.ConfigParser()
        self.config.read(self.config_file)

    def get_value(self, option: str, default: str | None = None) -> str | None:
        if self.config.has_option(self.section, option):
            return self.config.get(self.section, option)
        return default

    def values(self) -> dict[str, str]:
        if not self.config.has_section(self.section):
            return {}
        return dict(self.config.items(self.section))


class PrymSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="PRYM_")

    seed: int = 0
    cases: int = 50
    workers: int = 4
    log_level: str = "INFO"
    log_dir: str = "logs"
    max_path_length: int = 12


def load_settings(
    config_file: str | Path | None = None, **overrides: Any
) -> PrymSettings:
    """Ini file values first, then PRYM_* environment variables, then overrides.

    Init kwargs beat the environment in pydantic-settings, so the ini values
    are only passed for keys the environment does not set.
    """
    env_settings = PrymSettings()
    file_values = Config(config_file).values()
    merged: dict[str, Any] = {}
    for name in PrymSettings.model_fields:
        if name in env_settings.model_fields_set:
            merged[name] = getattr(env_settings, name)
        elif name in file_values:
            merged[name] = file_values[name]
    merged.update({key: value for key, value in overrides.items() if value is not None})
    return PrymSettings(**merged)
