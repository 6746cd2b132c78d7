"""Centralized configuration management.

Values are resolved, highest priority first, from explicit keyword
arguments (command-line flags), ``PATTERN_ORACLE_*`` environment variables,
the key=value file named by ``PATTERN_ORACLE_CONFIG``, a ``.env`` file and
the defaults below.
"""

from functools import lru_cache
import os
from pathlib import Path
from typing import Any, Literal

from pydantic import Field, field_validator
from pydantic.fields import FieldInfo
from pydantic_settings import (
  BaseSettings,
  PydanticBaseSettingsSource,
  SettingsConfigDict,
)

from ..exceptions import ConfigFileError

CONFIG_ENV_VAR = "PATTERN_ORACLE_CONFIG"
LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


def read_key_value_file(path: Path) -> dict[str, str]:
  """Parse a ``key = value`` configuration file.

  Args:
      path: File to read

  Returns:
      Mapping of keys to raw string values

  Raises:
      ConfigFileError: If a line is not of the form key = value
  """
  values: dict[str, str] = {}
  for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
    line = raw.split("#", 1)[0].strip()
    if not line:
      continue
    if "=" not in line:
      raise ConfigFileError(str(path), number, f"expected key = value, got '{raw}'")
    key, value = (part.strip() for part in line.split("=", 1))
    if not key:
      raise ConfigFileError(str(path), number, "empty key")
    values[key.lower().replace("-", "_")] = value.strip("\"'")
  return values


class KeyValueFileSource(PydanticBaseSettingsSource):
  """Settings source backed by the file named in ``PATTERN_ORACLE_CONFIG``."""

  def __init__(self, settings_cls: type[BaseSettings]):
    super().__init__(settings_cls)
    self._values: dict[str, str] = {}
    location = os.environ.get(CONFIG_ENV_VAR)
    if not location:
      return
    path = Path(location)
    if not path.is_file():
      raise ConfigFileError(str(path), 0, "config file does not exist")
    self._values = read_key_value_file(path)
    unknown = sorted(set(self._values) - set(settings_cls.model_fields))
    if unknown:
      raise ConfigFileError(str(path), 0, f"unknown keys: {', '.join(unknown)}")

  def get_field_value(self, field: FieldInfo, field_name: str) -> tuple[Any, str, bool]:  # noqa: ARG002
    return self._values.get(field_name), field_name, False

  def __call__(self) -> dict[str, Any]:
    return {
      name: value
      for name, value in self._values.items()
      if value.lower() not in ("", "none", "null")
    }


class Settings(BaseSettings):
  """Application settings."""

  app_name: str = "pattern-oracle"
  app_version: str = "0.1.0"

  epsilon: float | None = Field(default=None, gt=0)
  epsilon_fraction: float = Field(default=0.05, gt=0)
  epsilon_floor: float = Field(default=1.0, gt=0)
  epsilon_retries: int = Field(default=2, ge=0)

  theta: float = Field(default=0.9, ge=0.0, le=1.0)
  unit_weight: float = Field(default=1.0, gt=0)
  beam_width: int = Field(default=5000, ge=1)
  min_similarity: float = Field(default=0.0, ge=0.0, le=1.0)
  consistency_filter: bool = True
  consistency_mode: Literal["equal", "contains"] = "equal"
  trim_redundant_ends: bool = True
  crossing_margin: float = Field(default=0.1, ge=0.0, lt=0.5)

  check_window: int = Field(default=5, ge=1)
  static_radius: float = Field(default=5.0, gt=0)
  static_limit: int = Field(default=20, ge=1)
  jump_factor: float = Field(default=2.0, gt=0)

  top: int = Field(default=20, ge=1)
  seed: int = 0
  output_format: Literal["text", "json", "csv"] = "text"
  jobs: int = Field(default=1, ge=1)

  log_level: str = "WARNING"
  log_dir: str | None = None

  @field_validator("log_level")
  @classmethod
  def log_level_must_be_known(cls, v: str) -> str:
    """Validate the level against the names loguru accepts."""
    level = v.upper()
    if level not in LOG_LEVELS:
      raise ValueError(f"log level must be one of {', '.join(LOG_LEVELS)}")
    return level

  model_config = SettingsConfigDict(
    env_prefix="PATTERN_ORACLE_",
    env_file=".env",
    env_file_encoding="utf-8",
    case_sensitive=False,
    extra="ignore",
  )

  @classmethod
  def settings_customise_sources(
    cls,
    settings_cls: type[BaseSettings],
    init_settings: PydanticBaseSettingsSource,
    env_settings: PydanticBaseSettingsSource,
    dotenv_settings: PydanticBaseSettingsSource,
    file_secret_settings: PydanticBaseSettingsSource,
  ) -> tuple[PydanticBaseSettingsSource, ...]:
    return (
      init_settings,
      env_settings,
      KeyValueFileSource(settings_cls),
      dotenv_settings,
      file_secret_settings,
    )


def load_settings(**overrides: Any) -> Settings:
  """Build settings with explicit overrides on top of every other source.

  Args:
      **overrides: Field values that win over env and config file; ``None``
          values are ignored so unset flags fall through

  Returns:
      Resolved settings
  """
  return Settings(**{k: v for k, v in overrides.items() if v is not None})


@lru_cache
def get_settings() -> Settings:
  """Get the process-wide settings resolved without overrides."""
  return load_settings()
