"""Tests for settings resolution."""

import pytest
from pydantic import ValidationError

from src.config.settings import CONFIG_ENV_VAR, load_settings, read_key_value_file
from src.exceptions import ConfigFileError
from src.models.schemas import EngineConfig


def test_defaults():
  settings = load_settings()
  assert settings.theta == 0.9
  assert settings.beam_width == 5000
  assert settings.epsilon is None
  assert settings.output_format == "text"


def test_environment_prefix(monkeypatch):
  monkeypatch.setenv("PATTERN_ORACLE_THETA", "0.5")
  monkeypatch.setenv("PATTERN_ORACLE_CONSISTENCY_FILTER", "false")
  settings = load_settings()
  assert settings.theta == 0.5
  assert settings.consistency_filter is False


def test_config_file(monkeypatch, tmp_path):
  path = tmp_path / "oracle.conf"
  path.write_text("# tuned\ntheta = 0.7\nbeam-width = 200\nepsilon = none\n", encoding="utf-8")
  monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
  settings = load_settings()
  assert settings.theta == 0.7
  assert settings.beam_width == 200
  assert settings.epsilon is None


def test_environment_beats_config_file(monkeypatch, tmp_path):
  path = tmp_path / "oracle.conf"
  path.write_text("theta = 0.7\n", encoding="utf-8")
  monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
  monkeypatch.setenv("PATTERN_ORACLE_THETA", "0.6")
  assert load_settings().theta == 0.6


def test_overrides_win_and_none_falls_through(monkeypatch):
  monkeypatch.setenv("PATTERN_ORACLE_TOP", "7")
  settings = load_settings(theta=0.3, top=None)
  assert settings.theta == 0.3
  assert settings.top == 7


def test_unknown_key_in_file(monkeypatch, tmp_path):
  path = tmp_path / "oracle.conf"
  path.write_text("thetta = 0.7\n", encoding="utf-8")
  monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
  with pytest.raises(ConfigFileError, match="thetta"):
    load_settings()


def test_missing_config_file(monkeypatch, tmp_path):
  monkeypatch.setenv(CONFIG_ENV_VAR, str(tmp_path / "absent.conf"))
  with pytest.raises(ConfigFileError, match="does not exist"):
    load_settings()


def test_malformed_line(tmp_path):
  path = tmp_path / "oracle.conf"
  path.write_text("theta = 0.7\nbeam_width\n", encoding="utf-8")
  with pytest.raises(ConfigFileError) as info:
    read_key_value_file(path)
  assert info.value.line == 2


def test_out_of_range_value():
  with pytest.raises(ValidationError):
    load_settings(theta=1.5)


def test_engine_config_follows_settings():
  config = EngineConfig.from_settings(load_settings(beam_width=64, consistency_mode="contains"))
  assert config.beam_width == 64
  assert config.consistency_mode == "contains"
  assert config.similarity.theta == 0.9


def test_log_level_is_normalized():
  assert load_settings(log_level="debug").log_level == "DEBUG"
  with pytest.raises(ValidationError):
    load_settings(log_level="chatty")
