"""Shared fixtures."""

from collections.abc import Callable

import numpy as np
import pytest

from src.models.domain import Trajectory
from src.models.schemas import CheckConfig, EngineConfig, SynthConfig
from src.services.cipher_model import CipherScorer, build_cipher_dictionary
from src.services.guess_service import GuessService
from src.services.synthesis import synthesize_trajectory


@pytest.fixture(scope="session")
def ciphers():
  return build_cipher_dictionary()


@pytest.fixture(scope="session")
def scorer(ciphers) -> CipherScorer:
  return CipherScorer(ciphers)


@pytest.fixture
def engine_config() -> EngineConfig:
  return EngineConfig()


@pytest.fixture
def check_config() -> CheckConfig:
  return CheckConfig()


@pytest.fixture
def rng() -> np.random.Generator:
  return np.random.default_rng(20240517)


@pytest.fixture
def guess_service(engine_config, check_config, scorer) -> GuessService:
  return GuessService(engine_config, check_config, scorer=scorer)


@pytest.fixture
def synth() -> Callable[..., Trajectory]:
  """Build a synthetic trajectory from a pattern and config overrides."""

  def make(pattern: str, **overrides) -> Trajectory:
    return synthesize_trajectory(SynthConfig(pattern=pattern, **overrides))

  return make


@pytest.fixture(autouse=True)
def _isolated_settings(monkeypatch, tmp_path):
  """Keep the developer's environment out of settings resolution."""
  for name in (
    "PATTERN_ORACLE_CONFIG",
    "PATTERN_ORACLE_EPSILON",
    "PATTERN_ORACLE_THETA",
    "PATTERN_ORACLE_OUTPUT_FORMAT",
    "PATTERN_ORACLE_LOG_LEVEL",
    "PATTERN_ORACLE_JOBS",
    "PATTERN_ORACLE_TOP",
  ):
    monkeypatch.delenv(name, raising=False)
  monkeypatch.chdir(tmp_path)
