"""Wiring of services from resolved settings."""

from functools import lru_cache

from ..config.settings import Settings
from ..interfaces.report_writer import IReportWriter
from ..models.schemas import CheckConfig, EngineConfig, TiePolicy
from ..services.cipher_model import CipherScorer
from ..services.evaluation import Evaluator
from ..services.guess_service import EpsilonPolicy, GuessService
from ..services.writer_factory import ReportWriterFactory


@lru_cache
def get_cipher_scorer() -> CipherScorer:
  """Shared scorer over the immutable cipher dictionary."""
  return CipherScorer()


def get_epsilon_policy(settings: Settings) -> EpsilonPolicy:
  return EpsilonPolicy(
    override=settings.epsilon,
    fraction=settings.epsilon_fraction,
    floor=settings.epsilon_floor,
    retries=settings.epsilon_retries,
  )


def get_guess_service(settings: Settings) -> GuessService:
  """Guess service configured from settings."""
  return GuessService(
    EngineConfig.from_settings(settings),
    CheckConfig.from_settings(settings),
    get_epsilon_policy(settings),
    get_cipher_scorer(),
  )


def get_evaluator(
  settings: Settings, tie_policy: TiePolicy = "optimistic", max_attempts: int = 20
) -> Evaluator:
  """Evaluator configured from settings."""
  return Evaluator(
    EngineConfig.from_settings(settings),
    CheckConfig.from_settings(settings),
    get_epsilon_policy(settings),
    tie_policy=tie_policy,
    max_attempts=max_attempts,
    jobs=settings.jobs,
    scorer=get_cipher_scorer(),
  )


def get_writer(settings: Settings) -> IReportWriter:
  return ReportWriterFactory.create_writer(settings.output_format)
