"""End-to-end guessing: trajectories in, one fused ranked list out."""

from collections.abc import Sequence
from dataclasses import dataclass

from ..config.logging_config import get_logger
from ..exceptions import (
  AllTrajectoriesInvalidError,
  NoCandidatesError,
  PatternOracleError,
  TooFewTurningPointsError,
)
from ..models.domain import Trajectory
from ..models.schemas import CheckConfig, EngineConfig, GuessList
from .candidate_engine import CandidateEngine, consistency_filter, fuse, rank
from .cipher_model import CipherScorer
from .trajectory import check_track, default_epsilon, simplify_track

logger = get_logger()


@dataclass(frozen=True)
class EpsilonPolicy:
  """How the simplification threshold is chosen per trajectory.

  ``retries`` coarser thresholds, each ``retry_step`` times the relative
  default larger, are tried when nothing matches at the default. An
  explicit override is never retried.
  """

  override: float | None = None
  fraction: float = 0.05
  floor: float = 1.0
  retries: int = 2
  retry_step: float = 0.5

  def resolve(self, trajectory: Trajectory) -> float:
    return default_epsilon(trajectory, self.fraction, self.floor, self.override)

  def attempts(self, trajectory: Trajectory) -> list[float]:
    base = self.resolve(trajectory)
    if self.override is not None:
      return [base]
    return [base * (1.0 + self.retry_step * k) for k in range(self.retries + 1)]


class GuessService:
  """Service for turning keypoint trajectories into ranked pattern guesses."""

  def __init__(
    self,
    engine_config: EngineConfig | None = None,
    check_config: CheckConfig | None = None,
    epsilon: EpsilonPolicy | None = None,
    scorer: CipherScorer | None = None,
  ):
    """Initialize the guess service.

    Args:
        engine_config: Candidate generation settings
        check_config: Trajectory check thresholds
        epsilon: Simplification threshold policy
        scorer: Shared cipher scorer; built on demand when omitted
    """
    self.engine_config = engine_config or EngineConfig()
    self.check_config = check_config or CheckConfig()
    self.epsilon = epsilon or EpsilonPolicy()
    self.engine = CandidateEngine(self.engine_config, scorer)
    logger.info("GuessService initialized")

  def guess_one(self, trajectory: Trajectory) -> GuessList:
    """Ranked guesses for a single trajectory, skipping the validity check.

    Raises:
        TooFewTurningPointsError: The simplified trajectory has no unit
        NoCandidatesError: Nothing matches the middle unit
    """
    trim = trajectory.meta.get("redundant_ends")
    failure: PatternOracleError | None = None
    guesses: GuessList | None = None
    for epsilon in self.epsilon.attempts(trajectory):
      poly = simplify_track(trajectory, epsilon)
      logger.info(
        f"{trajectory.source}: {len(trajectory)} points -> {len(poly)} turning points "
        f"(epsilon {epsilon:.2f})"
      )
      try:
        candidates = self.engine.generate(poly, trim_redundant_ends=trim)
      except (TooFewTurningPointsError, NoCandidatesError) as e:
        logger.debug(f"{trajectory.source}: {e.message}")
        failure = e
        continue
      guesses = rank(consistency_filter(candidates, poly, self.engine_config))
      if guesses.entries:
        return guesses
    if guesses is not None:
      return guesses
    raise failure

  def guess(self, trajectories: Sequence[Trajectory]) -> GuessList:
    """Check, simplify and match every trajectory, then fuse the lists.

    Trajectories that fail the check or yield no candidates are skipped
    with a warning.

    Raises:
        AllTrajectoriesInvalidError: No trajectory produced a list
    """
    lists: list[GuessList] = []
    reasons: dict[str, str] = {}
    for index, trajectory in enumerate(trajectories):
      name = trajectory.source or f"trajectory-{index}"
      if name in reasons:
        name = f"{name}#{index}"
      verdict = check_track(trajectory, self.check_config)
      if not verdict.valid:
        logger.warning(f"Skipping {name}: track check failed ({verdict.reason})")
        reasons[name] = f"track check failed ({verdict.reason})"
        continue
      try:
        guesses = self.guess_one(trajectory)
      except PatternOracleError as e:
        if e.kind != "domain":
          raise
        logger.warning(f"Skipping {name}: {e.message}")
        reasons[name] = e.message
        continue
      if not guesses.entries:
        logger.warning(f"Skipping {name}: no candidate survived filtering")
        reasons[name] = "no candidate survived filtering"
        continue
      lists.append(guesses)

    if not lists:
      raise AllTrajectoriesInvalidError(reasons)
    fused = fuse(lists)
    logger.info(f"Fused {len(lists)} list(s) into {len(fused)} guesses")
    return fused
