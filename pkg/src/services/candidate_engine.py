"""Middle-out candidate generation, consistency filtering, ranking and fusion."""

from collections.abc import Iterable, Sequence
from dataclasses import replace
from functools import lru_cache
import math

import numpy as np

from ..config.logging_config import get_logger
from ..exceptions import InvalidPatternError, NoCandidatesError
from ..models.domain import CandidateEntry, Polyline, Unit
from ..models.schemas import EngineConfig, GuessEntry, GuessList
from .cipher_model import CipherScorer, extract_units
from .pattern_space import MIDPOINTS, parse_intersections, segments_of, validate_pattern

logger = get_logger()

CONFIDENCE_DECIMALS = 9


@lru_cache(maxsize=200_000)
def expand_turning_keys(turning: tuple[int, ...]) -> tuple[int, ...] | None:
  """Full key sequence drawn through the given turning keys.

  A stroke over an unvisited dot selects it; over a visited dot it passes.
  Returns None when a key would be selected twice.
  """
  keys = [turning[0]]
  seen = {turning[0]}
  for a, b in zip(turning, turning[1:], strict=False):
    mid = MIDPOINTS.get((a, b))
    if mid is not None and mid not in seen:
      keys.append(mid)
      seen.add(mid)
    if b in seen:
      return None
    keys.append(b)
    seen.add(b)
  return tuple(keys)


def engine_window(unit_count: int, trim_redundant_ends: bool) -> range:
  """Unit indexes the engine consumes.

  With trimming the first and last unit, which carry the redundant head
  and tail strokes, are left out when at least one unit remains.
  """
  if trim_redundant_ends and unit_count >= 3:
    return range(1, unit_count - 1)
  return range(unit_count)


def _sort_key(entry: CandidateEntry) -> tuple[float, tuple[int, ...]]:
  return (-round(entry.confidence, CONFIDENCE_DECIMALS), entry.turning_keys)


class CandidateEngine:
  """Grows pattern hypotheses from the middle unit outward.

  Every unit is scored against the whole dictionary once. Candidates are
  seeded from the middle unit's matches, then joined with ciphers of the
  next unit to the right and to the left in turn. A join requires the
  cipher's first two turning dots (rightward) or last two (leftward) to
  equal the candidate's keys at the shared turning points, and the grown
  key sequence to stay drawable.
  """

  def __init__(self, config: EngineConfig | None = None, scorer: CipherScorer | None = None):
    self.config = config or EngineConfig()
    self.scorer = scorer or CipherScorer()
    logger.debug(f"CandidateEngine initialized with beam width {self.config.beam_width}")

  def generate(self, poly: Polyline, trim_redundant_ends: bool | None = None) -> list[CandidateEntry]:
    """Candidates for a polyline, sorted by descending confidence.

    Args:
        poly: Simplified trajectory
        trim_redundant_ends: Overrides the configured trimming

    Returns:
        Candidates that consumed at least ``min_units_consumed`` units

    Raises:
        TooFewTurningPointsError: The polyline yields no unit
        NoCandidatesError: No cipher survives for the middle unit
    """
    cfg = self.config
    trim = cfg.trim_redundant_ends if trim_redundant_ends is None else trim_redundant_ends
    units = extract_units(poly, cfg.unit_weight)
    window = engine_window(len(units), trim)
    first, last = window.start, window.stop - 1
    min_units = cfg.min_units_consumed or len(window)
    min_units = min(min_units, len(window))
    scores = self.scorer.score(units, cfg.similarity, cfg.min_similarity)

    seed = first + (len(window) - 1) // 2
    candidates = self._seed(seed, units, scores)
    if not candidates:
      raise NoCandidatesError(seed)
    logger.debug(f"Seeded {len(candidates)} candidates from unit {seed}")

    right, left = seed + 1, seed - 1
    while right <= last or left >= first:
      if right <= last:
        candidates = self._step(candidates, units, scores, "right", first, last, min_units)
        right += 1
      if left >= first:
        candidates = self._step(candidates, units, scores, "left", first, last, min_units)
        left -= 1
      logger.debug(f"{len(candidates)} candidates after extending to units {left + 1}..{right - 1}")

    window_units = len(window)
    result = [
      self._finish(entry, window_units)
      for entry in candidates
      if entry.units_consumed >= min_units
    ]
    result.sort(key=_sort_key)
    logger.info(f"Generated {len(result)} candidates from {len(units)} units")
    return result

  def _seed(self, seed: int, units: list[Unit], scores: np.ndarray) -> list[CandidateEntry]:
    entries = []
    row = scores[seed]
    for index in np.flatnonzero(~np.isnan(row)):
      turning = self.scorer.ciphers[index].turning_dots
      keys = expand_turning_keys(turning)
      if keys is None:
        continue
      entries.append(
        CandidateEntry(
          turning_keys=turning,
          keys=keys,
          passed_segments=frozenset(units[seed].source_segments),
          confidence=float(row[index]) * units[seed].weight,
          lo=seed,
          hi=seed + 2,
        )
      )
    entries.sort(key=_sort_key)
    return entries[: self.config.beam_width]

  def _step(
    self,
    candidates: list[CandidateEntry],
    units: list[Unit],
    scores: np.ndarray,
    direction: str,
    first: int,
    last: int,
    min_units: int,
  ) -> list[CandidateEntry]:
    grown: list[CandidateEntry] = []
    for entry in candidates:
      if direction == "right":
        unit_index = entry.hi - 1
        is_open = entry.open_right and unit_index <= last
      else:
        unit_index = entry.lo - 1
        is_open = entry.open_left and unit_index >= first
      if not is_open:
        grown.append(entry)
        continue

      extended = self._join(entry, units[unit_index], scores[unit_index], direction)
      if extended:
        grown.extend(extended)
        continue
      closed = (
        replace(entry, open_right=False)
        if direction == "right"
        else replace(entry, open_left=False)
      )
      if _achievable(closed, first, last) >= min_units:
        grown.append(closed)

    grown.sort(key=_sort_key)
    return grown[: self.config.beam_width]

  def _join(
    self,
    entry: CandidateEntry,
    unit: Unit,
    row: np.ndarray,
    direction: str,
  ) -> list[CandidateEntry]:
    tk = entry.turning_keys
    result = []
    if direction == "right":
      options = self.scorer.by_prefix.get((tk[-2], tk[-1]), ())
    else:
      options = self.scorer.by_suffix.get((tk[0], tk[1]), ())
    for index in options:
      score = row[index]
      if math.isnan(score):
        continue
      d1, _, d3 = self.scorer.ciphers[index].turning_dots
      turning = tk + (d3,) if direction == "right" else (d1,) + tk
      keys = expand_turning_keys(turning)
      if keys is None:
        continue
      result.append(
        CandidateEntry(
          turning_keys=turning,
          keys=keys,
          passed_segments=entry.passed_segments | frozenset(unit.source_segments),
          confidence=entry.confidence + float(score) * unit.weight,
          lo=entry.lo if direction == "right" else entry.lo - 1,
          hi=entry.hi + 1 if direction == "right" else entry.hi,
          open_left=entry.open_left,
          open_right=entry.open_right,
        )
      )
    return result

  @staticmethod
  def _finish(entry: CandidateEntry, window_units: int) -> CandidateEntry:
    return replace(entry, complete=entry.units_consumed == window_units)


def _achievable(entry: CandidateEntry, first: int, last: int) -> int:
  """Units the candidate could still reach given its open sides."""
  reach = entry.units_consumed
  if entry.open_right:
    reach += max(0, last - (entry.hi - 1) + 1)
  if entry.open_left:
    reach += max(0, (entry.lo - 1) - first + 1)
  return reach


def generate_candidates(poly: Polyline, cfg: EngineConfig | None = None) -> list[CandidateEntry]:
  """Candidates for one polyline with a fresh engine."""
  return CandidateEngine(cfg).generate(poly)


def consistency_filter(
  candidates: Sequence[CandidateEntry],
  traj_poly: Polyline,
  cfg: EngineConfig | None = None,
) -> list[CandidateEntry]:
  """Keep candidates whose crossings agree with the trajectory's.

  The candidate's segments between consecutive turning keys line up one to
  one with trajectory segments ``lo .. hi - 1``. In ``equal`` mode every
  gap's T/F string must match the trajectory's over that window; in
  ``contains`` mode it must occur inside the trajectory string built from
  every segment.
  """
  cfg = cfg or EngineConfig()
  if not cfg.consistency_filter:
    return list(candidates)
  traj_segments = traj_poly.segments()
  full = parse_intersections(traj_segments, cfg.crossing_margin)
  windows: dict[tuple[int, int], dict[int, str]] = {}
  kept = []
  for entry in candidates:
    pattern_dict = parse_intersections(segments_of(entry.turning_keys))
    if cfg.consistency_mode == "equal":
      span = (entry.lo, entry.hi)
      if span not in windows:
        windows[span] = parse_intersections(
          traj_segments[entry.lo : entry.hi], cfg.crossing_margin
        )
      match = pattern_dict == windows[span]
    else:
      match = all(code in full.get(d, "") for d, code in pattern_dict.items())
    if match:
      kept.append(entry)
  logger.debug(f"Consistency filter kept {len(kept)} of {len(candidates)} candidates")
  return kept


def _ranked(totals: dict[str, float]) -> GuessList:
  ordered = sorted(
    totals.items(), key=lambda item: (-round(item[1], CONFIDENCE_DECIMALS), item[0])
  )
  entries: list[GuessEntry] = []
  previous: float | None = None
  rank = 0
  for position, (pattern, confidence) in enumerate(ordered, start=1):
    rounded = round(confidence, CONFIDENCE_DECIMALS)
    if rounded != previous:
      rank = position
      previous = rounded
    entries.append(GuessEntry(pattern=pattern, confidence=confidence, rank=rank))
  return GuessList(entries=entries)


def rank(candidates: Iterable[CandidateEntry]) -> GuessList:
  """Drop invalid keys, keep the best confidence per pattern, sort descending."""
  best: dict[str, float] = {}
  for entry in candidates:
    try:
      pattern = validate_pattern(entry.keys)
    except InvalidPatternError:
      continue
    if entry.confidence > best.get(pattern.text, -math.inf):
      best[pattern.text] = entry.confidence
  return _ranked(best)


def fuse(lists: Sequence[GuessList]) -> GuessList:
  """Sum each pattern's confidence across lists and re-rank."""
  totals: dict[str, float] = {}
  for guess_list in lists:
    for entry in guess_list.entries:
      totals[entry.pattern] = totals.get(entry.pattern, 0.0) + entry.confidence
  return _ranked(totals)
