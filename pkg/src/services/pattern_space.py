"""The 3x3 pattern space: validity, enumeration, segments and complexity.

Key ``k`` sits at ``((k - 1) % 3, (k - 1) // 3)`` with y growing downward.
A stroke between two keys whose midpoint is itself a key must not pass an
unvisited dot; the pattern has to select that dot first.
"""

from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
import math
import re

from ..config.logging_config import get_logger
from ..constants import constants
from ..exceptions import (
  DuplicateKeyError,
  KeyOutOfRangeError,
  PatternFormatError,
  SkippedUnvisitedPointError,
  TooShortError,
)
from ..models.domain import GridPoint, Pattern, Segment, SegmentList
from ..models.schemas import ComplexityScore
from .geometry import segments_cross

logger = get_logger()

KEYS: tuple[int, ...] = tuple(range(1, 10))
INTERSECTION_GAPS: tuple[int, ...] = constants.intersection_gaps

_PATTERN_TEXT = re.compile(r"^\s*\d+(\s*-\s*\d+)*\s*$")


def position(key: int) -> tuple[int, int]:
  """Grid position of a key."""
  return GridPoint.of(key).position


def key_at(x: int, y: int) -> int | None:
  """Key at a grid position, or None off the grid."""
  if 0 <= x < 3 and 0 <= y < 3:
    return 3 * y + x + 1
  return None


def _build_midpoints() -> dict[tuple[int, int], int]:
  table = {}
  for a in KEYS:
    for b in KEYS:
      if a == b:
        continue
      (ax, ay), (bx, by) = position(a), position(b)
      if (ax + bx) % 2 == 0 and (ay + by) % 2 == 0:
        table[(a, b)] = key_at((ax + bx) // 2, (ay + by) // 2)
  return table


# (a, b) -> key passed halfway between them; 8 unordered pairs
MIDPOINTS: dict[tuple[int, int], int] = _build_midpoints()


def midpoint(a: int, b: int) -> int | None:
  return MIDPOINTS.get((a, b))


def validate_pattern(keys: Sequence[int]) -> Pattern:
  """Check a key sequence against the four pattern lock rules.

  Args:
      keys: Ordered keys

  Returns:
      The validated pattern

  Raises:
      TooShortError: Fewer than four keys
      KeyOutOfRangeError: A key outside 1..9
      DuplicateKeyError: A key used twice
      SkippedUnvisitedPointError: A stroke passes a dot not yet selected
  """
  keys = tuple(int(k) for k in keys)
  for key in keys:
    if not 1 <= key <= 9:
      raise KeyOutOfRangeError(keys, key)
  if len(keys) < constants.min_pattern_length:
    raise TooShortError(keys)
  seen: set[int] = set()
  for index, key in enumerate(keys):
    if key in seen:
      raise DuplicateKeyError(keys, key)
    if index:
      mid = MIDPOINTS.get((keys[index - 1], key))
      if mid is not None and mid not in seen:
        raise SkippedUnvisitedPointError(keys, (keys[index - 1], key), mid)
    seen.add(key)
  return Pattern(keys=keys)


def parse_pattern(text: str) -> Pattern:
  """Parse and validate the dash-separated text form, e.g. ``1-6-8-3``.

  Raises:
      PatternFormatError: Text is not a dash-separated list of integers
      InvalidPatternError: The keys break a lock rule
  """
  if not isinstance(text, str) or not _PATTERN_TEXT.match(text):
    raise PatternFormatError(str(text))
  return validate_pattern([int(part) for part in text.split("-")])


def format_pattern(keys: Sequence[int]) -> str:
  return "-".join(str(k) for k in keys)


def is_valid_step(visited: set[int] | frozenset[int], last: int, key: int) -> bool:
  """Whether ``key`` may follow ``last`` given the visited dots."""
  if key in visited:
    return False
  mid = MIDPOINTS.get((last, key))
  return mid is None or mid in visited


def enumerate_valid_patterns(
  first_key: int | None = None, length: int | None = None
) -> Iterator[Pattern]:
  """Yield every valid pattern once, in lexicographic key order.

  Args:
      first_key: Only patterns starting at this key
      length: Only patterns of this length

  Yields:
      Valid patterns
  """
  min_len = length or constants.min_pattern_length
  max_len = length or constants.max_pattern_length
  starts = (first_key,) if first_key is not None else KEYS

  def extend(path: list[int], visited: set[int]) -> Iterator[Pattern]:
    if len(path) >= min_len:
      yield Pattern(keys=tuple(path))
    if len(path) == max_len:
      return
    last = path[-1]
    for key in KEYS:
      if is_valid_step(visited, last, key):
        path.append(key)
        visited.add(key)
        yield from extend(path, visited)
        visited.discard(key)
        path.pop()

  for start in starts:
    yield from extend([start], {start})


def _count_from(last: int, visited: int, depth: int, counts: list[int]) -> None:
  counts[depth] += 1
  if depth == constants.max_pattern_length:
    return
  for key in KEYS:
    bit = 1 << key
    if visited & bit:
      continue
    mid = MIDPOINTS.get((last, key))
    if mid is not None and not visited & (1 << mid):
      continue
    _count_from(key, visited | bit, depth + 1, counts)


@lru_cache(maxsize=16)
def _counts(first_key: int | None) -> tuple[int, ...]:
  counts = [0] * (constants.max_pattern_length + 1)
  for start in (first_key,) if first_key is not None else KEYS:
    _count_from(start, 1 << start, 1, counts)
  return tuple(counts)


def count_valid_patterns(first_key: int | None = None) -> dict[int, int]:
  """Number of valid patterns per length 4..9."""
  counts = _counts(first_key)
  return {
    n: counts[n]
    for n in range(constants.min_pattern_length, constants.max_pattern_length + 1)
  }


def _edge_direction(a: int, b: int) -> tuple[int, int]:
  (ax, ay), (bx, by) = position(a), position(b)
  dx, dy = bx - ax, by - ay
  g = math.gcd(dx, dy)
  return (dx // g, dy // g)


def turning_keys(keys: Sequence[int]) -> tuple[int, ...]:
  """Keys where the drawing direction changes, plus both ends."""
  keys = tuple(keys)
  if len(keys) <= 2:
    return keys
  kept = [keys[0]]
  for i in range(1, len(keys) - 1):
    if _edge_direction(keys[i - 1], keys[i]) != _edge_direction(keys[i], keys[i + 1]):
      kept.append(keys[i])
  kept.append(keys[-1])
  return tuple(kept)


def segments_of(keys: Sequence[int]) -> tuple[Segment, ...]:
  """Segments joining consecutive keys, in integer grid coordinates."""
  return tuple((position(a), position(b)) for a, b in zip(keys, keys[1:], strict=False))


def pattern_to_segments(p: Pattern) -> SegmentList:
  """Merged segments of a pattern; pass-through keys do not split a stroke."""
  corners = turning_keys(p.keys)
  return SegmentList(segments=segments_of(corners), turning_keys=corners)


def parse_intersections(
  segments: SegmentList | Sequence[Segment], margin: float = 0.0
) -> dict[int, str]:
  """Crossing record per index gap 2..7.

  Character ``i`` of entry ``d`` is ``T`` iff segment ``i`` properly crosses
  segment ``i + d``. Gaps with no segment pair are omitted.

  Args:
      segments: Segment list, integer coordinates for exact tests
      margin: Parameter margin applied to float coordinates

  Returns:
      Mapping of gap to a T/F string
  """
  segs = segments.segments if isinstance(segments, SegmentList) else tuple(segments)
  result: dict[int, str] = {}
  for d in INTERSECTION_GAPS:
    size = len(segs) - d
    if size <= 0:
      continue
    result[d] = "".join(
      "T" if segments_cross(segs[i], segs[i + d], margin) else "F" for i in range(size)
    )
  return result


@lru_cache(maxsize=None)
def _crosses(s1: Segment, s2: Segment) -> bool:
  return segments_cross(s1, s2)


def count_overlaps(keys: Sequence[int]) -> int:
  """Strokes that pass over a dot selected earlier.

  In a valid pattern every stroke with a midpoint key runs over that key
  again, so each one retraces part of the drawn path.
  """
  return sum((a, b) in MIDPOINTS for a, b in zip(keys, keys[1:], strict=False))


def complexity_score(p: Pattern) -> ComplexityScore:
  """Dots times log2 of total length plus crossings plus overlaps.

  Crossings are counted over all pairs of merged segments; overlaps are
  strokes between consecutive keys that pass a visited dot.
  """
  merged = pattern_to_segments(p).segments
  length = sum(math.dist(a, b) for a, b in merged)
  crossings = sum(
    _crosses(merged[i], merged[j])
    for i in range(len(merged))
    for j in range(i + 1, len(merged))
  )
  overlaps = count_overlaps(p.keys)
  dots = len(p.keys)
  return ComplexityScore(
    pattern=p.text,
    connected_dots=dots,
    total_length=length,
    intersections=crossings,
    overlaps=overlaps,
    score=dots * math.log2(length + crossings + overlaps),
  )


def _scores_for_start(first_key: int) -> list[tuple[str, float]]:
  return [
    (p.text, complexity_score(p).score) for p in enumerate_valid_patterns(first_key)
  ]


def score_all_patterns(jobs: int = 1) -> list[tuple[str, float]]:
  """Complexity of every valid pattern, partitioned by first key.

  Args:
      jobs: Worker processes; 1 runs inline

  Returns:
      (pattern text, score) in enumeration order
  """
  logger.info(f"Scoring the full pattern space with {jobs} job(s)")
  if jobs <= 1:
    parts = [_scores_for_start(k) for k in KEYS]
  else:
    with ProcessPoolExecutor(max_workers=jobs) as pool:
      parts = list(pool.map(_scores_for_start, KEYS))
  return [item for part in parts for item in part]


def complexity_histogram(
  scores: Sequence[float], width: int = constants.histogram_bucket_width
) -> dict[str, int]:
  """Bucket scores into bins ``1-6``, ``7-12``, ... by ceiling division."""
  buckets: dict[int, int] = {}
  for score in scores:
    index = max(1, math.ceil(score / width))
    buckets[index] = buckets.get(index, 0) + 1
  return {
    f"{width * (i - 1) + 1}-{width * i}": buckets.get(i, 0)
    for i in range(1, max(buckets, default=0) + 1)
  }


# the eight symmetries of the square acting on centred coordinates
_SYMMETRIES: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
  ((1, 0), (0, 1)),
  ((0, -1), (1, 0)),
  ((-1, 0), (0, -1)),
  ((0, 1), (-1, 0)),
  ((-1, 0), (0, 1)),
  ((1, 0), (0, -1)),
  ((0, 1), (1, 0)),
  ((0, -1), (-1, 0)),
)


def apply_symmetry(p: Pattern, index: int) -> Pattern:
  """Map a pattern through one of the eight grid symmetries (0 is identity)."""
  (a, b), (c, d) = _SYMMETRIES[index % len(_SYMMETRIES)]
  mapped = []
  for key in p.keys:
    x, y = position(key)
    x, y = x - 1, y - 1
    mapped.append(key_at(a * x + b * y + 1, c * x + d * y + 1))
  return Pattern(keys=tuple(mapped))
