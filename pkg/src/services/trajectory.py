"""Trajectory loading, validity checking and turning-point extraction."""

from collections import deque
from collections.abc import Sequence
import math
from pathlib import Path

import numpy as np

from ..config.logging_config import get_logger
from ..exceptions import UnsupportedTrajectoryFormatError
from ..interfaces.trajectory_reader import ITrajectoryReader
from ..models.domain import Polyline, Trajectory
from ..models.schemas import CheckConfig, CheckResult
from .csv_trajectory_reader import CsvTrajectoryReader
from .geometry import point_segment_distances

logger = get_logger()

DEFAULT_READERS: tuple[ITrajectoryReader, ...] = (CsvTrajectoryReader(),)


def load_trajectory(
  path: str | Path, readers: Sequence[ITrajectoryReader] = DEFAULT_READERS
) -> Trajectory:
  """Read a trajectory with the first reader that accepts the file.

  Raises:
      UnsupportedTrajectoryFormatError: No reader supports the file
  """
  path = Path(path)
  for reader in readers:
    if reader.supports_format(path):
      trajectory = reader.read(path)
      logger.info(f"Loaded {len(trajectory)} points from {path}")
      return trajectory
  raise UnsupportedTrajectoryFormatError(str(path))


class TrackChecker:
  """Frame-by-frame validity check of a growing trajectory.

  After every pushed point the checker reports the state of the track so
  far. A window is the last ``check_window`` points; it is static when its
  endpoints are at most ``static_radius`` apart. The run of static windows
  resets on any moving window, and the track is invalid once the run
  reaches ``static_limit``. Independently the track is invalid when its
  last step is at least ``jump_factor`` times the average step, the average
  including that last step.
  """

  def __init__(self, config: CheckConfig | None = None):
    self.config = config or CheckConfig()
    self._window: deque[np.ndarray] = deque(maxlen=self.config.check_window)
    self._last: np.ndarray | None = None
    self._steps = 0
    self._path_length = 0.0
    self._last_step = 0.0
    self.static_windows = 0

  def push(self, point: Sequence[float] | np.ndarray) -> CheckResult:
    """Feed the next point and return the verdict for the track so far."""
    current = np.asarray(point, dtype=float)
    if self._last is not None:
      self._last_step = float(math.hypot(*(current - self._last)))
      self._path_length += self._last_step
      self._steps += 1
    self._last = current
    self._window.append(current)

    if len(self._window) == self.config.check_window and self.config.check_window > 1:
      shift = float(math.hypot(*(self._window[-1] - self._window[0])))
      if shift <= self.config.static_radius:
        self.static_windows += 1
      else:
        self.static_windows = 0
    return self.result()

  def result(self) -> CheckResult:
    average = self._path_length / self._steps if self._steps else 0.0
    if self.static_windows >= self.config.static_limit:
      reason = "static"
    elif average > 0 and self._last_step >= self.config.jump_factor * average:
      reason = "jump"
    else:
      reason = "ok"
    return CheckResult(
      valid=reason == "ok",
      reason=reason,
      static_windows=self.static_windows,
      average_step=average,
      last_step=self._last_step,
    )


def check_track(t: Trajectory, cfg: CheckConfig | None = None) -> CheckResult:
  """Run every point of a trajectory through a ``TrackChecker``."""
  checker = TrackChecker(cfg)
  verdict = CheckResult(valid=True)
  for point in t.points:
    verdict = checker.push(point)
  if not verdict.valid:
    logger.debug(f"Track {t.source} invalid: {verdict.reason}")
  return verdict


def rdp_indexes(points: np.ndarray, epsilon: float) -> list[int]:
  """Indexes kept by Ramer-Douglas-Peucker simplification.

  A point is kept when it is the farthest from the current chord and its
  distance is at least ``epsilon``; ties go to the lowest index.
  """
  n = len(points)
  if n <= 2:
    return list(range(n))
  keep = np.zeros(n, dtype=bool)
  keep[0] = keep[-1] = True
  stack = [(0, n - 1)]
  while stack:
    first, last = stack.pop()
    if last - first < 2:
      continue
    inner = points[first + 1 : last]
    distances = point_segment_distances(inner, points[first], points[last])
    offset = int(np.argmax(distances))
    if distances[offset] >= epsilon:
      split = first + 1 + offset
      keep[split] = True
      stack.append((split, last))
      stack.append((first, split))
  return [int(i) for i in np.flatnonzero(keep)]


def rdp_simplify(t: Trajectory | Polyline | np.ndarray, epsilon: float) -> Polyline:
  """Reduce a trajectory to its turning points.

  Args:
      t: Trajectory, an earlier polyline, or an (n, 2) array
      epsilon: Distance threshold in px, must be positive

  Returns:
      Polyline whose source indexes refer to the input's points
  """
  if epsilon <= 0:
    raise ValueError(f"epsilon must be positive, got {epsilon}")
  if isinstance(t, Trajectory):
    points = t.points
  elif isinstance(t, Polyline):
    points = t.turning_points
  else:
    points = np.asarray(t, dtype=float)
  indexes = rdp_indexes(points, epsilon)
  return Polyline(turning_points=points[indexes].copy(), source_indexes=tuple(indexes))


def prune_turning_points(poly: Polyline, epsilon: float) -> Polyline:
  """Drop interior turning points that lie within ``epsilon`` of their neighbours' chord.

  The closest vertex goes first and deviations are recomputed after each
  removal, so a pair of near-duplicate corner vertices collapses to one.
  Ties go to the lowest index.
  """
  points = poly.turning_points
  kept = list(range(len(points)))
  while len(kept) > 2:
    deviations = [
      float(
        point_segment_distances(
          points[kept[i] : kept[i] + 1], points[kept[i - 1]], points[kept[i + 1]]
        )[0]
      )
      for i in range(1, len(kept) - 1)
    ]
    closest = int(np.argmin(deviations))
    if deviations[closest] >= epsilon:
      break
    del kept[closest + 1]
  if len(kept) == len(points):
    return poly
  return Polyline(
    turning_points=points[kept].copy(),
    source_indexes=tuple(poly.source_indexes[i] for i in kept),
  )


def simplify_track(t: Trajectory | np.ndarray, epsilon: float) -> Polyline:
  """RDP simplification followed by pruning of redundant turning points."""
  return prune_turning_points(rdp_simplify(t, epsilon), epsilon)


def default_epsilon(
  t: Trajectory | np.ndarray,
  fraction: float = 0.05,
  floor: float = 1.0,
  override: float | None = None,
) -> float:
  """Simplification threshold relative to the bounding-box diagonal.

  Args:
      t: Trajectory or point array
      fraction: Share of the diagonal
      floor: Lower bound in px
      override: Returned unchanged when given

  Returns:
      Epsilon in px
  """
  if override is not None:
    return float(override)
  points = t.points if isinstance(t, Trajectory) else np.asarray(t, dtype=float)
  extent = points.max(axis=0) - points.min(axis=0)
  return max(fraction * float(math.hypot(*extent)), floor)
