"""Value types used on the hot paths of enumeration and inference.

These are frozen dataclasses rather than pydantic models: the engine builds
hundreds of thousands of them and never needs validation or serialization
at that level. Pydantic models for configuration and reports live in
``schemas.py``.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

Point = tuple[float, float]
Segment = tuple[Point, Point]


@dataclass(frozen=True, slots=True)
class GridPoint:
  """A dot of the 3x3 grid; y grows downward and spacing is one grid unit."""

  key: int
  x: int
  y: int

  @classmethod
  def of(cls, key: int) -> "GridPoint":
    return cls(key=key, x=(key - 1) % 3, y=(key - 1) // 3)

  @property
  def position(self) -> tuple[int, int]:
    return (self.x, self.y)


@dataclass(frozen=True, slots=True)
class Pattern:
  """An ordered key sequence that satisfies the pattern lock rules.

  Build instances through ``pattern_space.validate_pattern`` or
  ``pattern_space.parse_pattern``; the constructor itself does not check.
  """

  keys: tuple[int, ...]

  @property
  def text(self) -> str:
    return "-".join(str(k) for k in self.keys)

  def __len__(self) -> int:
    return len(self.keys)

  def __str__(self) -> str:
    return self.text


@dataclass(frozen=True, slots=True)
class SegmentList:
  """Merged line segments of a pattern, with the keys at each turn."""

  segments: tuple[Segment, ...]
  turning_keys: tuple[int, ...]

  def __len__(self) -> int:
    return len(self.segments)


@dataclass(frozen=True, eq=False)
class Trajectory:
  """Keypoint positions relative to the phone corner, one row per frame."""

  points: np.ndarray
  displacements: np.ndarray | None = None
  markers: tuple[bool, ...] | None = None
  source: str = "kp00"
  frame_stride: int = 1
  meta: dict = field(default_factory=dict)

  def __len__(self) -> int:
    return int(self.points.shape[0])

  def with_points(self, points: np.ndarray) -> "Trajectory":
    """Copy with new positions; displacements are recomputed when present."""
    displacements = None
    if self.displacements is not None:
      displacements = compute_displacements(points)
    return Trajectory(
      points=points,
      displacements=displacements,
      markers=self.markers,
      source=self.source,
      frame_stride=self.frame_stride,
      meta=dict(self.meta),
    )


def compute_displacements(points: np.ndarray) -> np.ndarray:
  """Next-frame displacement per row; the last row is zero."""
  displacements = np.zeros_like(points, dtype=float)
  displacements[:-1] = np.diff(points, axis=0)
  return displacements


@dataclass(frozen=True, eq=False)
class Polyline:
  """Turning points kept by simplification and their original indexes."""

  turning_points: np.ndarray
  source_indexes: tuple[int, ...]

  def __len__(self) -> int:
    return int(self.turning_points.shape[0])

  def segments(self) -> list[Segment]:
    pts = self.turning_points
    return [
      ((float(pts[i, 0]), float(pts[i, 1])), (float(pts[i + 1, 0]), float(pts[i + 1, 1])))
      for i in range(len(pts) - 1)
    ]


@dataclass(frozen=True, slots=True)
class Unit:
  """Three consecutive turning points as two vectors and their lengths."""

  a: tuple[float, float]
  b: tuple[float, float]
  c: tuple[float, float]
  source_segments: tuple[int, int]
  weight: float = 1.0


@dataclass(frozen=True, slots=True)
class Cipher:
  """One ordered triple of distinct turning dots with its standard vectors."""

  turning_dots: tuple[int, int, int]
  key_expansion: tuple[int, ...]
  u: tuple[int, int]
  v: tuple[int, int]
  w: tuple[float, float]
  angle: float

  @property
  def text(self) -> str:
    return "-".join(str(k) for k in self.turning_dots)


@dataclass(frozen=True, slots=True)
class CandidateEntry:
  """A pattern hypothesis grown outward from the middle unit.

  ``turning_keys[i]`` is the key assigned to polyline turning point
  ``lo + i``; ``keys`` is the full expansion including pass-through dots.
  """

  turning_keys: tuple[int, ...]
  keys: tuple[int, ...]
  passed_segments: frozenset[int]
  confidence: float
  lo: int
  hi: int
  complete: bool = False
  open_left: bool = True
  open_right: bool = True

  @property
  def units_consumed(self) -> int:
    return len(self.turning_keys) - 2

  @property
  def text(self) -> str:
    return "-".join(str(k) for k in self.keys)


class RankedSample(NamedTuple):
  """A paired observation for rank correlation."""

  value_a: float
  value_b: float
