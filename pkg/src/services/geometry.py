"""Planar segment predicates and point-to-segment distances.

Integer coordinates (grid patterns) are handled with exact integer
arithmetic. Float coordinates (trajectories) use a relative tolerance for
parallelism and an optional parameter margin that keeps near-endpoint
touches from counting as crossings.
"""

import math

import numpy as np

from ..models.domain import Point, Segment

FLOAT_EPS = 1e-9


def cross(o: Point, a: Point, b: Point) -> float:
  """z component of (a - o) x (b - o)."""
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _is_exact(*segments: Segment) -> bool:
  return all(isinstance(c, int) for seg in segments for pt in seg for c in pt)


def _cross_exact(s1: Segment, s2: Segment) -> bool:
  (p0, p1), (q0, q1) = s1, s2
  rx, ry = p1[0] - p0[0], p1[1] - p0[1]
  sx, sy = q1[0] - q0[0], q1[1] - q0[1]
  denom = rx * sy - ry * sx
  if denom == 0:
    return False
  qpx, qpy = q0[0] - p0[0], q0[1] - p0[1]
  t_num = qpx * sy - qpy * sx
  u_num = qpx * ry - qpy * rx
  if denom < 0:
    denom, t_num, u_num = -denom, -t_num, -u_num
  return 0 < t_num < denom and 0 < u_num < denom


def crossing_params(s1: Segment, s2: Segment) -> tuple[float, float] | None:
  """Parameters (t, u) of the supporting-line intersection, None if parallel.

  The point is ``s1[0] + t * (s1[1] - s1[0]) == s2[0] + u * (s2[1] - s2[0])``.
  """
  (p0, p1), (q0, q1) = s1, s2
  rx, ry = p1[0] - p0[0], p1[1] - p0[1]
  sx, sy = q1[0] - q0[0], q1[1] - q0[1]
  denom = rx * sy - ry * sx
  scale = math.hypot(rx, ry) * math.hypot(sx, sy)
  if scale == 0 or abs(denom) <= FLOAT_EPS * scale:
    return None
  qpx, qpy = q0[0] - p0[0], q0[1] - p0[1]
  return (qpx * sy - qpy * sx) / denom, (qpx * ry - qpy * rx) / denom


def segments_cross(s1: Segment, s2: Segment, margin: float = 0.0) -> bool:
  """Whether two segments cross at a point interior to both.

  Shared endpoints, touches and collinear overlap are not crossings.

  Args:
      s1: First segment
      s2: Second segment
      margin: For float input, both parameters must lie strictly inside
          ``(margin, 1 - margin)``; ignored for integer input

  Returns:
      True for a proper crossing
  """
  if _is_exact(s1, s2):
    return _cross_exact(s1, s2)
  params = crossing_params(s1, s2)
  if params is None:
    return False
  low = max(margin, FLOAT_EPS)
  high = 1.0 - low
  t, u = params
  return low < t < high and low < u < high


def segment_length(seg: Segment) -> float:
  return math.dist(seg[0], seg[1])


def point_segment_distances(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
  """Distance of each point to segment ab.

  Perpendicular distance to the supporting line when the projection falls
  inside the segment, distance to the nearer endpoint otherwise.
  """
  ab = b - a
  ap = points - a
  denom = float(ab @ ab)
  if denom == 0.0:
    return np.hypot(ap[:, 0], ap[:, 1])
  t = (ap @ ab) / denom
  inside = (t >= 0.0) & (t <= 1.0)
  perpendicular = np.abs(ap[:, 0] * ab[1] - ap[:, 1] * ab[0]) / math.sqrt(denom)
  to_a = np.hypot(ap[:, 0], ap[:, 1])
  bp = points - b
  to_b = np.hypot(bp[:, 0], bp[:, 1])
  return np.where(inside, perpendicular, np.where(t < 0.0, to_a, to_b))


def interior_angle(u: tuple[float, float], v: tuple[float, float]) -> float:
  """Angle in degrees at the joint of stroke ``u`` followed by stroke ``v``.

  This is the angle between the reversed incoming stroke and the outgoing
  one: 180 for straight through, 0 for a full reversal.
  """
  nu = math.hypot(*u)
  nv = math.hypot(*v)
  if nu == 0 or nv == 0:
    return float("nan")
  cos_value = (-u[0] * v[0] - u[1] * v[1]) / (nu * nv)
  return math.degrees(math.acos(max(-1.0, min(1.0, cos_value))))
