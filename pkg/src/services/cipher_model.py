"""The 504-cipher dictionary and unit-to-cipher similarity.

A unit is three consecutive turning points of a simplified trajectory. A
cipher is an ordered triple of distinct dots with the grid vectors between
them. Similarity mixes the direction agreement of both vectors with the
agreement of their length ratio:

    S = theta * (cos(a, u) + cos(b, v)) / 2 + (1 - theta) * cos(c, w)

and a cipher is rejected for a unit when any cosine is negative.
"""

from collections import defaultdict
from functools import lru_cache
import math

import numpy as np

from ..config.logging_config import get_logger
from ..constants import ANGLE_SET, DISTANCE_SET
from ..exceptions import TooFewTurningPointsError
from ..models.domain import Cipher, Polyline, Unit
from ..models.schemas import CipherDump, CipherRecord, SimilarityParams
from .geometry import interior_angle
from .pattern_space import KEYS, MIDPOINTS, position

logger = get_logger()

# cosines this close below zero are rounding noise on perpendicular vectors
COS_TOLERANCE = 1e-12


def key_expansion(d1: int, d2: int, d3: int) -> tuple[int, ...]:
  """Keys traversed by a cipher, with grid midpoints between turning dots."""
  keys = [d1]
  for a, b in ((d1, d2), (d2, d3)):
    mid = MIDPOINTS.get((a, b))
    if mid is not None:
      keys.append(mid)
    keys.append(b)
  return tuple(keys)


def _make_cipher(d1: int, d2: int, d3: int) -> Cipher:
  (x1, y1), (x2, y2), (x3, y3) = position(d1), position(d2), position(d3)
  u = (x2 - x1, y2 - y1)
  v = (x3 - x2, y3 - y2)
  return Cipher(
    turning_dots=(d1, d2, d3),
    key_expansion=key_expansion(d1, d2, d3),
    u=u,
    v=v,
    w=(math.hypot(*u), math.hypot(*v)),
    angle=interior_angle(u, v),
  )


@lru_cache(maxsize=1)
def build_cipher_dictionary() -> tuple[Cipher, ...]:
  """All ordered triples of distinct dots, in lexicographic order."""
  ciphers = tuple(
    _make_cipher(d1, d2, d3)
    for d1 in KEYS
    for d2 in KEYS
    for d3 in KEYS
    if len({d1, d2, d3}) == 3
  )
  logger.debug(f"Built cipher dictionary with {len(ciphers)} entries")
  return ciphers


def cipher_angle(cipher: Cipher) -> float:
  """Interior angle at the middle dot in degrees; diagnostic only."""
  return cipher.angle


def is_turning(cipher: Cipher) -> bool:
  """False for straight-through and full-reversal ciphers."""
  rounded = round(cipher.angle)
  return rounded not in (0, 180)


def dump_dictionary() -> CipherDump:
  ciphers = build_cipher_dictionary()
  return CipherDump(
    count=len(ciphers),
    distance_set=list(DISTANCE_SET),
    angle_set=list(ANGLE_SET),
    ciphers=[
      CipherRecord(
        turning_dots=list(c.turning_dots),
        key_expansion=list(c.key_expansion),
        u=list(c.u),
        v=list(c.v),
        w=list(c.w),
        angle=c.angle,
      )
      for c in ciphers
    ],
  )


def extract_units(poly: Polyline, weight: float = 1.0) -> list[Unit]:
  """Slide a three-point window over the turning points.

  Raises:
      TooFewTurningPointsError: Fewer than three turning points, or a
          window with a zero-length vector
  """
  pts = poly.turning_points
  if len(pts) < 3:
    raise TooFewTurningPointsError(len(pts))
  units = []
  for i in range(len(pts) - 2):
    a = (float(pts[i + 1, 0] - pts[i, 0]), float(pts[i + 1, 1] - pts[i, 1]))
    b = (float(pts[i + 2, 0] - pts[i + 1, 0]), float(pts[i + 2, 1] - pts[i + 1, 1]))
    na, nb = math.hypot(*a), math.hypot(*b)
    if na == 0 or nb == 0:
      raise TooFewTurningPointsError(len(pts))
    units.append(Unit(a=a, b=b, c=(na, nb), source_segments=(i, i + 1), weight=weight))
  return units


def _cos(x: tuple[float, float], y: tuple[float, float]) -> float:
  return (x[0] * y[0] + x[1] * y[1]) / (math.hypot(*x) * math.hypot(*y))


def unit_similarity(
  u: Unit, c: Cipher, p: SimilarityParams | None = None
) -> float | None:
  """Similarity of a unit to a cipher, or None when rejected."""
  theta = (p or SimilarityParams()).theta
  cos_u = _cos(u.a, c.u)
  cos_v = _cos(u.b, c.v)
  # always >= 0 for positive lengths; kept so all three terms are checked
  cos_w = _cos(u.c, c.w)
  if min(cos_u, cos_v, cos_w) < -COS_TOLERANCE:
    return None
  return 0.5 * (cos_u + cos_v) * theta + cos_w * (1.0 - theta)


class CipherScorer:
  """Vectorized similarity of units against the whole dictionary."""

  def __init__(self, ciphers: tuple[Cipher, ...] | None = None):
    self.ciphers = ciphers or build_cipher_dictionary()
    u = np.array([c.u for c in self.ciphers], dtype=float)
    v = np.array([c.v for c in self.ciphers], dtype=float)
    w = np.array([c.w for c in self.ciphers], dtype=float)
    self._u = u / np.linalg.norm(u, axis=1, keepdims=True)
    self._v = v / np.linalg.norm(v, axis=1, keepdims=True)
    self._w = w / np.linalg.norm(w, axis=1, keepdims=True)
    self.index = {c.turning_dots: i for i, c in enumerate(self.ciphers)}
    self.by_prefix: dict[tuple[int, int], list[int]] = defaultdict(list)
    self.by_suffix: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, c in enumerate(self.ciphers):
      d1, d2, d3 = c.turning_dots
      self.by_prefix[(d1, d2)].append(i)
      self.by_suffix[(d2, d3)].append(i)

  def score(
    self, units: list[Unit], params: SimilarityParams, min_similarity: float = 0.0
  ) -> np.ndarray:
    """Similarity matrix of shape (units, ciphers); NaN marks rejection."""
    a = np.array([unit.a for unit in units], dtype=float)
    b = np.array([unit.b for unit in units], dtype=float)
    c = np.array([unit.c for unit in units], dtype=float)
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    cos_u = a @ self._u.T
    cos_v = b @ self._v.T
    cos_w = c @ self._w.T
    scores = 0.5 * (cos_u + cos_v) * params.theta + cos_w * (1.0 - params.theta)
    floor = -COS_TOLERANCE
    rejected = (cos_u < floor) | (cos_v < floor) | (cos_w < floor)
    rejected |= scores < min_similarity
    scores[rejected] = np.nan
    return scores
