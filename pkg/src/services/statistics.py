"""Kernel density estimates and rank correlations."""

from collections.abc import Sequence
import math
from typing import Literal

import numpy as np
from scipy.stats import kendalltau, rankdata

from ..exceptions import (
  EmptySamplesError,
  NonPositiveSigmaError,
  TiedSamplesError,
  TooFewPairsError,
)
from ..models.domain import RankedSample

PairsLike = Sequence[RankedSample] | Sequence[tuple[float, float]] | np.ndarray


def silverman_bandwidth(samples: Sequence[float]) -> float:
  """Silverman's rule of thumb; 0 for fewer than two distinct values."""
  values = np.asarray(samples, dtype=float)
  if values.size < 2:
    return 0.0
  std = float(values.std(ddof=1))
  q75, q25 = np.percentile(values, [75, 25])
  spread = min(std, float(q75 - q25) / 1.349) if q75 > q25 else std
  return 0.9 * spread * values.size ** (-1 / 5)


def gaussian_kde(
  samples: Sequence[float], sigma: float | None, grid: Sequence[float]
) -> np.ndarray:
  """Gaussian kernel density of ``samples`` evaluated on ``grid``.

  Args:
      samples: Observations
      sigma: Kernel bandwidth; Silverman's rule when None
      grid: Evaluation points

  Returns:
      Density per grid point

  Raises:
      EmptySamplesError: No samples
      NonPositiveSigmaError: Bandwidth is not positive
  """
  values = np.asarray(samples, dtype=float)
  if values.size == 0:
    raise EmptySamplesError()
  if sigma is None:
    sigma = silverman_bandwidth(values)
  if sigma <= 0:
    raise NonPositiveSigmaError(sigma)
  points = np.asarray(grid, dtype=float)
  diffs = points[:, None] - values[None, :]
  kernel = np.exp(-(diffs**2) / (2.0 * sigma**2))
  return kernel.sum(axis=1) / (values.size * sigma * math.sqrt(2.0 * math.pi))


def _columns(pairs: PairsLike) -> tuple[np.ndarray, np.ndarray]:
  data = np.asarray(pairs, dtype=float).reshape(-1, 2)
  if len(data) < 2:
    raise TooFewPairsError(len(data))
  return data[:, 0], data[:, 1]


def _first_tie(values: np.ndarray) -> float | None:
  ordered = np.sort(values)
  repeats = np.flatnonzero(np.diff(ordered) == 0)
  return float(ordered[repeats[0]]) if repeats.size else None


def _concordant_pairs(a: np.ndarray, b: np.ndarray) -> int:
  count = 0
  for i in range(len(a) - 1):
    count += int(np.count_nonzero((a[i + 1 :] - a[i]) * (b[i + 1 :] - b[i]) > 0))
  return count


def kendall_tau(pairs: PairsLike, ties: Literal["reject", "b"] = "reject") -> float:
  """Kendall's coefficient from the concordant pair count.

  Without ties this is ``4P / (n(n - 1)) - 1``. With ``ties="b"`` the
  tie-corrected tau-b from scipy is returned instead, NaN when a column is
  constant.

  Raises:
      TooFewPairsError: Fewer than two pairs
      TiedSamplesError: Tied values while ``ties="reject"``
  """
  a, b = _columns(pairs)
  n = len(a)
  if ties == "b":
    if np.all(a == a[0]) or np.all(b == b[0]):
      return float("nan")
    return float(kendalltau(a, b, variant="b").statistic)
  for column, values in (("value_a", a), ("value_b", b)):
    tied = _first_tie(values)
    if tied is not None:
      raise TiedSamplesError(column, tied)
  return 4.0 * _concordant_pairs(a, b) / (n * (n - 1)) - 1.0


def spearman_rho(pairs: PairsLike) -> float:
  """Spearman's coefficient ``1 - 6 sum(d^2) / (N(N^2 - 1))`` on average ranks.

  Raises:
      TooFewPairsError: Fewer than two pairs
  """
  a, b = _columns(pairs)
  n = len(a)
  d = rankdata(a) - rankdata(b)
  return 1.0 - 6.0 * float(np.sum(d * d)) / (n * (n * n - 1))
