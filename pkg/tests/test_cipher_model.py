"""Tests for the cipher dictionary, units and similarity."""

import math

import numpy as np
import pytest

from src.constants import ANGLE_SET, DISTANCE_SET
from src.exceptions import TooFewTurningPointsError
from src.models.domain import Polyline, Unit
from src.models.schemas import SimilarityParams
from src.services.cipher_model import (
  dump_dictionary,
  extract_units,
  is_turning,
  key_expansion,
  unit_similarity,
)


def cipher_by_dots(ciphers, dots):
  return next(c for c in ciphers if c.turning_dots == dots)


def unit_from(a, b) -> Unit:
  return Unit(a=a, b=b, c=(math.hypot(*a), math.hypot(*b)), source_segments=(0, 1))


def polyline(points) -> Polyline:
  array = np.asarray(points, dtype=float)
  return Polyline(turning_points=array, source_indexes=tuple(range(len(array))))


class TestDictionary:
  def test_count(self, ciphers):
    assert len(ciphers) == 504
    assert len({c.turning_dots for c in ciphers}) == 504

  def test_expansion_through_midpoints(self, ciphers):
    cipher = cipher_by_dots(ciphers, (1, 3, 9))
    assert cipher.key_expansion == (1, 2, 3, 6, 9)
    assert cipher.u == (2, 0)
    assert cipher.v == (0, 2)

  def test_expansion_without_grid_midpoint(self, ciphers):
    assert cipher_by_dots(ciphers, (1, 5, 9)).key_expansion == (1, 5, 9)

  def test_expansion_length_five_matches_oracle(self, ciphers):
    coords = {k: ((k - 1) % 3, (k - 1) // 3) for k in range(1, 10)}

    def on_grid_midpoint(a, b):
      (ax, ay), (bx, by) = coords[a], coords[b]
      return (ax + bx) % 2 == 0 and (ay + by) % 2 == 0

    expected = sum(
      1
      for c in ciphers
      if on_grid_midpoint(c.turning_dots[0], c.turning_dots[1])
      and on_grid_midpoint(c.turning_dots[1], c.turning_dots[2])
    )
    assert sum(1 for c in ciphers if len(c.key_expansion) == 5) == expected

  def test_lengths_in_distance_set(self, ciphers):
    for c in ciphers:
      for length in c.w:
        assert any(math.isclose(length, d) for d in DISTANCE_SET)

  def test_turning_angles_in_angle_set(self, ciphers):
    turning = [c for c in ciphers if is_turning(c)]
    assert turning
    assert {round(c.angle) for c in turning} == set(ANGLE_SET)

  def test_key_expansion_is_context_free(self):
    assert key_expansion(2, 1, 3) == (2, 1, 2, 3)

  def test_dump(self):
    dump = dump_dictionary()
    assert dump.count == 504
    assert len(dump.ciphers) == 504
    assert dump.angle_set == list(ANGLE_SET)


class TestUnits:
  def test_seven_points_give_five_units(self):
    points = [(0, 0), (10, 0), (10, 10), (20, 10), (20, 20), (30, 20), (30, 30)]
    units = extract_units(polyline(points))
    assert len(units) == 5
    assert units[1].a == (0.0, 10.0)
    assert units[1].source_segments == (1, 2)

  def test_three_points_give_one_unit(self):
    units = extract_units(polyline([(0, 0), (3, 4), (3, 0)]))
    assert len(units) == 1
    assert units[0].c == (5.0, 4.0)

  def test_two_points(self):
    with pytest.raises(TooFewTurningPointsError):
      extract_units(polyline([(0, 0), (1, 1)]))

  def test_repeated_point(self):
    with pytest.raises(TooFewTurningPointsError):
      extract_units(polyline([(0, 0), (0, 0), (1, 1)]))


class TestSimilarity:
  def test_identity(self, ciphers):
    for c in ciphers[:60]:
      assert unit_similarity(unit_from(c.u, c.v), c) == pytest.approx(1.0, abs=1e-12)

  def test_maximal_at_own_cipher(self, ciphers):
    own = cipher_by_dots(ciphers, (1, 6, 8))
    unit = unit_from(own.u, own.v)
    for c in ciphers:
      score = unit_similarity(unit, c)
      assert score is None or score <= 1.0 + 1e-12

  def test_opposite_direction_rejected(self, ciphers):
    cipher = cipher_by_dots(ciphers, (4, 5, 8))
    assert unit_similarity(unit_from((-1.0, 0.0), (0.0, 1.0)), cipher) is None

  def test_axis_convention(self, ciphers):
    cipher = cipher_by_dots(ciphers, (4, 5, 8))
    assert cipher.u == (1, 0)
    assert cipher.v == (0, 1)
    assert unit_similarity(unit_from((1.0, 0.0), (0.0, 1.0)), cipher) == pytest.approx(1.0)

  def test_theta_weighting(self, ciphers):
    cipher = cipher_by_dots(ciphers, (4, 5, 8))
    unit = unit_from((1.0, 0.0), (0.0, 3.0))
    cos_w = (1 + 3) / (math.sqrt(2) * math.sqrt(10))
    for theta in (0.0, 0.5, 0.9, 1.0):
      expected = theta + (1 - theta) * cos_w
      score = unit_similarity(unit, cipher, SimilarityParams(theta=theta))
      assert score == pytest.approx(expected)

  def test_scale_invariance(self, ciphers, rng):
    sample = [ciphers[int(i)] for i in rng.integers(0, len(ciphers), size=50)]
    for _ in range(200):
      a = tuple(rng.normal(size=2))
      b = tuple(rng.normal(size=2))
      base = unit_from(a, b)
      for k in (0.1, 1.0, 7.3):
        scaled = unit_from((a[0] * k, a[1] * k), (b[0] * k, b[1] * k))
        for c in sample:
          s0, s1 = unit_similarity(base, c), unit_similarity(scaled, c)
          assert (s0 is None) == (s1 is None)
          if s0 is not None:
            assert s1 == pytest.approx(s0, abs=1e-12)

  def test_scale_invariance_over_many_units(self, scorer, rng):
    params = SimilarityParams()
    for _ in range(10):
      vectors = rng.normal(size=(1000, 4))
      scales = 10.0 ** rng.uniform(-3.0, 3.0, size=1000)
      base = [unit_from(tuple(v[:2]), tuple(v[2:])) for v in vectors]
      scaled = [
        unit_from(tuple(v[:2] * k), tuple(v[2:] * k)) for v, k in zip(vectors, scales, strict=True)
      ]
      s0 = scorer.score(base, params)
      s1 = scorer.score(scaled, params)
      assert np.array_equal(np.isnan(s0), np.isnan(s1))
      assert np.allclose(s0, s1, atol=1e-12, equal_nan=True)

  def test_vectorized_scorer_agrees(self, ciphers, scorer):
    units = [unit_from((3.0, 1.0), (-2.0, 2.5)), unit_from((0.0, 4.0), (4.0, 0.1))]
    matrix = scorer.score(units, SimilarityParams())
    for row, unit in zip(matrix, units, strict=True):
      for index, c in enumerate(ciphers):
        expected = unit_similarity(unit, c)
        if expected is None:
          assert np.isnan(row[index])
        else:
          assert row[index] == pytest.approx(expected, abs=1e-12)

  def test_min_similarity_prunes(self, scorer):
    units = [unit_from((3.0, 1.0), (-2.0, 2.5))]
    loose = scorer.score(units, SimilarityParams(), 0.0)
    strict = scorer.score(units, SimilarityParams(), 0.95)
    assert np.count_nonzero(~np.isnan(strict)) < np.count_nonzero(~np.isnan(loose))
    assert np.nanmin(strict) >= 0.95
