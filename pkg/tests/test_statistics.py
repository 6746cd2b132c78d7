"""Tests for density estimation and rank correlation."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from src.exceptions import EmptySamplesError, NonPositiveSigmaError, TiedSamplesError, TooFewPairsError
from src.models.domain import RankedSample
from src.services.statistics import gaussian_kde, kendall_tau, silverman_bandwidth, spearman_rho


class TestGaussianKde:
  def test_single_sample_peak(self):
    density = gaussian_kde([0.0], 1.0, [0.0])
    assert density[0] == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-4)

  def test_symmetric_around_sample(self):
    density = gaussian_kde([2.0], 0.5, [1.0, 3.0])
    assert density[0] == pytest.approx(density[1])

  @pytest.mark.parametrize("sigma", [0.05, 0.1, 0.5])
  def test_integrates_to_one(self, sigma):
    grid = np.linspace(-5.0, 6.0, 20001)
    density = gaussian_kde([0.0, 0.3, 1.0], sigma, grid)
    assert integrate.trapezoid(density, grid) == pytest.approx(1.0, abs=1e-3)

  def test_no_samples(self):
    with pytest.raises(EmptySamplesError):
      gaussian_kde([], 1.0, [0.0])

  def test_non_positive_sigma(self):
    with pytest.raises(NonPositiveSigmaError):
      gaussian_kde([1.0], 0.0, [0.0])

  def test_identical_samples_have_no_default_bandwidth(self):
    assert silverman_bandwidth([2.0, 2.0, 2.0]) == 0.0
    with pytest.raises(NonPositiveSigmaError):
      gaussian_kde([2.0, 2.0], None, [2.0])


class TestKendall:
  def test_perfect_agreement(self):
    assert kendall_tau([(1, 10), (2, 20), (3, 30), (4, 40)]) == 1.0

  def test_perfect_disagreement(self):
    assert kendall_tau([(1, 40), (2, 30), (3, 20), (4, 10)]) == -1.0

  def test_three_pairs(self):
    pairs = [RankedSample(1, 3), RankedSample(2, 1), RankedSample(3, 2)]
    assert kendall_tau(pairs) == pytest.approx(-1 / 3)

  def test_rejects_ties(self):
    with pytest.raises(TiedSamplesError) as info:
      kendall_tau([(1, 1), (2, 1), (3, 2)])
    assert info.value.column == "value_b"

  def test_one_pair(self):
    with pytest.raises(TooFewPairsError):
      kendall_tau([(1, 2)])

  def test_tau_b_matches_scipy(self, rng):
    a = rng.integers(0, 5, size=40)
    b = rng.integers(0, 5, size=40)
    expected = stats.kendalltau(a, b).statistic
    assert kendall_tau(np.column_stack([a, b]), ties="b") == pytest.approx(expected, abs=1e-12)

  def test_matches_pair_counting(self, rng):
    a = rng.permutation(100).astype(float)
    b = rng.permutation(100).astype(float)
    concordant = sum(
      1 for i in range(100) for j in range(i + 1, 100) if (a[i] - a[j]) * (b[i] - b[j]) > 0
    )
    expected = 4 * concordant / (100 * 99) - 1
    assert kendall_tau(np.column_stack([a, b])) == pytest.approx(expected, abs=1e-12)

  def test_tau_b_without_ties_equals_plain(self, rng):
    a = rng.permutation(30).astype(float)
    b = rng.permutation(30).astype(float)
    pairs = np.column_stack([a, b])
    assert kendall_tau(pairs, ties="b") == pytest.approx(kendall_tau(pairs), abs=1e-12)

  def test_tau_b_constant_column_is_nan(self):
    assert math.isnan(kendall_tau([(1, 5), (2, 5), (3, 5)], ties="b"))

  @pytest.mark.slow
  def test_large_sample_matches_scipy(self, rng):
    a = rng.normal(size=5000)
    b = a + rng.normal(size=5000)
    expected = stats.kendalltau(a, b).statistic
    assert kendall_tau(np.column_stack([a, b])) == pytest.approx(expected, abs=1e-9)


class TestSpearman:
  def test_identity(self):
    assert spearman_rho([(1, 1), (2, 2), (3, 3)]) == 1.0

  def test_reversed(self):
    assert spearman_rho([(1, 3), (2, 2), (3, 1)]) == -1.0

  def test_matches_pearson_on_ranks(self, rng):
    a = rng.normal(size=20)
    b = a + rng.normal(size=20)
    expected = np.corrcoef(stats.rankdata(a), stats.rankdata(b))[0, 1]
    assert spearman_rho(np.column_stack([a, b])) == pytest.approx(expected, abs=1e-12)

  def test_one_pair(self):
    with pytest.raises(TooFewPairsError):
      spearman_rho([(1, 2)])


class TestAgreement:
  @pytest.mark.parametrize("direction", [1.0, -1.0])
  def test_monotone_data_same_sign(self, rng, direction):
    a = np.sort(rng.normal(size=60))
    b = direction * np.exp(a)
    pairs = np.column_stack([a, b])
    tau = kendall_tau(pairs)
    rho = spearman_rho(pairs)
    assert tau == pytest.approx(direction)
    assert rho == pytest.approx(direction)
    assert np.sign(tau) == np.sign(rho)

  def test_noisy_monotone_data_same_sign(self, rng):
    for _ in range(50):
      a = rng.normal(size=40)
      b = 3.0 * a + rng.normal(size=40)
      pairs = np.column_stack([a, b])
      assert kendall_tau(pairs) > 0
      assert spearman_rho(pairs) > 0

  def test_bounded(self, rng):
    for _ in range(50):
      pairs = rng.normal(size=(25, 2))
      assert -1.0 <= kendall_tau(pairs) <= 1.0
      assert -1.0 <= spearman_rho(pairs) <= 1.0
