"""Tests for success curves, corpora, sweeps and the feature experiment."""

import json

import pytest

from src.exceptions import ManifestError
from src.models.schemas import SampleResult, SynthConfig
from src.services.evaluation import (
  Evaluator,
  SampleTask,
  apply_sweep,
  build_corpus,
  corpus_configs,
  corpus_samples,
  feature_correlation_experiment,
  load_manifest,
  success_curve,
  summarize,
  synthetic_samples,
)


@pytest.fixture
def evaluator(scorer) -> Evaluator:
  return Evaluator(max_attempts=5, scorer=scorer)


class TestSuccessCurve:
  def test_fractions(self):
    assert success_curve([1, 3, None, 2], 3) == {1: 0.25, 2: 0.5, 3: 0.75}

  def test_monotone(self):
    curve = success_curve([4, 1, None, 7, 2, 2, 19], 20)
    values = [curve[a] for a in sorted(curve)]
    assert values == sorted(values)

  def test_empty(self):
    assert success_curve([], 2) == {1: 0.0, 2: 0.0}


def test_summarize_ignores_order():
  results = [
    SampleResult(name=f"s{i}", pattern="1-6-8-3", rank=rank, elapsed_ms=float(i))
    for i, rank in enumerate([1, None, 3, 2])
  ]
  forward = summarize(results, max_attempts=3)
  backward = summarize(list(reversed(results)), max_attempts=3)
  assert forward.model_dump() == backward.model_dump()
  assert forward.sample_count == 4
  assert forward.timing.max_ms == 3.0


class TestEvaluator:
  def test_clean_samples_all_first(self, evaluator):
    tasks = [
      SampleTask(name=f"sample-{i}", pattern=cfg.pattern, config=cfg)
      for i, cfg in enumerate(corpus_configs(6, seed=1))
    ]
    report = evaluator.evaluate(tasks, label="clean")
    assert report.success_curve[1] == 1.0
    assert report.label == "clean"
    assert all(s.error is None for s in report.samples)

  def test_errors_are_recorded(self, evaluator, tmp_path):
    path = tmp_path / "still.csv"
    path.write_text("X,Y\n" + "0,0\n" * 40, encoding="utf-8")
    report = evaluator.evaluate([SampleTask(name="still", pattern="1-6-8-3", files=(str(path),))])
    assert report.samples[0].rank is None
    assert "static" in report.samples[0].error
    assert report.success_curve[5] == 0.0

  def test_task_needs_input(self):
    with pytest.raises(ValueError, match="neither"):
      SampleTask(name="empty", pattern="1-6-8-3").trajectories()


class TestCorpus:
  def test_build_and_evaluate(self, evaluator, tmp_path):
    manifest = build_corpus(tmp_path / "corpus", 3, seed=2)
    assert len(manifest.entries) == 3
    manifest_file, loaded = load_manifest(tmp_path / "corpus")
    assert manifest_file.name == "manifest.json"
    assert [e.pattern for e in loaded.entries] == [e.pattern for e in manifest.entries]
    report = evaluator.run_corpus(tmp_path / "corpus")
    assert report.sample_count == 3
    assert report.success_curve[1] == 1.0

  def test_keypoint_files(self, tmp_path):
    manifest = build_corpus(tmp_path, 2, seed=5, keypoints=3)
    assert manifest.entries[0].files == [
      "sample-0000_kp00.csv",
      "sample-0000_kp01.csv",
      "sample-0000_kp02.csv",
    ]
    assert (tmp_path / "sample-0001_kp02.meta.json").is_file()

  def test_same_seed_same_corpus(self, tmp_path):
    build_corpus(tmp_path / "a", 2, seed=8, noise_fraction=0.01)
    build_corpus(tmp_path / "b", 2, seed=8, noise_fraction=0.01)
    for name in ("manifest.json", "sample-0000_kp00.csv", "sample-0001_kp00.csv"):
      assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

  def test_missing_manifest(self, tmp_path):
    with pytest.raises(ManifestError, match="not found"):
      load_manifest(tmp_path)

  def test_malformed_manifest(self, tmp_path):
    (tmp_path / "manifest.json").write_text("{", encoding="utf-8")
    with pytest.raises(ManifestError, match="invalid"):
      load_manifest(tmp_path)

  def test_manifest_with_invalid_pattern(self, tmp_path):
    entry = {
      "name": "bad",
      "files": ["bad.csv"],
      "pattern": "1-3-2-5",
      "config": {"pattern": "1-3-2-5"},
    }
    (tmp_path / "manifest.json").write_text(json.dumps({"entries": [entry]}), encoding="utf-8")
    with pytest.raises(ManifestError):
      load_manifest(tmp_path)

  def test_manifest_listing_missing_file(self, tmp_path):
    build_corpus(tmp_path, 1, seed=0)
    (tmp_path / "sample-0000_kp00.csv").unlink()
    with pytest.raises(ManifestError, match="missing file"):
      load_manifest(tmp_path)


class TestSweep:
  def test_apply_tilt(self):
    cfg = apply_sweep(SynthConfig(pattern="1-6-8-3", camera_tilt_deg=(0.0, 5.0, 2.0)), "tilt", 30)
    assert cfg.camera_tilt_deg == (30.0, 5.0, 2.0)

  def test_apply_noise_is_fraction_of_spacing(self):
    cfg = apply_sweep(SynthConfig(pattern="1-6-8-3", grid_spacing_px=120.0), "noise", 0.02)
    assert cfg.noise_sigma_px == pytest.approx(2.4)

  def test_apply_spacing_rescales_noise(self):
    base = SynthConfig(pattern="1-6-8-3", grid_spacing_px=120.0, noise_sigma_px=1.2)
    cfg = apply_sweep(base, "spacing", 60)
    assert cfg.grid_spacing_px == 60.0
    assert cfg.noise_sigma_px == pytest.approx(0.6)

  def test_unknown_key(self):
    with pytest.raises(ValueError, match="unknown sweep key"):
      apply_sweep(SynthConfig(pattern="1-6-8-3"), "zoom", 1)

  def test_one_report_per_value(self, evaluator):
    reports = evaluator.run_sweep("tilt", [0, 10], count=2, seed=3)
    assert list(reports) == ["tilt=0", "tilt=10"]
    assert all(r.sample_count == 2 for r in reports.values())
    first, second = reports.values()
    assert [s.pattern for s in first.samples] == [s.pattern for s in second.samples]


class TestFeatureExperiment:
  def test_clean_corpus_agrees_perfectly(self):
    samples = synthetic_samples(corpus_configs(12, seed=4))
    report = feature_correlation_experiment(samples)
    assert report.samples_used == 12
    assert report.samples_skipped == 0
    assert report.correlation("length").kendall_tau_b == pytest.approx(1.0)
    assert report.correlation("length").spearman_rho == pytest.approx(1.0)
    assert report.correlation("angle").kendall_tau_b == pytest.approx(1.0)
    for curve in report.length_kde + report.angle_kde:
      assert curve.mode == pytest.approx(curve.standard, abs=1e-6)

  @pytest.mark.slow
  def test_lengths_track_standard_better_than_angles(self):
    samples = synthetic_samples(corpus_configs(150, seed=12, tilt_max=25.0, noise_fraction=0.02))
    report = feature_correlation_experiment(samples)
    assert report.samples_used >= 100
    length = report.correlation("length")
    cross = report.correlation("length_vs_angle")
    assert abs(cross.kendall_tau_b) < abs(length.kendall_tau_b)
    assert abs(cross.spearman_rho) < abs(length.spearman_rho)
    assert length.kendall_tau_b > 0
    assert length.spearman_rho > 0

  def test_reads_corpus_files(self, tmp_path):
    build_corpus(tmp_path, 4, seed=6)
    report = feature_correlation_experiment(corpus_samples(tmp_path))
    assert report.samples_used == 4
    assert report.correlation("length").kendall_tau_b == pytest.approx(1.0)


@pytest.mark.slow
def test_tilted_noisy_corpus_success(scorer):
  configs = corpus_configs(300, seed=0, tilt_max=25.0, noise_fraction=0.02)
  tasks = [
    SampleTask(name=f"sample-{i:04d}", pattern=cfg.pattern, config=cfg)
    for i, cfg in enumerate(configs)
  ]
  report = Evaluator(max_attempts=20, scorer=scorer).evaluate(tasks, label="tilted")
  curve = [report.success_curve[a] for a in range(1, 21)]
  assert curve == sorted(curve)
  assert report.success_curve[20] >= 0.90
