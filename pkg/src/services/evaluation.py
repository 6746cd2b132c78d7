"""Success-rate evaluation, synthetic corpora, sweeps and feature statistics."""

from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
import json
import math
from pathlib import Path
import statistics as stats
import time

import numpy as np
from pydantic import ValidationError
from tqdm import tqdm

from ..config.logging_config import get_logger
from ..constants import constants
from ..exceptions import ManifestError, PatternOracleError
from ..models.domain import Trajectory
from ..models.schemas import (
  CheckConfig,
  CorrelationRow,
  EngineConfig,
  EvalReport,
  FeatureCorrelationReport,
  KdeCurve,
  Manifest,
  ManifestEntry,
  SampleResult,
  SynthConfig,
  TiePolicy,
  TimingStats,
)
from .cipher_model import CipherScorer
from .csv_trajectory_reader import write_trajectory
from .geometry import interior_angle
from .guess_service import EpsilonPolicy, GuessService
from .pattern_space import (
  complexity_histogram,
  enumerate_valid_patterns,
  parse_pattern,
  position,
  score_all_patterns,
  turning_keys,
)
from .statistics import gaussian_kde, kendall_tau, silverman_bandwidth, spearman_rho
from .synthesis import synth_meta, synthesize_keypoint_set, synthesize_trajectory
from .trajectory import load_trajectory, simplify_track

logger = get_logger()

MANIFEST_NAME = "manifest.json"
SWEEP_KEYS = ("tilt", "yaw", "roll", "noise", "spacing", "head_tail")
FEATURE_DECIMALS = 9


def success_curve(
  ranks: Sequence[int | None], max_attempts: int = constants.default_attempt_budget
) -> dict[int, float]:
  """Fraction of samples whose truth ranks within each attempt budget."""
  total = len(ranks)
  if total == 0:
    return {a: 0.0 for a in range(1, max_attempts + 1)}
  return {
    a: sum(1 for r in ranks if r is not None and r <= a) / total
    for a in range(1, max_attempts + 1)
  }


def summarize(
  results: Sequence[SampleResult],
  label: str = "corpus",
  max_attempts: int = constants.default_attempt_budget,
  tie_policy: TiePolicy = "optimistic",
) -> EvalReport:
  """Reduce per-sample results to a report; independent of sample order."""
  ordered = sorted(results, key=lambda r: r.name)
  times = [r.elapsed_ms for r in ordered]
  timing = TimingStats(
    total_ms=sum(times),
    mean_ms=stats.fmean(times) if times else 0.0,
    median_ms=stats.median(times) if times else 0.0,
    max_ms=max(times, default=0.0),
  )
  return EvalReport(
    label=label,
    max_attempts=max_attempts,
    tie_policy=tie_policy,
    sample_count=len(ordered),
    success_curve=success_curve([r.rank for r in ordered], max_attempts),
    samples=list(ordered),
    timing=timing,
  )


@dataclass(frozen=True)
class SampleTask:
  """One labelled sample: trajectory files, or a config to synthesize from."""

  name: str
  pattern: str
  files: tuple[str, ...] = ()
  config: SynthConfig | None = None
  keypoints: int = 1

  def trajectories(self) -> list[Trajectory]:
    if self.files:
      return [load_trajectory(path) for path in self.files]
    if self.config is None:
      raise ValueError(f"sample {self.name} has neither files nor a config")
    if self.keypoints > 1:
      return synthesize_keypoint_set(self.config, self.keypoints)
    return [synthesize_trajectory(self.config)]


def evaluate_sample(
  task: SampleTask, service: GuessService, tie_policy: TiePolicy = "optimistic"
) -> SampleResult:
  """Guess one sample and record where the truth landed."""
  started = time.perf_counter()
  try:
    guesses = service.guess(task.trajectories())
  except PatternOracleError as e:
    elapsed = (time.perf_counter() - started) * 1000.0
    logger.warning(f"{task.name}: {e.message}")
    return SampleResult(name=task.name, pattern=task.pattern, elapsed_ms=elapsed, error=e.message)
  elapsed = (time.perf_counter() - started) * 1000.0
  return SampleResult(
    name=task.name,
    pattern=task.pattern,
    rank=guesses.rank_of(task.pattern, tie_policy),
    candidates=len(guesses),
    elapsed_ms=elapsed,
  )


_worker_service: GuessService | None = None
_worker_tie_policy: TiePolicy = "optimistic"


def _worker_init(engine: dict, check: dict, epsilon: EpsilonPolicy, tie_policy: TiePolicy) -> None:
  global _worker_service, _worker_tie_policy
  _worker_service = GuessService(
    EngineConfig.model_validate(engine), CheckConfig.model_validate(check), epsilon
  )
  _worker_tie_policy = tie_policy


def _worker_evaluate(task: SampleTask) -> SampleResult:
  if _worker_service is None:
    raise RuntimeError("worker not initialized")
  return evaluate_sample(task, _worker_service, _worker_tie_policy)


class Evaluator:
  """Runs labelled samples through the guess pipeline and scores the ranks."""

  def __init__(
    self,
    engine_config: EngineConfig | None = None,
    check_config: CheckConfig | None = None,
    epsilon: EpsilonPolicy | None = None,
    tie_policy: TiePolicy = "optimistic",
    max_attempts: int = constants.default_attempt_budget,
    jobs: int = 1,
    scorer: CipherScorer | None = None,
  ):
    self.engine_config = engine_config or EngineConfig()
    self.check_config = check_config or CheckConfig()
    self.epsilon = epsilon or EpsilonPolicy()
    self.tie_policy = tie_policy
    self.max_attempts = max_attempts
    self.jobs = max(1, jobs)
    self.service = GuessService(self.engine_config, self.check_config, self.epsilon, scorer)
    logger.info(f"Evaluator initialized with {self.jobs} job(s), {tie_policy} ties")

  def evaluate(self, tasks: Sequence[SampleTask], label: str = "corpus") -> EvalReport:
    """Evaluate samples, in parallel when ``jobs > 1``."""
    logger.info(f"Evaluating {len(tasks)} samples for '{label}'")
    progress = tqdm(total=len(tasks), desc=f"eval {label}", unit="sample", disable=None)
    results: list[SampleResult] = []
    if self.jobs == 1 or len(tasks) < 2:
      for task in tasks:
        results.append(evaluate_sample(task, self.service, self.tie_policy))
        progress.update(1)
    else:
      initargs = (
        self.engine_config.model_dump(),
        self.check_config.model_dump(),
        self.epsilon,
        self.tie_policy,
      )
      with ProcessPoolExecutor(
        max_workers=self.jobs, initializer=_worker_init, initargs=initargs
      ) as pool:
        for result in pool.map(_worker_evaluate, tasks, chunksize=4):
          results.append(result)
          progress.update(1)
    progress.close()
    report = summarize(results, label, self.max_attempts, self.tie_policy)
    logger.success(
      f"'{label}': success@1 {report.success_curve.get(1, 0.0):.3f}, "
      f"success@{self.max_attempts} {report.success_curve.get(self.max_attempts, 0.0):.3f}"
    )
    return report

  def run_corpus(self, corpus: str | Path) -> EvalReport:
    """Evaluate every sample listed in a corpus manifest."""
    manifest_file, manifest = load_manifest(corpus)
    root = manifest_file.parent
    tasks = [
      SampleTask(
        name=entry.name,
        pattern=entry.pattern,
        files=tuple(str(root / name) for name in entry.files),
      )
      for entry in manifest.entries
    ]
    return self.evaluate(tasks, label=root.name or "corpus")

  def run_sweep(
    self,
    key: str,
    values: Sequence[float],
    count: int,
    seed: int = 0,
    base: SynthConfig | None = None,
    tilt_max: float = 0.0,
    noise_fraction: float = 0.0,
    keypoints: int = 1,
  ) -> dict[str, EvalReport]:
    """One report per value of a recording condition, on matched samples.

    Every value reuses the same sampled patterns and seeds so that only the
    swept condition differs between groups.
    """
    if key not in SWEEP_KEYS:
      raise ValueError(f"unknown sweep key '{key}', choose from {', '.join(SWEEP_KEYS)}")
    configs = corpus_configs(count, seed, base, tilt_max, noise_fraction)
    reports = {}
    for value in values:
      label = f"{key}={_format_value(value)}"
      tasks = [
        SampleTask(
          name=f"sample-{i:04d}",
          pattern=cfg.pattern,
          config=apply_sweep(cfg, key, value),
          keypoints=keypoints,
        )
        for i, cfg in enumerate(configs)
      ]
      reports[label] = self.evaluate(tasks, label)
    return reports


def _format_value(value: float) -> str:
  return str(int(value)) if float(value).is_integer() else repr(float(value))


def apply_sweep(cfg: SynthConfig, key: str, value: float) -> SynthConfig:
  """Copy of ``cfg`` with one recording condition set to ``value``."""
  pitch, yaw, roll = cfg.camera_tilt_deg
  if key == "tilt":
    update = {"camera_tilt_deg": (float(value), yaw, roll)}
  elif key == "yaw":
    update = {"camera_tilt_deg": (pitch, float(value), roll)}
  elif key == "roll":
    update = {"camera_tilt_deg": (pitch, yaw, float(value))}
  elif key == "noise":
    update = {"noise_sigma_px": float(value) * cfg.grid_spacing_px}
  elif key == "spacing":
    ratio = float(value) / cfg.grid_spacing_px
    update = {
      "grid_spacing_px": float(value),
      "noise_sigma_px": cfg.noise_sigma_px * ratio,
      "head_tail_len": None if cfg.head_tail_len is None else cfg.head_tail_len * ratio,
    }
  elif key == "head_tail":
    update = {"head_tail_len": float(value)}
  else:
    raise ValueError(f"unknown sweep key '{key}'")
  return SynthConfig.model_validate({**cfg.model_dump(), **update})


@lru_cache(maxsize=1)
def _all_pattern_texts() -> tuple[str, ...]:
  return tuple(p.text for p in enumerate_valid_patterns())


@lru_cache(maxsize=1)
def _complexity_strata() -> dict[str, tuple[str, ...]]:
  scored = score_all_patterns()
  strata: dict[str, list[str]] = {}
  labels = list(complexity_histogram([s for _, s in scored]))
  width = constants.histogram_bucket_width
  for text, score in scored:
    label = labels[max(1, math.ceil(score / width)) - 1]
    strata.setdefault(label, []).append(text)
  return {label: tuple(texts) for label, texts in strata.items()}


def sample_patterns(rng: np.random.Generator, count: int, stratified: bool = False) -> list[str]:
  """Draw patterns uniformly, or round-robin over complexity buckets."""
  if not stratified:
    texts = _all_pattern_texts()
    return [texts[int(i)] for i in rng.integers(0, len(texts), size=count)]
  strata = list(_complexity_strata().values())
  return [
    strata[i % len(strata)][int(rng.integers(0, len(strata[i % len(strata)])))]
    for i in range(count)
  ]


def corpus_configs(
  count: int,
  seed: int = 0,
  base: SynthConfig | None = None,
  tilt_max: float = 0.0,
  noise_fraction: float = 0.0,
  stratified: bool = False,
) -> list[SynthConfig]:
  """Seeded sample configurations: random pattern, pitch in [0, tilt_max].

  Noise is ``noise_fraction`` of the grid spacing. Yaw and roll keep the
  base values.
  """
  base = base or SynthConfig(pattern="1-2-3-6")
  rng = np.random.default_rng(seed)
  patterns = sample_patterns(rng, count, stratified)
  _, yaw, roll = base.camera_tilt_deg
  configs = []
  for pattern in patterns:
    pitch = float(rng.uniform(0.0, tilt_max)) if tilt_max > 0 else 0.0
    configs.append(
      base.model_copy(
        update={
          "pattern": pattern,
          "camera_tilt_deg": (pitch, yaw, roll),
          "noise_sigma_px": noise_fraction * base.grid_spacing_px,
          "rng_seed": int(rng.integers(0, 2**31 - 1)),
        }
      )
    )
  return configs


def build_corpus(
  out_dir: str | Path,
  count: int,
  seed: int = 0,
  base: SynthConfig | None = None,
  tilt_max: float = 0.0,
  noise_fraction: float = 0.0,
  stratified: bool = False,
  keypoints: int = 1,
) -> Manifest:
  """Write a synthetic corpus: trajectory CSVs, sidecars and ``manifest.json``."""
  out = Path(out_dir)
  out.mkdir(parents=True, exist_ok=True)
  entries = []
  configs = corpus_configs(count, seed, base, tilt_max, noise_fraction, stratified)
  for index, cfg in enumerate(tqdm(configs, desc="synth", unit="sample", disable=None)):
    name = f"sample-{index:04d}"
    if keypoints > 1:
      trajectories = synthesize_keypoint_set(cfg, keypoints)
    else:
      trajectories = [synthesize_trajectory(cfg)]
    files = []
    for trajectory in trajectories:
      file_name = f"{name}_{trajectory.source}.csv"
      write_trajectory(out / file_name, trajectory, synth_meta(cfg, trajectory.source))
      files.append(file_name)
    entries.append(ManifestEntry(name=name, files=files, pattern=cfg.pattern, config=cfg))
  manifest = Manifest(entries=entries)
  (out / MANIFEST_NAME).write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
  logger.success(f"Wrote {count} samples to {out}")
  return manifest


def load_manifest(corpus: str | Path) -> tuple[Path, Manifest]:
  """Read a manifest given its file or its directory.

  Raises:
      ManifestError: Missing, unreadable or invalid manifest
  """
  path = Path(corpus)
  if path.is_dir():
    path = path / MANIFEST_NAME
  if not path.is_file():
    raise ManifestError(str(path), "manifest not found")
  try:
    manifest = Manifest.model_validate_json(path.read_text(encoding="utf-8"))
  except (ValidationError, json.JSONDecodeError, PatternOracleError) as e:
    raise ManifestError(str(path), f"invalid manifest: {e}") from e
  for entry in manifest.entries:
    for name in entry.files:
      if not (path.parent / name).is_file():
        raise ManifestError(str(path), f"{entry.name}: missing file {name}")
  return path, manifest


@dataclass(frozen=True)
class LabelledTrajectory:
  """A trajectory with its true pattern."""

  trajectory: Trajectory
  pattern: str


def _measure(sample: LabelledTrajectory, epsilon: EpsilonPolicy):
  """Measured and standard segment lengths and angles, or None if misaligned."""
  poly = simplify_track(sample.trajectory, epsilon.resolve(sample.trajectory))
  points = poly.turning_points
  if sample.trajectory.meta.get("redundant_ends"):
    points = points[1:-1]
  corners = turning_keys(parse_pattern(sample.pattern).keys)
  if len(points) != len(corners):
    return None
  standard = np.array([position(k) for k in corners], dtype=float)
  std_vectors = np.diff(standard, axis=0)
  measured_vectors = np.diff(points, axis=0)
  std_lengths = np.hypot(std_vectors[:, 0], std_vectors[:, 1])
  measured_lengths = np.hypot(measured_vectors[:, 0], measured_vectors[:, 1])
  if np.any(measured_lengths == 0):
    return None
  ref = int(np.argmin(std_lengths))
  normalized = measured_lengths / measured_lengths[ref] * std_lengths[ref]
  std_angles = [
    interior_angle(tuple(std_vectors[i]), tuple(std_vectors[i + 1]))
    for i in range(len(std_vectors) - 1)
  ]
  measured_angles = [
    interior_angle(tuple(measured_vectors[i]), tuple(measured_vectors[i + 1]))
    for i in range(len(measured_vectors) - 1)
  ]
  return (
    np.round(normalized, FEATURE_DECIMALS),
    np.round(std_lengths, FEATURE_DECIMALS),
    np.round(measured_angles, FEATURE_DECIMALS),
    np.round(std_angles, FEATURE_DECIMALS),
  )


def _kde_curves(measured: np.ndarray, standard: np.ndarray, step: float, half_width: float) -> list[KdeCurve]:
  curves = []
  for value in sorted(set(standard.tolist())):
    group = measured[standard == value]
    sigma = max(silverman_bandwidth(group), step)
    offsets = np.arange(-half_width, half_width + step / 2, step)
    grid = value + offsets
    density = gaussian_kde(group, sigma, grid)
    curves.append(
      KdeCurve(
        standard=value,
        sigma=sigma,
        count=int(group.size),
        grid=grid.tolist(),
        density=density.tolist(),
        mode=float(grid[int(np.argmax(density))]),
      )
    )
  return curves


def _correlation(feature: str, a: np.ndarray, b: np.ndarray) -> CorrelationRow:
  if len(a) < 2:
    return CorrelationRow(feature=feature, pairs=len(a))
  pairs = np.column_stack([a, b])
  tau = kendall_tau(pairs, ties="b")
  rho = spearman_rho(pairs)
  return CorrelationRow(
    feature=feature,
    pairs=len(a),
    kendall_tau_b=None if math.isnan(tau) else tau,
    spearman_rho=None if math.isnan(rho) else rho,
  )


def feature_correlation_experiment(
  samples: Sequence[LabelledTrajectory], epsilon: EpsilonPolicy | None = None
) -> FeatureCorrelationReport:
  """How well measured lengths and angles track their standard values.

  Segment lengths are normalized by the measured length of the segment
  with the shortest standard length. Samples whose turning points do not
  line up with the pattern's turns are skipped. Kendall's coefficient is
  the tie-corrected tau-b, since standard values repeat.
  """
  epsilon = epsilon or EpsilonPolicy()
  lengths, std_lengths, angles, std_angles, cross_len, cross_angle = [], [], [], [], [], []
  used = skipped = 0
  for sample in samples:
    measured = _measure(sample, epsilon)
    if measured is None:
      skipped += 1
      continue
    used += 1
    norm, std_len, ang, std_ang = measured
    lengths.extend(norm)
    std_lengths.extend(std_len)
    angles.extend(ang)
    std_angles.extend(std_ang)
    cross_len.extend(norm[:-1])
    cross_angle.extend(ang)
  logger.info(f"Feature experiment used {used} samples, skipped {skipped}")

  lengths_arr, std_len_arr = np.asarray(lengths), np.asarray(std_lengths)
  angles_arr, std_ang_arr = np.asarray(angles), np.asarray(std_angles)
  return FeatureCorrelationReport(
    samples_used=used,
    samples_skipped=skipped,
    length_kde=_kde_curves(lengths_arr, std_len_arr, 0.01, 1.0) if used else [],
    angle_kde=_kde_curves(angles_arr, std_ang_arr, 0.5, 30.0) if angles else [],
    correlations=[
      _correlation("length", lengths_arr, std_len_arr),
      _correlation("angle", angles_arr, std_ang_arr),
      _correlation("length_vs_angle", np.asarray(cross_len), np.asarray(cross_angle)),
    ],
  )


def synthetic_samples(configs: Sequence[SynthConfig]) -> list[LabelledTrajectory]:
  return [LabelledTrajectory(synthesize_trajectory(cfg), cfg.pattern) for cfg in configs]


def corpus_samples(corpus: str | Path) -> list[LabelledTrajectory]:
  """Labelled trajectories of a corpus, the first keypoint of each sample."""
  manifest_file, manifest = load_manifest(corpus)
  return [
    LabelledTrajectory(load_trajectory(manifest_file.parent / entry.files[0]), entry.pattern)
    for entry in manifest.entries
  ]
