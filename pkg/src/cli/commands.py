"""Command handlers.

Each handler takes the parsed arguments and resolved settings, writes its
result to ``out`` and returns an exit code. Failures are raised as
``PatternOracleError`` subclasses and mapped to exit codes by the caller.
"""

from argparse import Namespace
from pathlib import Path
from typing import TextIO

from ..config.logging_config import get_logger
from ..config.settings import Settings
from ..constants import constants
from ..exceptions import CommandUsageError
from ..models.schemas import EvalReport, SynthConfig
from ..services.cipher_model import dump_dictionary
from ..services.csv_trajectory_reader import write_trajectory
from ..services.evaluation import (
  SampleTask,
  build_corpus,
  corpus_configs,
  corpus_samples,
  feature_correlation_experiment,
  synthetic_samples,
)
from ..services.pattern_space import (
  apply_symmetry,
  complexity_histogram,
  complexity_score,
  count_valid_patterns,
  enumerate_valid_patterns,
  parse_pattern,
  score_all_patterns,
)
from ..services.synthesis import synth_meta, synthesize_keypoint_set, synthesize_trajectory
from ..services.trajectory import load_trajectory
from ..services.writer_factory import ReportWriterFactory
from .dependencies import get_epsilon_policy, get_evaluator, get_guess_service, get_writer

logger = get_logger()


def cmd_enumerate(args: Namespace, settings: Settings, out: TextIO) -> int:
  """Count or stream valid patterns."""
  writer = get_writer(settings)
  if args.count:
    counts = count_valid_patterns(args.first_key)
    total = counts[args.length] if args.length else sum(counts.values())
    out.write(writer.table([{"count": total}], ["count"]))
    return constants.success_exit

  rows = (
    {"pattern": p.text}
    for p in enumerate_valid_patterns(first_key=args.first_key, length=args.length)
  )
  if settings.output_format == "text":
    for row in rows:
      out.write(f"{row['pattern']}\n")
  else:
    out.write(writer.table(list(rows), ["pattern"]))
  return constants.success_exit


def cmd_complexity(args: Namespace, settings: Settings, out: TextIO) -> int:
  """Score given patterns, or the whole space."""
  writer = get_writer(settings)
  if args.all:
    scored = score_all_patterns(jobs=settings.jobs)
    if args.histogram:
      histogram = complexity_histogram([score for _, score in scored])
      rows = [{"bucket": label, "count": count} for label, count in histogram.items()]
      out.write(writer.table(rows, ["bucket", "count"]))
    elif args.max:
      best_text, _ = max(scored, key=lambda item: item[1])
      out.write(writer.scores([complexity_score(parse_pattern(best_text))]))
    else:
      rows = [{"pattern": text, "score": score} for text, score in scored]
      out.write(writer.table(rows, ["pattern", "score"]))
    return constants.success_exit

  if not args.patterns:
    raise CommandUsageError("give one or more patterns, or --all")
  if args.histogram or args.max:
    raise CommandUsageError("--histogram and --max need --all")
  patterns = [parse_pattern(text) for text in args.patterns]
  if args.symmetric:
    patterns = [apply_symmetry(p, i) for p in patterns for i in range(8)]
  out.write(writer.scores([complexity_score(p) for p in patterns]))
  return constants.success_exit


def cmd_guess(args: Namespace, settings: Settings, out: TextIO) -> int:
  """Fuse guesses over one or more keypoint trajectories."""
  trajectories = [load_trajectory(path) for path in args.trajectories]
  service = get_guess_service(settings)
  guesses = service.guess(trajectories)
  out.write(get_writer(settings).guesses(guesses.top(settings.top)))
  return constants.success_exit


def _synth_config(args: Namespace, settings: Settings, pattern: str) -> SynthConfig:
  return SynthConfig(
    pattern=pattern,
    grid_spacing_px=args.spacing,
    samples_per_segment=args.samples,
    camera_tilt_deg=args.tilt,
    noise_sigma_px=args.noise,
    head_tail_len=args.head_tail,
    rng_seed=settings.seed,
  )


def cmd_synth(args: Namespace, settings: Settings, out: TextIO) -> int:
  """Write one synthetic trajectory (or keypoint set), or a whole corpus."""
  if args.corpus:
    base = _synth_config(args, settings, args.pattern or "1-2-3-6")
    manifest = build_corpus(
      args.corpus,
      args.count,
      seed=settings.seed,
      base=base,
      tilt_max=args.tilt_max,
      noise_fraction=args.noise_fraction,
      stratified=args.stratified,
      keypoints=args.keypoints,
    )
    out.write(f"{Path(args.corpus) / 'manifest.json'}\t{len(manifest.entries)} samples\n")
    return constants.success_exit

  if not args.pattern:
    raise CommandUsageError("--pattern is required unless --corpus is given")
  cfg = _synth_config(args, settings, args.pattern)
  target = Path(args.out or f"{cfg.pattern}_seed{cfg.rng_seed}.csv")
  if args.keypoints > 1:
    written = []
    for trajectory in synthesize_keypoint_set(cfg, args.keypoints):
      path = target.with_name(f"{target.stem}_{trajectory.source}{target.suffix}")
      written.append(write_trajectory(path, trajectory, synth_meta(cfg, trajectory.source)))
  else:
    written = [write_trajectory(target, synthesize_trajectory(cfg), synth_meta(cfg))]
  for path in written:
    out.write(f"{path}\n")
  return constants.success_exit


def _write_eval_files(report: EvalReport, directory: Path) -> None:
  directory.mkdir(parents=True, exist_ok=True)
  (directory / "curve.csv").write_text(
    ReportWriterFactory.create_writer("csv").evaluation(report), encoding="utf-8"
  )
  (directory / "report.json").write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")


def cmd_eval(args: Namespace, settings: Settings, out: TextIO) -> int:
  """Success-rate curves over a corpus, a synthetic batch, or a sweep."""
  evaluator = get_evaluator(settings, args.tie_policy, args.max_attempts)
  writer = get_writer(settings)
  base = SynthConfig(
    pattern="1-2-3-6",
    grid_spacing_px=args.spacing,
    samples_per_segment=args.samples,
    head_tail_len=args.head_tail,
  )

  if args.sweep:
    if args.manifest:
      raise CommandUsageError("--sweep generates its own samples; drop --manifest")
    key, values = args.sweep
    reports = evaluator.run_sweep(
      key,
      values,
      args.count,
      seed=settings.seed,
      base=base,
      tilt_max=args.tilt_max,
      noise_fraction=args.noise_fraction,
      keypoints=args.keypoints,
    )
  elif args.manifest:
    report = evaluator.run_corpus(args.manifest)
    reports = {report.label: report}
  else:
    configs = corpus_configs(
      args.count, settings.seed, base, args.tilt_max, args.noise_fraction, args.stratified
    )
    tasks = [
      SampleTask(name=f"sample-{i:04d}", pattern=c.pattern, config=c, keypoints=args.keypoints)
      for i, c in enumerate(configs)
    ]
    reports = {"synthetic": evaluator.evaluate(tasks, "synthetic")}

  for label, report in reports.items():
    if args.out:
      directory = Path(args.out) / label if len(reports) > 1 else Path(args.out)
      _write_eval_files(report, directory)
    out.write(writer.evaluation(report))
  return constants.success_exit


def cmd_features(args: Namespace, settings: Settings, out: TextIO) -> int:
  """Measured-versus-standard length and angle statistics."""
  if args.manifest:
    samples = corpus_samples(args.manifest)
  else:
    base = SynthConfig(pattern="1-2-3-6", grid_spacing_px=args.spacing, head_tail_len=args.head_tail)
    samples = synthetic_samples(
      corpus_configs(args.count, settings.seed, base, args.tilt_max, args.noise_fraction)
    )
  report = feature_correlation_experiment(samples, get_epsilon_policy(settings))
  out.write(get_writer(settings).document(report))
  return constants.success_exit


def cmd_dict_dump(args: Namespace, settings: Settings, out: TextIO) -> int:  # noqa: ARG001
  """The 504 ciphers with their standard sets, as JSON."""
  out.write(dump_dictionary().model_dump_json(indent=2) + "\n")
  return constants.success_exit
