"""Command-line application."""

import argparse
from collections.abc import Sequence
import json
import sys
from typing import TextIO

from pydantic import ValidationError

from .. import __version__
from ..config.logging_config import LoggerConfig, get_logger
from ..config.settings import load_settings
from ..constants import EXIT_CODES, constants
from ..exceptions import PatternOracleError
from ..services.evaluation import SWEEP_KEYS
from . import commands

logger = get_logger()

_VERBOSITY = {1: "INFO", 2: "DEBUG"}


def _pattern_length(value: str) -> int:
  try:
    length = int(value)
  except ValueError:
    raise argparse.ArgumentTypeError(f"length must be an integer, got '{value}'") from None
  if not constants.min_pattern_length <= length <= constants.max_pattern_length:
    raise argparse.ArgumentTypeError(
      f"length must be {constants.min_pattern_length}..{constants.max_pattern_length}"
    )
  return length


def _grid_key(value: str) -> int:
  try:
    key = int(value)
  except ValueError:
    raise argparse.ArgumentTypeError(f"key must be an integer, got '{value}'") from None
  if not 1 <= key <= 9:
    raise argparse.ArgumentTypeError("key must be 1..9")
  return key


def _tilt(value: str) -> tuple[float, float, float]:
  parts = value.split(",")
  if len(parts) != 3:
    raise argparse.ArgumentTypeError("tilt takes pitch,yaw,roll in degrees")
  try:
    pitch, yaw, roll = (float(p) for p in parts)
  except ValueError:
    raise argparse.ArgumentTypeError(f"tilt values must be numbers, got '{value}'") from None
  return pitch, yaw, roll


def _sweep(value: str) -> tuple[str, list[float]]:
  key, sep, rest = value.partition("=")
  if not sep or key not in SWEEP_KEYS:
    raise argparse.ArgumentTypeError(f"sweep takes key=v1,v2,... with key in {', '.join(SWEEP_KEYS)}")
  try:
    values = [float(v) for v in rest.split(",") if v.strip()]
  except ValueError:
    raise argparse.ArgumentTypeError(f"sweep values must be numbers, got '{rest}'") from None
  if not values:
    raise argparse.ArgumentTypeError("sweep needs at least one value")
  return key, values


def _positive_int(value: str) -> int:
  try:
    number = int(value)
  except ValueError:
    raise argparse.ArgumentTypeError(f"expected a positive integer, got '{value}'") from None
  if number < 1:
    raise argparse.ArgumentTypeError(f"expected a positive integer, got {number}")
  return number


def _global_options() -> argparse.ArgumentParser:
  """Options shared by every command; unset values fall through to settings."""
  parent = argparse.ArgumentParser(add_help=False)
  group = parent.add_argument_group("global options")
  group.add_argument("--format", dest="output_format", choices=("text", "json", "csv"))
  group.add_argument("--seed", type=int)
  group.add_argument("--epsilon", type=float, help="simplification threshold in px")
  group.add_argument("--theta", type=float, help="length weight of the similarity")
  group.add_argument("--beam-width", type=_positive_int)
  group.add_argument("--min-similarity", type=float)
  group.add_argument("--consistency-filter", action=argparse.BooleanOptionalAction, default=None)
  group.add_argument("--consistency-mode", choices=("equal", "contains"))
  group.add_argument(
    "--trim-ends", dest="trim_redundant_ends", action=argparse.BooleanOptionalAction, default=None
  )
  group.add_argument("--top", type=_positive_int)
  group.add_argument("--jobs", type=_positive_int)
  group.add_argument("--log-level")
  group.add_argument("--log-dir")
  group.add_argument("-v", "--verbose", action="count", default=0)
  return parent


def _synthetic_options(parser: argparse.ArgumentParser) -> None:
  parser.add_argument("--count", type=_positive_int, default=100)
  parser.add_argument("--tilt-max", type=float, default=0.0, help="pitch drawn from [0, tilt-max]")
  parser.add_argument(
    "--noise-fraction", type=float, default=0.0, help="noise sigma as a fraction of the spacing"
  )
  parser.add_argument("--spacing", type=float, default=120.0)
  parser.add_argument("--head-tail", type=float, default=None)
  parser.add_argument("--stratified", action="store_true")


def build_parser() -> argparse.ArgumentParser:
  """Build the argument parser with every subcommand."""
  parent = _global_options()
  parser = argparse.ArgumentParser(
    prog="pattern-oracle",
    description="Rank unlock pattern candidates from hand-keypoint trajectories.",
  )
  parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
  sub = parser.add_subparsers(dest="command", required=True)

  p = sub.add_parser("enumerate", parents=[parent], help="list or count valid patterns")
  p.add_argument("--count", action="store_true")
  p.add_argument("--length", type=_pattern_length)
  p.add_argument("--first-key", type=_grid_key)
  p.set_defaults(handler=commands.cmd_enumerate)

  p = sub.add_parser("complexity", parents=[parent], help="complexity scores")
  p.add_argument("patterns", nargs="*")
  p.add_argument("--all", action="store_true", help="score every valid pattern")
  p.add_argument("--max", action="store_true", help="only the most complex pattern")
  p.add_argument("--histogram", action="store_true")
  p.add_argument("--symmetric", action="store_true", help="also score the 8 grid symmetries")
  p.set_defaults(handler=commands.cmd_complexity)

  p = sub.add_parser("guess", parents=[parent], help="rank candidates for trajectories")
  p.add_argument("trajectories", nargs="+")
  p.set_defaults(handler=commands.cmd_guess)

  p = sub.add_parser("synth", parents=[parent], help="write synthetic trajectories")
  p.add_argument("--pattern")
  p.add_argument("--out")
  p.add_argument("--spacing", type=float, default=120.0)
  p.add_argument("--samples", type=int, default=30)
  p.add_argument("--tilt", type=_tilt, default=(0.0, 0.0, 0.0), help="pitch,yaw,roll")
  p.add_argument("--noise", type=float, default=0.0, help="noise sigma in px")
  p.add_argument("--head-tail", type=float, default=None)
  p.add_argument("--keypoints", type=_positive_int, default=1)
  p.add_argument("--corpus", help="write a labelled corpus into this directory")
  p.add_argument("--count", type=_positive_int, default=100)
  p.add_argument("--tilt-max", type=float, default=0.0)
  p.add_argument("--noise-fraction", type=float, default=0.0)
  p.add_argument("--stratified", action="store_true")
  p.set_defaults(handler=commands.cmd_synth)

  p = sub.add_parser("eval", parents=[parent], help="success rate within N attempts")
  p.add_argument("--manifest", help="corpus directory or manifest.json")
  _synthetic_options(p)
  p.add_argument("--samples", type=int, default=30)
  p.add_argument("--keypoints", type=_positive_int, default=1)
  p.add_argument("--sweep", type=_sweep, help="key=v1,v2,...")
  p.add_argument("--max-attempts", type=_positive_int, default=constants.default_attempt_budget)
  p.add_argument("--tie-policy", choices=("optimistic", "pessimistic"), default="optimistic")
  p.add_argument("--out", help="directory for curve.csv and report.json")
  p.set_defaults(handler=commands.cmd_eval)

  p = sub.add_parser("features", parents=[parent], help="length and angle feature statistics")
  p.add_argument("--manifest", help="corpus directory or manifest.json")
  _synthetic_options(p)
  p.set_defaults(handler=commands.cmd_features)

  p = sub.add_parser("dict", help="cipher dictionary tools")
  dict_sub = p.add_subparsers(dest="dict_command", required=True)
  dump = dict_sub.add_parser("dump", parents=[parent], help="print the 504 ciphers as JSON")
  dump.set_defaults(handler=commands.cmd_dict_dump)
  return parser


def _overrides(args: argparse.Namespace) -> dict:
  fields = (
    "output_format",
    "seed",
    "epsilon",
    "theta",
    "beam_width",
    "min_similarity",
    "consistency_filter",
    "consistency_mode",
    "trim_redundant_ends",
    "top",
    "jobs",
    "log_level",
    "log_dir",
  )
  values = {name: getattr(args, name, None) for name in fields}
  verbose = getattr(args, "verbose", 0)
  if verbose and values["log_level"] is None:
    values["log_level"] = _VERBOSITY[min(verbose, 2)]
  return values


def _report_error(error: PatternOracleError, output_format: str, err: TextIO) -> None:
  if output_format == "json":
    err.write(json.dumps(error.to_dict()) + "\n")
  else:
    err.write(f"error: {error.message}\n")


def main(
  argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None
) -> int:
  """Run the command line.

  Args:
      argv: Arguments without the program name; ``sys.argv[1:]`` when omitted
      out: Stream for results; standard output when omitted
      err: Stream for error messages; standard error when omitted

  Returns:
      Exit code: 0 on success, 1 when nothing could be inferred, 2 for bad input
  """
  out = out or sys.stdout
  err = err or sys.stderr
  try:
    args = build_parser().parse_args(argv)
  except SystemExit as e:
    return constants.usage_error_exit if e.code not in (0, None) else constants.success_exit

  output_format = args.output_format or "text"
  try:
    settings = load_settings(**_overrides(args))
  except ValidationError as e:
    err.write(f"error: invalid settings\n{e}\n")
    return constants.usage_error_exit
  except PatternOracleError as e:
    _report_error(e, output_format, err)
    return EXIT_CODES.get(e.kind, constants.usage_error_exit)

  LoggerConfig.setup(settings)
  logger.debug(f"{settings.app_name} {settings.app_version}: {args.command}")

  try:
    return args.handler(args, settings, out)
  except PatternOracleError as e:
    logger.error(f"{e.title}: {e.message}")
    _report_error(e, settings.output_format, err)
    return EXIT_CODES.get(e.kind, constants.usage_error_exit)
  except ValidationError as e:
    logger.error(f"Invalid parameters: {e}")
    err.write(f"error: invalid parameters\n{e}\n")
    return constants.usage_error_exit
  except Exception as e:
    logger.exception(f"Unexpected error: {e}")
    err.write(f"error: {e}\n")
    return constants.domain_failure_exit
