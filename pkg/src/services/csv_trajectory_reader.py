"""CSV trajectory reader and writer.

Format: header ``X,Y,U,V,C``, one row per frame. X and Y are the keypoint
position minus the phone-corner position in px; U and V the displacement
to the next frame (zeros on the last row); C a T/F marker. U, V and C are
optional. A sidecar ``<name>.meta.json`` may carry metadata.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from ..config.logging_config import get_logger
from ..exceptions import (
  InconsistentDisplacementError,
  TooFewPointsError,
  TrajectoryParseError,
)
from ..interfaces.trajectory_reader import ITrajectoryReader
from ..models.domain import Trajectory, compute_displacements
from ..models.schemas import TrajectoryMeta

logger = get_logger()

_TRUE = {"t", "true", "1", "y", "yes"}
_FALSE = {"f", "false", "0", "n", "no", ""}
DISPLACEMENT_TOLERANCE = 1e-6


def meta_path(path: Path) -> Path:
  """Sidecar path: ``walk.csv`` -> ``walk.meta.json``."""
  return path.with_name(f"{path.stem}.meta.json")


def _parse_float(value: str, path: Path, line: int, column: str) -> float:
  try:
    number = float(value)
  except (TypeError, ValueError):
    raise TrajectoryParseError(
      str(path), line, f"column {column}: '{value}' is not a number"
    ) from None
  if not math.isfinite(number):
    raise TrajectoryParseError(str(path), line, f"column {column}: '{value}' is not finite")
  return number


def _parse_marker(value: str, path: Path, line: int) -> bool:
  flag = value.strip().lower()
  if flag in _TRUE:
    return True
  if flag in _FALSE:
    return False
  raise TrajectoryParseError(str(path), line, f"column C: '{value}' is not T or F")


class CsvTrajectoryReader(ITrajectoryReader):
  """Reads trajectory CSV files and their optional metadata sidecar."""

  def supports_format(self, path: Path) -> bool:
    return Path(path).suffix.lower() == ".csv"

  def read(self, path: Path) -> Trajectory:
    path = Path(path)
    if not path.is_file():
      raise TrajectoryParseError(str(path), 0, "file does not exist")

    with path.open(newline="", encoding="utf-8") as handle:
      reader = csv.reader(handle)
      header = next(reader, None)
      if header is None:
        raise TooFewPointsError(0, source=str(path))
      columns = {name.strip().upper(): i for i, name in enumerate(header)}
      if "X" not in columns or "Y" not in columns:
        raise TrajectoryParseError(str(path), 1, f"header must name X and Y, got {header}")
      has_uv = "U" in columns and "V" in columns
      has_c = "C" in columns

      xy: list[tuple[float, float]] = []
      uv: list[tuple[float, float]] = []
      markers: list[bool] = []
      for line, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
          continue
        if len(row) < len(header):
          raise TrajectoryParseError(
            str(path), line, f"expected {len(header)} columns, got {len(row)}"
          )
        xy.append(
          (
            _parse_float(row[columns["X"]], path, line, "X"),
            _parse_float(row[columns["Y"]], path, line, "Y"),
          )
        )
        if has_uv:
          uv.append(
            (
              _parse_float(row[columns["U"]], path, line, "U"),
              _parse_float(row[columns["V"]], path, line, "V"),
            )
          )
        markers.append(_parse_marker(row[columns["C"]], path, line) if has_c else False)

    if len(xy) < 3:
      raise TooFewPointsError(len(xy), source=str(path))

    points = np.asarray(xy, dtype=float)
    displacements = None
    if has_uv:
      displacements = compute_displacements(points)
      given = np.asarray(uv, dtype=float)
      for i in range(len(points)):
        scale = max(1.0, float(np.abs(displacements[i]).max()))
        if np.abs(given[i] - displacements[i]).max() > DISPLACEMENT_TOLERANCE * scale:
          raise InconsistentDisplacementError(
            str(path),
            i + 2,
            expected=(float(displacements[i, 0]), float(displacements[i, 1])),
            got=(float(given[i, 0]), float(given[i, 1])),
          )

    meta = self._read_meta(path)
    source = meta.keypoint_id or path.stem
    logger.debug(f"Parsed {len(points)} rows from {path.name}")
    return Trajectory(
      points=points,
      displacements=displacements,
      markers=tuple(markers),
      source=source,
      meta=meta.model_dump(exclude_none=True),
    )

  def _read_meta(self, path: Path) -> TrajectoryMeta:
    sidecar = meta_path(path)
    if not sidecar.is_file():
      return TrajectoryMeta()
    try:
      return TrajectoryMeta.model_validate_json(sidecar.read_text(encoding="utf-8"))
    except ValidationError as e:
      raise TrajectoryParseError(str(sidecar), 1, f"invalid metadata: {e}") from e


def write_trajectory(path: Path, trajectory: Trajectory, meta: TrajectoryMeta | None = None) -> Path:
  """Write a trajectory in the CSV format, plus a sidecar when ``meta`` is given.

  Floats are written with ``repr`` so identical inputs give identical bytes.
  """
  path = Path(path)
  path.parent.mkdir(parents=True, exist_ok=True)
  displacements = compute_displacements(trajectory.points)
  markers = trajectory.markers or (False,) * len(trajectory)
  with path.open("w", newline="", encoding="utf-8") as handle:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["X", "Y", "U", "V", "C"])
    for (x, y), (u, v), flag in zip(trajectory.points, displacements, markers, strict=True):
      writer.writerow(
        [repr(float(x)), repr(float(y)), repr(float(u)), repr(float(v)), "T" if flag else "F"]
      )
  if meta is not None:
    meta_path(path).write_text(
      json.dumps(meta.model_dump(mode="json", exclude_none=True), indent=2, sort_keys=True)
      + "\n",
      encoding="utf-8",
    )
  return path
