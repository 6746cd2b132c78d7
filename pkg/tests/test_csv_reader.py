"""Tests for the CSV trajectory reader and writer."""

import json

import numpy as np
import pytest

from src.exceptions import (
  InconsistentDisplacementError,
  TooFewPointsError,
  TrajectoryParseError,
)
from src.models.domain import Trajectory
from src.models.schemas import TrajectoryMeta
from src.services.csv_trajectory_reader import CsvTrajectoryReader, meta_path, write_trajectory


@pytest.fixture
def reader() -> CsvTrajectoryReader:
  return CsvTrajectoryReader()


def write(path, text: str):
  path.write_text(text, encoding="utf-8")
  return path


class TestRead:
  def test_three_consistent_rows(self, reader, tmp_path):
    path = write(tmp_path / "kp08.csv", "X,Y,U,V,C\n0,0,1,2,F\n1,2,3,0,T\n4,2,0,0,F\n")
    trajectory = reader.read(path)
    assert len(trajectory) == 3
    assert trajectory.points.tolist() == [[0.0, 0.0], [1.0, 2.0], [4.0, 2.0]]
    assert trajectory.markers == (False, True, False)
    assert trajectory.source == "kp08"

  def test_xy_only(self, reader, tmp_path):
    path = write(tmp_path / "a.csv", "x,y\n0,0\n1,0\n2,0\n")
    trajectory = reader.read(path)
    assert trajectory.displacements is None
    assert trajectory.markers == (False, False, False)

  def test_inconsistent_displacement(self, reader, tmp_path):
    path = write(tmp_path / "a.csv", "X,Y,U,V\n0,0,5,0\n1,0,1,0\n2,0,0,0\n")
    with pytest.raises(InconsistentDisplacementError) as info:
      reader.read(path)
    assert info.value.line == 2

  def test_last_row_displacement_must_be_zero(self, reader, tmp_path):
    path = write(tmp_path / "a.csv", "X,Y,U,V\n0,0,1,0\n1,0,1,0\n2,0,1,0\n")
    with pytest.raises(InconsistentDisplacementError) as info:
      reader.read(path)
    assert info.value.line == 4

  def test_two_rows(self, reader, tmp_path):
    path = write(tmp_path / "a.csv", "X,Y\n0,0\n1,1\n")
    with pytest.raises(TooFewPointsError):
      reader.read(path)

  def test_bad_number_reports_line(self, reader, tmp_path):
    path = write(tmp_path / "a.csv", "X,Y\n0,0\n1,oops\n2,2\n")
    with pytest.raises(TrajectoryParseError) as info:
      reader.read(path)
    assert info.value.line == 3

  def test_missing_header_column(self, reader, tmp_path):
    path = write(tmp_path / "a.csv", "A,B\n0,0\n1,1\n2,2\n")
    with pytest.raises(TrajectoryParseError):
      reader.read(path)

  def test_missing_file(self, reader, tmp_path):
    with pytest.raises(TrajectoryParseError, match="does not exist"):
      reader.read(tmp_path / "nope.csv")

  def test_sidecar_meta(self, reader, tmp_path):
    path = write(tmp_path / "walk.csv", "X,Y\n0,0\n1,0\n2,0\n")
    meta_path(path).write_text(
      json.dumps({"keypoint_id": "kp04", "fps": 30, "redundant_ends": False}), encoding="utf-8"
    )
    trajectory = reader.read(path)
    assert trajectory.source == "kp04"
    assert trajectory.meta["fps"] == 30
    assert trajectory.meta["redundant_ends"] is False

  def test_supports_csv_only(self, reader, tmp_path):
    assert reader.supports_format(tmp_path / "a.CSV")
    assert not reader.supports_format(tmp_path / "a.json")


class TestWrite:
  def test_round_trip(self, reader, tmp_path):
    points = np.array([[0.5, 1.25], [3.0, -2.0], [7.125, 0.0], [1e-3, 2.0]])
    original = Trajectory(points=points, markers=(True, False, False, True), source="kp01")
    path = write_trajectory(
      tmp_path / "out" / "kp01.csv", original, TrajectoryMeta(keypoint_id="kp01", fps=25)
    )
    loaded = reader.read(path)
    assert np.array_equal(loaded.points, points)
    assert loaded.markers == original.markers
    assert loaded.source == "kp01"
    assert loaded.meta["fps"] == 25

  def test_identical_input_gives_identical_bytes(self, tmp_path):
    trajectory = Trajectory(points=np.array([[0.1, 0.2], [0.3, 0.4], [0.5, 0.6]]))
    first = write_trajectory(tmp_path / "a.csv", trajectory).read_bytes()
    second = write_trajectory(tmp_path / "b.csv", trajectory).read_bytes()
    assert first == second
    assert first.startswith(b"X,Y,U,V,C\n")
