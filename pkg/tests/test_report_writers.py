"""Tests for the output formats."""

import csv
import io
import json

import pytest

from src.exceptions import UnsupportedFormatError
from src.models.schemas import ComplexityScore, EvalReport, GuessEntry, GuessList
from src.services.report_writers import CsvReportWriter, JsonReportWriter, TextReportWriter
from src.services.writer_factory import ReportWriterFactory


@pytest.fixture
def guesses() -> GuessList:
  return GuessList(
    entries=[
      GuessEntry(pattern="1-6-8-3", confidence=2.0, rank=1),
      GuessEntry(pattern="4-9-2-6", confidence=1.5, rank=2),
    ]
  )


@pytest.fixture
def report() -> EvalReport:
  return EvalReport(label="clean", max_attempts=3, sample_count=4, success_curve={1: 0.5, 2: 0.75, 3: 0.75})


class TestFactory:
  @pytest.mark.parametrize(
    ("name", "cls"),
    [("text", TextReportWriter), ("json", JsonReportWriter), ("CSV", CsvReportWriter)],
  )
  def test_known_formats(self, name, cls):
    assert isinstance(ReportWriterFactory.create_writer(name), cls)

  def test_unknown_format(self):
    with pytest.raises(UnsupportedFormatError) as info:
      ReportWriterFactory.create_writer("yaml")
    assert info.value.supported == ("text", "json", "csv")


class TestText:
  def test_guesses(self, guesses):
    lines = TextReportWriter().guesses(guesses).splitlines()
    assert lines == ["1\t1-6-8-3\t2.000000", "2\t4-9-2-6\t1.500000"]

  def test_evaluation(self, report):
    lines = TextReportWriter().evaluation(report).splitlines()
    assert lines[0].startswith("# clean: 4 samples")
    assert lines[1:] == ["1\t0.5000", "2\t0.7500", "3\t0.7500"]


class TestJson:
  def test_guesses_keys(self, guesses):
    data = json.loads(JsonReportWriter().guesses(guesses))
    assert data[0] == {"pattern": "1-6-8-3", "confidence": 2.0, "rank": 1}

  def test_scores_keys(self):
    score = ComplexityScore(
      pattern="1-2-3-6", connected_dots=4, total_length=3.0, intersections=0, overlaps=0, score=6.34
    )
    data = json.loads(JsonReportWriter().scores([score]))
    assert set(data[0]) == {
      "pattern",
      "connected_dots",
      "total_length",
      "intersections",
      "overlaps",
      "score",
    }

  def test_evaluation_keys(self, report):
    data = json.loads(JsonReportWriter().evaluation(report))
    assert {"label", "success_curve", "samples", "timing", "tie_policy"} <= set(data)
    assert data["success_curve"]["1"] == 0.5


class TestCsv:
  def test_guesses(self, guesses):
    rows = list(csv.reader(io.StringIO(CsvReportWriter().guesses(guesses))))
    assert rows[0] == ["rank", "pattern", "confidence"]
    assert rows[1] == ["1", "1-6-8-3", "2.0"]

  def test_evaluation(self, report):
    rows = list(csv.reader(io.StringIO(CsvReportWriter().evaluation(report))))
    assert rows == [["attempts", "success_rate"], ["1", "0.5"], ["2", "0.75"], ["3", "0.75"]]

  def test_table(self):
    text = CsvReportWriter().table([{"bucket": "1-6", "count": 3}], ["bucket", "count"])
    assert text == "bucket,count\n1-6,3\n"
