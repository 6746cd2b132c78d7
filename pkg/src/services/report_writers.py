"""Report writers for the text, JSON and CSV output formats."""

from collections.abc import Sequence
import csv
import io
import json

from pydantic import BaseModel

from ..interfaces.report_writer import IReportWriter
from ..models.schemas import ComplexityScore, EvalReport, GuessList


def _json(data) -> str:
  return json.dumps(data, indent=2, sort_keys=False) + "\n"


class TextReportWriter(IReportWriter):
  """Tab-separated lines for reading in a terminal or piping to cut/awk."""

  name = "text"

  def guesses(self, guess_list: GuessList) -> str:
    return "".join(
      f"{e.rank}\t{e.pattern}\t{e.confidence:.6f}\n" for e in guess_list.entries
    )

  def scores(self, scores: Sequence[ComplexityScore]) -> str:
    return "".join(f"{s.pattern}\t{s.score:.4f}\n" for s in scores)

  def evaluation(self, report: EvalReport) -> str:
    lines = [f"# {report.label}: {report.sample_count} samples, {report.tie_policy} ties"]
    lines += [f"{a}\t{rate:.4f}" for a, rate in sorted(report.success_curve.items())]
    return "\n".join(lines) + "\n"

  def table(self, rows: Sequence[dict], columns: Sequence[str]) -> str:
    return "".join("\t".join(str(row[c]) for c in columns) + "\n" for row in rows)

  def document(self, model: BaseModel) -> str:
    return model.model_dump_json(indent=2) + "\n"


class JsonReportWriter(IReportWriter):
  """JSON documents matching the schemas under ``docs/schemas``."""

  name = "json"

  def guesses(self, guess_list: GuessList) -> str:
    return _json([e.model_dump() for e in guess_list.entries])

  def scores(self, scores: Sequence[ComplexityScore]) -> str:
    return _json([s.model_dump() for s in scores])

  def evaluation(self, report: EvalReport) -> str:
    return report.model_dump_json(indent=2) + "\n"

  def table(self, rows: Sequence[dict], columns: Sequence[str]) -> str:
    return _json([{c: row[c] for c in columns} for row in rows])

  def document(self, model: BaseModel) -> str:
    return model.model_dump_json(indent=2) + "\n"


class CsvReportWriter(IReportWriter):
  """Comma-separated rows with a header line."""

  name = "csv"

  @staticmethod
  def _rows(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()

  def guesses(self, guess_list: GuessList) -> str:
    return self._rows(
      ("rank", "pattern", "confidence"),
      [(e.rank, e.pattern, repr(e.confidence)) for e in guess_list.entries],
    )

  def scores(self, scores: Sequence[ComplexityScore]) -> str:
    return self._rows(
      ("pattern", "connected_dots", "total_length", "intersections", "overlaps", "score"),
      [
        (s.pattern, s.connected_dots, repr(s.total_length), s.intersections, s.overlaps, repr(s.score))
        for s in scores
      ],
    )

  def evaluation(self, report: EvalReport) -> str:
    return self._rows(
      ("attempts", "success_rate"),
      [(a, repr(rate)) for a, rate in sorted(report.success_curve.items())],
    )

  def table(self, rows: Sequence[dict], columns: Sequence[str]) -> str:
    return self._rows(columns, [[row[c] for c in columns] for row in rows])

  def document(self, model: BaseModel) -> str:
    # no tabular form; fall back to JSON
    return model.model_dump_json(indent=2) + "\n"
