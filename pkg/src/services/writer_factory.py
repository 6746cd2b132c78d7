"""Factory for report writers.

New output formats register here without touching the commands.
"""

from ..exceptions import UnsupportedFormatError
from ..interfaces.report_writer import IReportWriter
from .report_writers import CsvReportWriter, JsonReportWriter, TextReportWriter


class ReportWriterFactory:
  """Factory class for creating report writers."""

  _writers: dict[str, type[IReportWriter]] = {
    "text": TextReportWriter,
    "json": JsonReportWriter,
    "csv": CsvReportWriter,
  }

  @classmethod
  def supported_formats(cls) -> tuple[str, ...]:
    return tuple(cls._writers)

  @classmethod
  def create_writer(cls, output_format: str) -> IReportWriter:
    """Create the writer for an output format.

    Args:
        output_format: One of ``text``, ``json`` or ``csv``

    Returns:
        IReportWriter: A writer instance

    Raises:
        UnsupportedFormatError: If the format is unknown
    """
    writer_cls = cls._writers.get(output_format.lower())
    if writer_cls is None:
      raise UnsupportedFormatError(output_format, cls.supported_formats())
    return writer_cls()
