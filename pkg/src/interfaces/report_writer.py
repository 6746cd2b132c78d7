"""Interface for report writers, one implementation per output format."""

from abc import ABC, abstractmethod
from collections.abc import Sequence

from pydantic import BaseModel

from ..models.schemas import ComplexityScore, EvalReport, GuessList


class IReportWriter(ABC):
  """Abstract interface for rendering command results."""

  name: str

  @abstractmethod
  def guesses(self, guess_list: GuessList) -> str:
    """Render a ranked guess list."""

  @abstractmethod
  def scores(self, scores: Sequence[ComplexityScore]) -> str:
    """Render complexity scores."""

  @abstractmethod
  def evaluation(self, report: EvalReport) -> str:
    """Render an evaluation report's success curve."""

  @abstractmethod
  def table(self, rows: Sequence[dict], columns: Sequence[str]) -> str:
    """Render plain rows such as counts or histogram buckets."""

  @abstractmethod
  def document(self, model: BaseModel) -> str:
    """Render a structured report that has no tabular form."""
