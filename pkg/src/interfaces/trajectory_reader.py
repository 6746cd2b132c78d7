"""Interface for trajectory readers.

A reader turns one file format into a ``Trajectory``; new formats plug in
without touching the pipeline.
"""

from abc import ABC, abstractmethod
from pathlib import Path

from ..models.domain import Trajectory


class ITrajectoryReader(ABC):
  """Abstract interface for trajectory readers."""

  @abstractmethod
  def read(self, path: Path) -> Trajectory:
    """Load a trajectory file.

    Args:
        path: File to read

    Returns:
        The parsed trajectory

    Raises:
        TrajectoryParseError: If a row cannot be parsed
        TooFewPointsError: If fewer than three rows are present
    """

  @abstractmethod
  def supports_format(self, path: Path) -> bool:
    """Check if the reader supports the given file.

    Args:
        path: The file to check

    Returns:
        True if the format is supported, False otherwise
    """
