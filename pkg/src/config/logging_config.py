"""Logging configuration using Loguru."""

from pathlib import Path
import sys

from loguru import logger

from .settings import Settings, get_settings

LOG_FORMAT = (
  "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
  "<level>{level: <8}</level> | "
  "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | "
  "<level>{message}</level>"
)


class LoggerConfig:
  """Centralized logger configuration."""

  @staticmethod
  def setup(settings: Settings | None = None) -> None:
    """Configure loguru with a stderr sink and optional file sinks.

    Standard output is reserved for command results, so console logging
    goes to stderr. File sinks are added only when ``log_dir`` is set.

    Args:
        settings: Resolved settings; the cached process settings when omitted
    """
    settings = settings or get_settings()
    level = settings.log_level.upper()
    logger.remove()

    logger.add(
      sys.stderr,
      format=LOG_FORMAT,
      level=level,
      colorize=sys.stderr.isatty(),
      backtrace=False,
      diagnose=False,
    )

    if settings.log_dir:
      logs_dir = Path(settings.log_dir)
      logs_dir.mkdir(parents=True, exist_ok=True)

      logger.add(
        logs_dir / "pattern_oracle_{time:YYYY-MM-DD}.log",
        format=LOG_FORMAT,
        level=level,
        rotation="00:00",
        retention="30 days",
        compression="zip",
        backtrace=True,
        diagnose=False,
        enqueue=True,
      )

      logger.add(
        logs_dir / "errors_{time:YYYY-MM-DD}.log",
        format=LOG_FORMAT,
        level="ERROR",
        rotation="00:00",
        retention="90 days",
        compression="zip",
        backtrace=True,
        diagnose=False,
        enqueue=True,
      )

    logger.debug(f"Logging configured with level: {level}")


def get_logger():
  """Get the configured logger instance. Convenience function for dependency injection.

  Returns:
      The loguru logger instance
  """
  return logger
