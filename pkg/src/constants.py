"""Application constants."""

import math

from pydantic import BaseModel


class Constants(BaseModel):
  """Application constants."""

  success_exit: int = 0
  domain_failure_exit: int = 1
  usage_error_exit: int = 2

  grid_size: int = 3
  min_pattern_length: int = 4
  max_pattern_length: int = 9
  total_valid_patterns: int = 389_112
  cipher_count: int = 504

  intersection_gaps: tuple[int, ...] = (2, 3, 4, 5, 6, 7)
  default_attempt_budget: int = 20
  histogram_bucket_width: int = 6


constants = Constants()

# Standard grid distances, in grid units.
DISTANCE_SET: tuple[float, ...] = (
  1.0,
  math.sqrt(2),
  2.0,
  math.sqrt(5),
  2 * math.sqrt(2),
)

# Interior angles between two pattern strokes meeting at a dot, in whole
# degrees; straight-through and full reversal are not turning angles.
ANGLE_SET: tuple[int, ...] = (18, 27, 37, 45, 53, 63, 72, 90, 117, 135)

EXIT_CODES: dict[str, int] = {
  "usage": constants.usage_error_exit,
  "domain": constants.domain_failure_exit,
}
