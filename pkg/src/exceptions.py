"""Custom exceptions for pattern-oracle.

Every error carries the values that caused it and can render itself as a
dictionary for JSON output. ``kind`` tells the command line which exit code
to use: ``usage`` for bad input, ``domain`` for inputs that are well formed
but yield nothing.
"""


class PatternOracleError(Exception):
  """Base class for all pattern-oracle errors."""

  kind: str = "usage"
  title: str = "Pattern Oracle Error"

  def __init__(self, message: str):
    """Initialize the exception.

    Args:
        message: Human readable description of the failure
    """
    self.message = message
    super().__init__(self.message)

  def to_dict(self) -> dict:
    """Convert exception to dictionary for JSON error output.

    Returns:
        Dictionary with error details
    """
    return {"error": self.title, "kind": self.kind, "message": self.message}


class InvalidPatternError(PatternOracleError):
  """A key sequence breaks one of the pattern lock rules."""

  title = "Invalid Pattern"

  def __init__(self, keys: list[int] | tuple[int, ...], reason: str):
    self.keys = tuple(keys)
    self.reason = reason
    text = "-".join(str(k) for k in self.keys)
    super().__init__(f"Pattern '{text}' is invalid: {reason}")

  def to_dict(self) -> dict:
    data = super().to_dict()
    data["keys"] = list(self.keys)
    return data


class TooShortError(InvalidPatternError):
  """Fewer than four keys."""

  def __init__(self, keys: list[int] | tuple[int, ...]):
    super().__init__(keys, f"needs at least 4 keys, got {len(keys)}")


class DuplicateKeyError(InvalidPatternError):
  """A key appears twice."""

  def __init__(self, keys: list[int] | tuple[int, ...], key: int):
    self.key = key
    super().__init__(keys, f"key {key} is used more than once")


class KeyOutOfRangeError(InvalidPatternError):
  """A key outside 1..9."""

  def __init__(self, keys: list[int] | tuple[int, ...], key: int):
    self.key = key
    super().__init__(keys, f"key {key} is outside 1..9")


class SkippedUnvisitedPointError(InvalidPatternError):
  """A stroke jumps over a dot that has not been selected yet."""

  def __init__(
    self, keys: list[int] | tuple[int, ...], pair: tuple[int, int], midpoint: int
  ):
    self.pair = pair
    self.midpoint = midpoint
    super().__init__(
      keys, f"{pair[0]}->{pair[1]} skips unvisited key {midpoint}"
    )

  def to_dict(self) -> dict:
    data = super().to_dict()
    data["pair"] = list(self.pair)
    data["midpoint"] = self.midpoint
    return data


class PatternFormatError(PatternOracleError):
  """Pattern text that is not a dash-separated list of integers."""

  title = "Pattern Format Error"

  def __init__(self, text: str):
    self.text = text
    super().__init__(
      f"Cannot parse pattern '{text}': expected dash-separated keys like 1-6-8-3"
    )


class TrajectoryParseError(PatternOracleError):
  """A trajectory file row could not be parsed."""

  title = "Trajectory Parse Error"

  def __init__(self, path: str, line: int, detail: str):
    self.path = path
    self.line = line
    super().__init__(f"{path}:{line}: {detail}")

  def to_dict(self) -> dict:
    data = super().to_dict()
    data["path"] = self.path
    data["line"] = self.line
    return data


class InconsistentDisplacementError(TrajectoryParseError):
  """The U,V columns disagree with consecutive X,Y differences."""

  title = "Inconsistent Displacement"

  def __init__(
    self,
    path: str,
    line: int,
    expected: tuple[float, float],
    got: tuple[float, float],
  ):
    self.expected = expected
    self.got = got
    super().__init__(
      path,
      line,
      f"displacement {got} does not match next-frame difference {expected}",
    )


class TooFewPointsError(PatternOracleError):
  """A trajectory with fewer than three points."""

  title = "Too Few Points"

  def __init__(self, count: int, minimum: int = 3, source: str = "trajectory"):
    self.count = count
    self.minimum = minimum
    super().__init__(f"{source} has {count} points, at least {minimum} are required")


class UnsupportedTrajectoryFormatError(PatternOracleError):
  """No reader accepts the given file."""

  title = "Unsupported Trajectory Format"

  def __init__(self, path: str):
    self.path = path
    super().__init__(f"Unsupported trajectory format: {path} (expected .csv)")


class TooFewTurningPointsError(PatternOracleError):
  """A polyline too short to form a single unit."""

  title = "Too Few Turning Points"
  kind = "domain"

  def __init__(self, count: int):
    self.count = count
    super().__init__(
      f"polyline has {count} turning points, at least 3 are needed for one unit"
    )


class NoCandidatesError(PatternOracleError):
  """Every cipher was rejected for the seed unit."""

  title = "No Candidates"
  kind = "domain"

  def __init__(self, unit_index: int):
    self.unit_index = unit_index
    super().__init__(f"no cipher matches unit {unit_index}; nothing to extend")


class AllTrajectoriesInvalidError(PatternOracleError):
  """No trajectory survived checking and candidate generation."""

  title = "All Trajectories Invalid"
  kind = "domain"

  def __init__(self, reasons: dict[str, str] | None = None):
    self.reasons = reasons or {}
    if self.reasons:
      detail = "; ".join(f"{name}: {why}" for name, why in self.reasons.items())
      message = f"no usable trajectory ({detail})"
    else:
      message = "no trajectories were given"
    super().__init__(message)

  def to_dict(self) -> dict:
    data = super().to_dict()
    data["reasons"] = self.reasons
    return data


class EmptySamplesError(PatternOracleError):
  """Kernel density estimate over no samples."""

  title = "Empty Samples"

  def __init__(self):
    super().__init__("density estimation needs at least one sample")


class NonPositiveSigmaError(PatternOracleError):
  """Kernel bandwidth must be positive."""

  title = "Non-positive Sigma"

  def __init__(self, sigma: float):
    self.sigma = sigma
    super().__init__(f"kernel bandwidth must be positive, got {sigma}")


class TooFewPairsError(PatternOracleError):
  """Rank correlation over fewer than two pairs."""

  title = "Too Few Pairs"

  def __init__(self, count: int):
    self.count = count
    super().__init__(f"rank correlation needs at least 2 pairs, got {count}")


class TiedSamplesError(PatternOracleError):
  """Kendall's coefficient was asked to rank tied observations."""

  title = "Tied Samples"

  def __init__(self, column: str, value: float):
    self.column = column
    self.value = value
    super().__init__(
      f"tied value {value} in {column}; pass ties='b' for the tie-corrected variant"
    )


class ManifestError(PatternOracleError):
  """A corpus manifest is missing or malformed."""

  title = "Manifest Error"

  def __init__(self, path: str, detail: str):
    self.path = path
    super().__init__(f"{path}: {detail}")


class UnsupportedFormatError(PatternOracleError):
  """No report writer exists for the requested output format."""

  title = "Unsupported Format"

  def __init__(self, output_format: str, supported: tuple[str, ...]):
    self.output_format = output_format
    self.supported = supported
    super().__init__(
      f"Output format '{output_format}' is not supported "
      f"(choose from {', '.join(supported)})"
    )


class ConfigFileError(PatternOracleError):
  """The key=value configuration file could not be read."""

  title = "Config File Error"

  def __init__(self, path: str, line: int, detail: str):
    self.path = path
    self.line = line
    super().__init__(f"{path}:{line}: {detail}")


class CommandUsageError(PatternOracleError):
  """Flags that parse but do not make sense together."""

  title = "Usage Error"

  def __init__(self, detail: str):
    super().__init__(detail)
