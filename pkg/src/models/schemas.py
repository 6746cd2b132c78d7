"""Configuration, report and wire-format models."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.settings import Settings

TiePolicy = Literal["optimistic", "pessimistic"]


class CheckConfig(BaseModel):
  """Thresholds of the frame-by-frame trajectory check."""

  check_window: int = Field(default=5, ge=1, description="CR: frames per window")
  static_radius: float = Field(
    default=5.0, gt=0, description="Net window displacement, px, at or below which a window is static"
  )
  static_limit: int = Field(
    default=20, ge=1, description="Consecutive static windows that invalidate the track"
  )
  jump_factor: float = Field(
    default=2.0, gt=0, description="Last step over average step ratio that counts as a jump"
  )

  @classmethod
  def from_settings(cls, settings: Settings) -> "CheckConfig":
    return cls(
      check_window=settings.check_window,
      static_radius=settings.static_radius,
      static_limit=settings.static_limit,
      jump_factor=settings.jump_factor,
    )


class CheckResult(BaseModel):
  """Verdict of the trajectory check."""

  valid: bool
  reason: Literal["ok", "static", "jump"] = "ok"
  static_windows: int = Field(default=0, description="Current run of static windows")
  average_step: float = Field(default=0.0, description="Mean step length, px")
  last_step: float = Field(default=0.0, description="Length of the final step, px")


class SimilarityParams(BaseModel):
  """Weighting between direction and length-ratio agreement."""

  theta: float = Field(default=0.9, ge=0.0, le=1.0)


class EngineConfig(BaseModel):
  """Candidate generation and filtering knobs."""

  beam_width: int = Field(default=5000, ge=1, description="Candidates kept after each step")
  theta: float = Field(default=0.9, ge=0.0, le=1.0)
  unit_weight: float = Field(default=1.0, gt=0)
  min_similarity: float = Field(
    default=0.0, ge=0.0, le=1.0, description="Matches scoring below this are rejected"
  )
  consistency_filter: bool = True
  consistency_mode: Literal["equal", "contains"] = "equal"
  min_units_consumed: int | None = Field(
    default=None, ge=1, description="Units a candidate must consume; all window units when unset"
  )
  trim_redundant_ends: bool = Field(
    default=True, description="Leave the first and last polyline segment out of the window"
  )
  crossing_margin: float = Field(
    default=0.1, ge=0.0, lt=0.5, description="Segment parameters closer than this to an end never cross"
  )

  @property
  def similarity(self) -> SimilarityParams:
    return SimilarityParams(theta=self.theta)

  @classmethod
  def from_settings(cls, settings: Settings) -> "EngineConfig":
    return cls(
      beam_width=settings.beam_width,
      theta=settings.theta,
      unit_weight=settings.unit_weight,
      min_similarity=settings.min_similarity,
      consistency_filter=settings.consistency_filter,
      consistency_mode=settings.consistency_mode,
      trim_redundant_ends=settings.trim_redundant_ends,
      crossing_margin=settings.crossing_margin,
    )


class SynthConfig(BaseModel):
  """Recording conditions of one synthetic trajectory."""

  model_config = ConfigDict(frozen=True)

  pattern: str = Field(..., description="Pattern in dash-separated text form")
  grid_spacing_px: float = Field(default=120.0, gt=0)
  samples_per_segment: int = Field(default=30, ge=2)
  camera_tilt_deg: tuple[float, float, float] = Field(
    default=(0.0, 0.0, 0.0), description="(pitch, yaw, roll) in degrees"
  )
  noise_sigma_px: float = Field(default=0.0, ge=0.0)
  head_tail_len: float | None = Field(
    default=None, ge=0.0, description="Redundant stroke length, px; half the grid spacing when unset"
  )
  offset_px: tuple[float, float] = Field(
    default=(0.0, 0.0), description="Rigid offset of the keypoint from the fingertip"
  )
  keypoint_id: str = "kp00"
  rng_seed: int = 0

  @field_validator("pattern")
  @classmethod
  def pattern_must_be_valid(cls, v: str) -> str:
    """Validate the pattern text against the lock rules."""
    from ..services.pattern_space import parse_pattern

    return parse_pattern(v).text

  @property
  def effective_head_tail_len(self) -> float:
    if self.head_tail_len is None:
      return 0.5 * self.grid_spacing_px
    return self.head_tail_len


class TrajectoryMeta(BaseModel):
  """Optional sidecar metadata of a trajectory file."""

  model_config = ConfigDict(extra="allow")

  keypoint_id: str | None = None
  fps: float | None = Field(default=None, gt=0)
  scenario: str | None = None
  redundant_ends: bool | None = Field(
    default=None, description="Whether the file starts and ends with redundant strokes"
  )


class GuessEntry(BaseModel):
  """One ranked pattern guess."""

  pattern: str
  confidence: float
  rank: int = Field(..., ge=1)


class GuessList(BaseModel):
  """Patterns ordered by descending confidence.

  Entries whose confidences agree to nine decimals share a competition
  rank; within a shared rank the text form decides the order.
  """

  entries: list[GuessEntry] = Field(default_factory=list)

  def __len__(self) -> int:
    return len(self.entries)

  def patterns(self) -> list[str]:
    return [entry.pattern for entry in self.entries]

  def top(self, count: int) -> "GuessList":
    return GuessList(entries=self.entries[:count])

  def rank_of(self, pattern: str, tie_policy: TiePolicy = "optimistic") -> int | None:
    """Rank of a pattern, or None when it is absent.

    Args:
        pattern: Pattern text form
        tie_policy: ``optimistic`` returns the shared rank, ``pessimistic``
            the position of the last entry sharing it

    Returns:
        One-based rank
    """
    for entry in self.entries:
      if entry.pattern != pattern:
        continue
      if tie_policy == "optimistic":
        return entry.rank
      return sum(1 for other in self.entries if other.rank <= entry.rank)
    return None


class ComplexityScore(BaseModel):
  """Complexity of a pattern: dots times log2 of length plus crossings and overlaps."""

  pattern: str
  connected_dots: int = Field(..., description="S_P")
  total_length: float = Field(..., description="L_P, grid units")
  intersections: int = Field(..., description="I_P")
  overlaps: int = Field(..., description="O_P")
  score: float = Field(..., gt=0, description="C_SP")


class CipherRecord(BaseModel):
  """Serializable view of a cipher for dictionary dumps."""

  turning_dots: list[int]
  key_expansion: list[int]
  u: list[int]
  v: list[int]
  w: list[float]
  angle: float


class CipherDump(BaseModel):
  """The full cipher dictionary plus its standard sets."""

  count: int
  distance_set: list[float]
  angle_set: list[int]
  ciphers: list[CipherRecord]


class SampleResult(BaseModel):
  """Outcome of guessing one labelled sample."""

  name: str
  pattern: str
  rank: int | None = Field(default=None, description="Rank of the truth, None when missed")
  candidates: int = 0
  elapsed_ms: float = 0.0
  error: str | None = None


class TimingStats(BaseModel):
  """Per-sample wall-clock statistics in milliseconds."""

  total_ms: float = 0.0
  mean_ms: float = 0.0
  median_ms: float = 0.0
  max_ms: float = 0.0


class EvalReport(BaseModel):
  """Success rate per attempt budget over a labelled corpus."""

  label: str = "corpus"
  max_attempts: int = Field(default=20, ge=1)
  tie_policy: TiePolicy = "optimistic"
  sample_count: int = 0
  success_curve: dict[int, float] = Field(default_factory=dict)
  samples: list[SampleResult] = Field(default_factory=list)
  timing: TimingStats = Field(default_factory=TimingStats)

  @model_validator(mode="after")
  def curve_must_be_monotone(self) -> "EvalReport":
    """Validate that success never drops as attempts grow."""
    previous = 0.0
    for attempts in sorted(self.success_curve):
      rate = self.success_curve[attempts]
      if not 0.0 <= rate <= 1.0:
        raise ValueError(f"success rate {rate} at {attempts} attempts is outside [0, 1]")
      if rate < previous:
        raise ValueError("success curve must be non-decreasing in attempts")
      previous = rate
    return self


class ManifestEntry(BaseModel):
  """A labelled sample of a synthetic corpus."""

  name: str
  files: list[str] = Field(..., min_length=1, description="Trajectory files relative to the manifest")
  pattern: str
  config: SynthConfig


class Manifest(BaseModel):
  """Index of a synthetic corpus directory."""

  version: int = 1
  entries: list[ManifestEntry] = Field(default_factory=list)


class KdeCurve(BaseModel):
  """Density of measured values around one standard value."""

  standard: float
  sigma: float
  count: int
  grid: list[float]
  density: list[float]
  mode: float


class CorrelationRow(BaseModel):
  """Rank correlations of one feature pairing."""

  feature: str
  pairs: int
  kendall_tau_b: float | None = None
  spearman_rho: float | None = None


class FeatureCorrelationReport(BaseModel):
  """Measured-versus-standard feature agreement over a corpus."""

  samples_used: int
  samples_skipped: int
  length_kde: list[KdeCurve] = Field(default_factory=list)
  angle_kde: list[KdeCurve] = Field(default_factory=list)
  correlations: list[CorrelationRow] = Field(default_factory=list)

  def correlation(self, feature: str) -> CorrelationRow | None:
    return next((row for row in self.correlations if row.feature == feature), None)
