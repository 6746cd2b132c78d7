"""Synthetic keypoint trajectories with known ground truth.

A path is drawn through the pattern's key positions on the phone plane,
optionally extended by short redundant strokes before the first and after
the last key, viewed through a tilted pinhole camera, and perturbed with
Gaussian noise. Every random draw comes from the configured seed.
"""

import math

import numpy as np

from ..config.logging_config import get_logger
from ..models.domain import Trajectory, compute_displacements
from ..models.schemas import SynthConfig, TrajectoryMeta
from .pattern_space import parse_pattern, position

logger = get_logger()

CAMERA_DISTANCE_FACTOR = 10.0
MIN_HEAD_TAIL_ANGLE = 45.0
MAX_HEAD_TAIL_ANGLE = 135.0
MIN_STEP_TO_NOISE = 5.0


def rotation_matrix(pitch: float, yaw: float, roll: float) -> np.ndarray:
  """R = Rz(roll) @ Ry(yaw) @ Rx(pitch), angles in degrees."""
  p, y, r = np.radians([pitch, yaw, roll])
  rx = np.array([[1, 0, 0], [0, np.cos(p), -np.sin(p)], [0, np.sin(p), np.cos(p)]])
  ry = np.array([[np.cos(y), 0, np.sin(y)], [0, 1, 0], [-np.sin(y), 0, np.cos(y)]])
  rz = np.array([[np.cos(r), -np.sin(r), 0], [np.sin(r), np.cos(r), 0], [0, 0, 1]])
  return rz @ ry @ rx


def project(points: np.ndarray, tilt_deg: tuple[float, float, float], spacing: float) -> np.ndarray:
  """View plane points through a pinhole camera facing the grid centre.

  The camera sits ten grid widths away and its focal length equals that
  distance, so an untilted plane maps onto itself.
  """
  if not any(tilt_deg):
    return points.copy()
  centre = np.array([spacing, spacing])
  distance = CAMERA_DISTANCE_FACTOR * 2.0 * spacing
  local = np.column_stack([points - centre, np.zeros(len(points))])
  rotated = local @ rotation_matrix(*tilt_deg).T
  depth = distance + rotated[:, 2]
  return distance * rotated[:, :2] / depth[:, None] + centre


def _sample_edge(a: np.ndarray, b: np.ndarray, samples_per_segment: int, spacing: float) -> np.ndarray:
  """Points after ``a`` up to and including ``b``, evenly stepped."""
  length = float(np.linalg.norm(b - a))
  steps = max(1, round(samples_per_segment * length / spacing))
  t = np.arange(1, steps + 1, dtype=float)[:, None] / steps
  return a + t * (b - a)


def _rotate(vector: np.ndarray, degrees: float) -> np.ndarray:
  c, s = math.cos(math.radians(degrees)), math.sin(math.radians(degrees))
  return np.array([c * vector[0] - s * vector[1], s * vector[0] + c * vector[1]])


def _redundant_end(anchor: np.ndarray, direction: np.ndarray, length: float, rng: np.random.Generator) -> np.ndarray:
  angle = rng.uniform(MIN_HEAD_TAIL_ANGLE, MAX_HEAD_TAIL_ANGLE) * rng.choice([-1.0, 1.0])
  unit = direction / np.linalg.norm(direction)
  return anchor + length * _rotate(unit, angle)


def frame_density(cfg: SynthConfig) -> int:
  """Samples per grid spacing actually drawn.

  Noisy renders are thinned so the frame step stays at least
  ``MIN_STEP_TO_NOISE`` noise deviations; at the requested density the
  noise alone would trip the jump check.
  """
  if cfg.noise_sigma_px <= 0:
    return cfg.samples_per_segment
  cap = math.floor(cfg.grid_spacing_px / (MIN_STEP_TO_NOISE * cfg.noise_sigma_px))
  return max(2, min(cfg.samples_per_segment, cap))


def plane_path(cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
  """Dense noiseless path on the phone plane, in px, y down."""
  keys = parse_pattern(cfg.pattern).keys
  spacing = cfg.grid_spacing_px
  vertices = [np.array(position(k), dtype=float) * spacing for k in keys]
  head_tail = cfg.effective_head_tail_len
  if head_tail > 0:
    head = _redundant_end(vertices[0], vertices[0] - vertices[1], head_tail, rng)
    tail = _redundant_end(vertices[-1], vertices[-1] - vertices[-2], head_tail, rng)
    vertices = [head, *vertices, tail]

  density = frame_density(cfg)
  parts = [vertices[0][None, :]]
  for a, b in zip(vertices, vertices[1:], strict=False):
    parts.append(_sample_edge(a, b, density, spacing))
  return np.vstack(parts) + np.asarray(cfg.offset_px, dtype=float)


def _render(path: np.ndarray, cfg: SynthConfig, rng: np.random.Generator, source: str) -> Trajectory:
  points = project(path, cfg.camera_tilt_deg, cfg.grid_spacing_px)
  if cfg.noise_sigma_px > 0:
    points = points + rng.normal(0.0, cfg.noise_sigma_px, size=points.shape)
  return Trajectory(
    points=points,
    displacements=compute_displacements(points),
    markers=(False,) * len(points),
    source=source,
    meta=synth_meta(cfg, source).model_dump(mode="json", exclude_none=True),
  )


def synth_meta(cfg: SynthConfig, keypoint_id: str | None = None) -> TrajectoryMeta:
  """Sidecar metadata recording ground truth and recording conditions."""
  return TrajectoryMeta(
    keypoint_id=keypoint_id or cfg.keypoint_id,
    scenario="synthetic",
    redundant_ends=cfg.effective_head_tail_len > 0,
    pattern=cfg.pattern,
    synth=cfg.model_dump(mode="json"),
  )


def synthesize_trajectory(cfg: SynthConfig) -> Trajectory:
  """One synthetic trajectory, fully determined by ``cfg``."""
  rng = np.random.default_rng(cfg.rng_seed)
  trajectory = _render(plane_path(cfg, rng), cfg, rng, cfg.keypoint_id)
  logger.debug(f"Synthesized {len(trajectory)} points for {cfg.pattern} (seed {cfg.rng_seed})")
  return trajectory


def synthesize_keypoint_set(
  cfg: SynthConfig, count: int, spread_px: float | None = None
) -> list[Trajectory]:
  """Several keypoints of one hand drawing the same pattern.

  The keypoints share the drawn path and differ by a rigid offset and by
  independent noise streams spawned from the seed.

  Args:
      cfg: Base configuration
      count: Number of keypoints
      spread_px: Maximum offset from the fingertip; 0.3 grid spacings by default

  Returns:
      One trajectory per keypoint, ``kp00`` first with no offset
  """
  spread = 0.3 * cfg.grid_spacing_px if spread_px is None else spread_px
  sequence = np.random.SeedSequence(cfg.rng_seed)
  path_seed, offset_seed, *noise_seeds = sequence.spawn(count + 2)
  path = plane_path(cfg, np.random.default_rng(path_seed))
  offset_rng = np.random.default_rng(offset_seed)

  trajectories = []
  for index, noise_seed in enumerate(noise_seeds):
    if index == 0:
      offset = np.zeros(2)
    else:
      angle = offset_rng.uniform(0.0, 2.0 * math.pi)
      radius = spread * math.sqrt(offset_rng.uniform())
      offset = radius * np.array([math.cos(angle), math.sin(angle)])
    keypoint = f"kp{index:02d}"
    keypoint_cfg = cfg.model_copy(update={"keypoint_id": keypoint})
    trajectories.append(
      _render(path + offset, keypoint_cfg, np.random.default_rng(noise_seed), keypoint)
    )
  return trajectories
