"""Reconstruct ranked unlock pattern candidates from hand-keypoint trajectories."""

__version__ = "0.1.0"
