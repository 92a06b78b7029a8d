"""Set-valued Euclidean projectors and the method of alternating projections.

The package provides exact projection onto spheres, balls, boxes,
halfspaces, segments, finite point clouds, and finite unions of those; an
alternating-projections driver with trace capture and cluster diagnostics;
a spiral iterate construction whose alternating-projection runs never
converge (the cluster set fills the whole unit circle); and an empirical
harness confirming that over *finite* unions of convex sets, bounded runs
with vanishing gaps always converge to a common intersection point.
"""

from .euclid import (
    Ball,
    Box,
    DegenerateProjection,
    DimensionMismatch,
    Halfspace,
    PointCloud,
    ProjectionResult,
    ProjectorSpec,
    Segment,
    Sphere,
    Union,
    distance,
    nearest_in_cloud,
    project,
    spec_from_json,
    spec_to_json,
)
from .map_driver import MapConfig, MapTrace, Verdict, cluster_diagnostics, run
from .sequence import SequenceReport, SpiralRecord, generate, verify_nearest
from .spiral import BACKEND, BracketInvalid, alpha_chain, curve, eps, next_alpha, rho

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Ball",
    "Box",
    "BracketInvalid",
    "DegenerateProjection",
    "DimensionMismatch",
    "Halfspace",
    "MapConfig",
    "MapTrace",
    "PointCloud",
    "ProjectionResult",
    "ProjectorSpec",
    "Segment",
    "SequenceReport",
    "Sphere",
    "SpiralRecord",
    "Union",
    "Verdict",
    "alpha_chain",
    "cluster_diagnostics",
    "curve",
    "distance",
    "eps",
    "generate",
    "nearest_in_cloud",
    "next_alpha",
    "project",
    "rho",
    "run",
    "spec_from_json",
    "spec_to_json",
    "verify_nearest",
]
