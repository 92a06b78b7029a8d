"""The two nonconvex sets whose alternating projections never converge.

`build` splits a generated iterate prefix by index parity -- even-indexed
points plus the unit sphere (or closed unit disk) form set A, odd-indexed
points plus the same sphere/disk form set B.  Starting from the first
iterate, alternating projections then walk the sequence two indices at a
time: a_n is iterate 2n and b_n is iterate 2n+1, so the iterates never
settle and their cluster set fills the whole circle as the horizon grows.

The sets here are finite truncations, so runs must stay clear of the
truncation edge; `run_corollary` enforces a two-index stop margin and
verifies the predicted trace index-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import map_driver, sequence
from .euclid import Ball, PointCloud, ProjectorSpec, Sphere, Union
from .map_driver import MapConfig, MapTrace

VARIANT_SPHERE = "sphere"
VARIANT_DISK = "disk"
_VARIANTS = (VARIANT_SPHERE, VARIANT_DISK)

__all__ = [
    "CorollaryViolated",
    "CounterexampleSets",
    "VARIANT_DISK",
    "VARIANT_SPHERE",
    "build",
    "max_safe_pairs",
    "run_corollary",
]


class CorollaryViolated(RuntimeError):
    """The alternating-projection trace left the predicted iterate indices."""

    def __init__(self, n: int, which: str):
        super().__init__(f"trace deviates from the predicted iterate at pair {n} ({which})")
        self.n = n
        self.which = which


@dataclass(eq=False)
class CounterexampleSets:
    set_a: ProjectorSpec
    set_b: ProjectorSpec
    horizon: int
    variant: str
    report: sequence.SequenceReport


def build(horizon: int, variant: str = VARIANT_SPHERE,
          report: Optional[sequence.SequenceReport] = None) -> CounterexampleSets:
    """Assemble the parity-split sets from the first `horizon` iterates.

    `report` may supply a pre-generated sequence (its first `horizon` records
    are used); otherwise one is generated.
    """
    horizon = int(horizon)
    if horizon < 2:
        raise ValueError(f"horizon must be >= 2, got {horizon}")
    if variant not in _VARIANTS:
        raise ValueError(f"variant must be one of {_VARIANTS}, got {variant!r}")
    if report is None:
        report = sequence.generate(horizon)
    if len(report) < horizon:
        raise ValueError(f"report has {len(report)} records, need {horizon}")
    pts = report.points()
    origin = np.zeros(2)
    surface: ProjectorSpec = Sphere(origin, 1.0) if variant == VARIANT_SPHERE else Ball(origin, 1.0)
    set_a = Union([PointCloud(pts[0:horizon:2]), surface])
    set_b = Union([PointCloud(pts[1:horizon:2]), surface])
    return CounterexampleSets(set_a, set_b, horizon, variant, report)


def max_safe_pairs(horizon: int) -> int:
    """Largest pair count that keeps a run two indices clear of the truncation edge."""
    return (int(horizon) - 1) // 2


def run_corollary(sets: CounterexampleSets, n_pairs: int,
                  stop_step: float = 0.0) -> MapTrace:
    """Run `n_pairs` alternating projections from the first iterate and verify
    that the trace reproduces the predicted points index-exactly.

    The precondition 2*n_pairs + 1 <= horizon keeps the run clear of the
    truncation edge (stop margin of two indices).  Raises CorollaryViolated
    on the first deviation; comparison is bitwise.
    """
    n_pairs = int(n_pairs)
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be >= 1, got {n_pairs}")
    if 2 * n_pairs + 1 > sets.horizon:
        raise ValueError(
            f"n_pairs={n_pairs} runs into the truncation edge: need 2*n_pairs + 1 <= "
            f"horizon={sets.horizon}"
        )
    pts = sets.report.points()
    config = MapConfig(sets.set_a, sets.set_b, pts[0],
                       max_iter=n_pairs, stop_step=stop_step)
    trace = map_driver.run(config)
    for n in range(len(trace.a)):
        if not np.array_equal(trace.a[n], pts[2 * n]):
            raise CorollaryViolated(n, "A")
        if not np.array_equal(trace.b[n], pts[2 * n + 1]):
            raise CorollaryViolated(n, "B")
    return trace
