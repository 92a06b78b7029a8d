"""Empirical harness: alternating projections over finite unions of convex sets.

For finite unions, bounded iterates with vanishing gaps force convergence of
both sequences to a single common point of the intersection.  The harness
generates random scenarios whose members all contain a planted common point
(so the intersection is nonempty by construction), runs the driver, checks
the hypotheses empirically -- boundedness and gap decay -- and only then
asserts the conclusion.  Runs whose gaps fail to vanish within budget are
reported as hypotheses-not-met, never as failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import map_driver
from .euclid import Ball, Box, Halfspace, PointCloud, ProjectorSpec, Union
from .map_driver import VERDICT_CONVERGED, MapConfig
from .serialize import render_json

#: Default convergence / membership tolerance.
DEFAULT_TOL = 1e-8

OUTCOME_PASS = "pass"
OUTCOME_FAIL = "fail"
OUTCOME_HYPOTHESES_NOT_MET = "hypotheses_not_met"

__all__ = [
    "ConvergenceVerdict",
    "DEFAULT_TOL",
    "OUTCOME_FAIL",
    "OUTCOME_HYPOTHESES_NOT_MET",
    "OUTCOME_PASS",
    "UnionScenario",
    "check_theorem",
    "classify",
    "generate_scenario",
    "run_batch",
    "scenario_config",
    "verdict_to_obj",
]


@dataclass(eq=False)
class UnionScenario:
    a_members: list
    b_members: list
    start: np.ndarray
    seed: int
    max_iter: int
    common_point: np.ndarray

    def __post_init__(self):
        for members in (self.a_members, self.b_members):
            if not members:
                raise ValueError("each side needs at least one convex member")
            for m in members:
                _require_convex(m)


def _require_convex(member: ProjectorSpec) -> None:
    if isinstance(member, (Ball, Box, Halfspace)):
        return
    if isinstance(member, PointCloud) and member.points.shape[0] == 1:
        return
    raise ValueError(f"member {type(member).__name__} is not an allowed convex primitive")


def _random_member(rng: np.random.Generator, c: np.ndarray) -> ProjectorSpec:
    """A random convex set guaranteed to contain `c` strictly (except singletons)."""
    dim = c.size
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return Box(c - rng.uniform(0.1, 1.5, dim), c + rng.uniform(0.1, 1.5, dim))
    if kind == 1:
        radius = float(rng.uniform(0.4, 2.0))
        direction = rng.normal(size=dim)
        direction /= np.linalg.norm(direction)
        shift = float(rng.uniform(0.0, 0.8)) * radius
        return Ball(c + shift * direction, radius)
    normal = rng.normal(size=dim)
    normal /= np.linalg.norm(normal)
    slack = float(rng.uniform(0.05, 1.0))
    return Halfspace(normal, float(np.dot(normal, c)) + slack)


def generate_scenario(seed: int, dim: int = 2, members_per_side: int = 3,
                      max_iter: int = 4000) -> UnionScenario:
    """Deterministic random scenario with a planted common point.

    Member counts are drawn in 1..members_per_side; the start lies within a
    ball of radius 10 around the planted point.
    """
    if not (2 <= dim <= 4):
        raise ValueError(f"dim must be in 2..4, got {dim}")
    if not (1 <= members_per_side <= 4):
        raise ValueError(f"members_per_side must be in 1..4, got {members_per_side}")
    rng = np.random.default_rng(seed)
    c = rng.uniform(-1.0, 1.0, dim)
    k_a = int(rng.integers(1, members_per_side + 1))
    k_b = int(rng.integers(1, members_per_side + 1))
    a_members = [_random_member(rng, c) for _ in range(k_a)]
    b_members = [_random_member(rng, c) for _ in range(k_b)]
    direction = rng.normal(size=dim)
    direction /= np.linalg.norm(direction)
    start = c + float(rng.uniform(0.0, 10.0)) * direction
    return UnionScenario(a_members, b_members, start, int(seed), int(max_iter), c)


@dataclass(eq=False)
class ConvergenceVerdict:
    converged: bool
    limit: Optional[np.ndarray]
    limit_in_intersection: bool
    gaps_vanished: bool
    bounded: bool
    iterations_used: int


def scenario_config(scenario: UnionScenario, tol: float = DEFAULT_TOL) -> MapConfig:
    """The driver config a scenario runs under (stop rule at tol/100)."""
    return MapConfig(_as_set(scenario.a_members), _as_set(scenario.b_members),
                     scenario.start, max_iter=scenario.max_iter,
                     stop_step=tol * 1e-2)


def check_theorem(scenario: UnionScenario, tol: float = DEFAULT_TOL) -> ConvergenceVerdict:
    """Run the scenario and report hypothesis and conclusion checks.

    Hypotheses: all iterates bounded by 10x the starting scale, and the final
    gaps below `tol`.  Conclusion (only meaningful when the hypotheses hold):
    the last iterates of both sequences agree within `tol` on a common limit
    that lies within `tol` of at least one member on each side.
    """
    trace = map_driver.run(scenario_config(scenario, tol))

    scale = max(1.0, float(np.linalg.norm(scenario.start)))
    worst = max(max(float(np.linalg.norm(p)) for p in trace.a),
                max(float(np.linalg.norm(p)) for p in trace.b))
    bounded = worst <= 10.0 * scale

    gaps_vanished = bool(trace.step_ab and trace.step_ab[-1] < tol
                         and (trace.step_ba[-1] < tol if trace.step_ba else True))

    converged = False
    limit = None
    in_intersection = False
    if trace.verdict.kind == VERDICT_CONVERGED:
        limit = trace.verdict.limit
        # the stop rule bounds exactly this window: b[-2] -> a[-1] -> b[-1]
        tail = [trace.a[-1], trace.b[-1]]
        if len(trace.b) >= 2:
            tail.append(trace.b[-2])
        converged = all(float(np.linalg.norm(p - limit)) <= tol for p in tail)
    if limit is not None:
        in_intersection = (
            min(m.distance(limit) for m in scenario.a_members) <= tol
            and min(m.distance(limit) for m in scenario.b_members) <= tol
        )
    return ConvergenceVerdict(
        converged=converged,
        limit=limit,
        limit_in_intersection=in_intersection,
        gaps_vanished=gaps_vanished,
        bounded=bounded,
        iterations_used=trace.verdict.iterations_used,
    )


def _as_set(members: list) -> ProjectorSpec:
    return members[0] if len(members) == 1 else Union(list(members))


def classify(verdict: ConvergenceVerdict) -> str:
    """pass / fail / hypotheses_not_met, gating the conclusion on the hypotheses."""
    if not (verdict.gaps_vanished and verdict.bounded):
        return OUTCOME_HYPOTHESES_NOT_MET
    if verdict.converged and verdict.limit_in_intersection:
        return OUTCOME_PASS
    return OUTCOME_FAIL


def verdict_to_obj(seed: int, verdict: ConvergenceVerdict) -> dict:
    return {
        "seed": seed,
        "outcome": classify(verdict),
        "converged": verdict.converged,
        "limit": None if verdict.limit is None else verdict.limit.tolist(),
        "limit_in_intersection": verdict.limit_in_intersection,
        "gaps_vanished": verdict.gaps_vanished,
        "bounded": verdict.bounded,
        "iterations_used": verdict.iterations_used,
    }


def run_batch(seeds, dim: int = 2, members_per_side: int = 3,
              tol: float = DEFAULT_TOL, stream=None) -> dict:
    """Run scenarios for every seed (in order), optionally writing JSON lines.

    Returns outcome counts: {"pass": _, "fail": _, "hypotheses_not_met": _}.
    """
    counts = {OUTCOME_PASS: 0, OUTCOME_FAIL: 0, OUTCOME_HYPOTHESES_NOT_MET: 0}
    for seed in seeds:
        verdict = check_theorem(generate_scenario(seed, dim, members_per_side), tol)
        counts[classify(verdict)] += 1
        if stream is not None:
            stream.write(render_json(verdict_to_obj(seed, verdict), compact=True) + "\n")
    return counts
