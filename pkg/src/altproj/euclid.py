"""Exact Euclidean distances and set-valued projections onto closed sets.

Points are 1-D numpy float64 arrays.  A projector spec describes a closed
set -- sphere, closed ball, axis-aligned box, halfspace, segment, finite
point cloud, or a finite union of those -- and answers three exact queries:
membership, distance, and the full set of nearest points.

Projection is genuinely set-valued: `project` returns every minimizer whose
distance is within `tie_tol` of the optimum, and flags multivaluedness
instead of silently picking a representative.  The one deliberately fatal
case is projecting the center of a sphere, where the minimizer set is the
whole sphere: that raises `DegenerateProjection`.

All operations are pure functions of their inputs; instances are treated as
immutable after construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .serialize import render_json

#: Candidates within this distance of the optimum are reported together.
DEFAULT_TIE_TOL = 1e-9

#: Membership tests accept points within this distance of the set.
MEMBERSHIP_TOL = 1e-9

_CENTER_TOL = 1e-12
_UNIT_TOL = 1e-12

__all__ = [
    "Ball",
    "Box",
    "DEFAULT_TIE_TOL",
    "DegenerateProjection",
    "DimensionMismatch",
    "Halfspace",
    "MEMBERSHIP_TOL",
    "PointCloud",
    "ProjectionResult",
    "ProjectorSpec",
    "Segment",
    "Sphere",
    "Union",
    "as_point",
    "distance",
    "nearest_in_cloud",
    "project",
    "spec_from_dict",
    "spec_from_json",
    "spec_to_dict",
    "spec_to_json",
]


class DimensionMismatch(ValueError):
    """Query point dimension does not match the set's ambient dimension."""


class DegenerateProjection(RuntimeError):
    """The minimizer set is a continuum (e.g. a whole sphere); no point is returned."""


def as_point(coords) -> np.ndarray:
    """Validate and copy coordinates into a finite 1-D float64 vector."""
    arr = np.array(coords, dtype=np.float64, copy=True)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"a point must be a nonempty 1-D coordinate sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def _as_cloud(points) -> np.ndarray:
    arr = np.array(points, dtype=np.float64, copy=True)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"a point cloud must be a nonempty list of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point cloud coordinates must be finite")
    return arr


def _norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def _radial_candidate(center: np.ndarray, radius: float, q: np.ndarray) -> tuple[float, np.ndarray]:
    """Distance from `q` to the center, and the radial boundary point toward `q`.

    Shared by Sphere and Ball so the two produce bitwise-identical projections
    for exterior queries.
    """
    diff = q - center
    d = _norm(diff)
    return d, center + (radius / d) * diff


def _dedupe(points: list[np.ndarray], tol: float) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for p in points:
        if all(_norm(p - k) > tol for k in kept):
            kept.append(p)
    return kept


@dataclass(eq=False)
class ProjectionResult:
    """All nearest points of a set to a query.

    `margin` is the gap between the optimal distance and the best candidate
    *not* returned (the first alternative beyond `tie_tol`); +inf when every
    discrete alternative was returned or none exists.  Ties therefore show up
    in `multivalued`, not in `margin`.
    """

    candidates: list[np.ndarray]
    distance: float
    multivalued: bool
    margin: float


class ProjectorSpec:
    """A closed subset of Euclidean space supporting exact projection queries."""

    dim: int

    def _check_query(self, q) -> np.ndarray:
        p = as_point(q)
        if p.size != self.dim:
            raise DimensionMismatch(f"query has dim {p.size}, set has dim {self.dim}")
        return p

    def distance(self, q) -> float:
        """Infimum distance from `q` to the set (exact closed form)."""
        return self._distance_impl(self._check_query(q))

    def project(self, q, tie_tol: float = DEFAULT_TIE_TOL) -> ProjectionResult:
        """All nearest points of the set to `q`, gathered within `tie_tol`."""
        t = float(tie_tol)
        if not (t > 0.0):
            raise ValueError(f"tie_tol must be positive, got {tie_tol!r}")
        return self._project_impl(self._check_query(q), t)

    def contains(self, q, tol: float = MEMBERSHIP_TOL) -> bool:
        """Membership within `tol`."""
        return self.distance(q) <= tol

    # Distances to every discrete alternative the set offers (all points of a
    # cloud, single value otherwise); unions concatenate.  Used for margins.
    def _alternatives(self, q: np.ndarray) -> np.ndarray:
        return np.array([self._distance_impl(q)])

    def _distance_impl(self, q: np.ndarray) -> float:
        raise NotImplementedError

    def _project_impl(self, q: np.ndarray, tie_tol: float) -> ProjectionResult:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return spec_to_json(self)


def _single(candidate: np.ndarray, dist: float) -> ProjectionResult:
    return ProjectionResult([candidate], dist, False, math.inf)


@dataclass(eq=False)
class Sphere(ProjectorSpec):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = as_point(self.center)
        self.radius = float(self.radius)
        if not (self.radius > 0.0):
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        self.dim = self.center.size

    def _distance_impl(self, q):
        return abs(_norm(q - self.center) - self.radius)

    def _project_impl(self, q, tie_tol):
        if _norm(q - self.center) <= _CENTER_TOL:
            raise DegenerateProjection(
                "projection of the sphere center: the minimizer set is the whole sphere"
            )
        d, cand = _radial_candidate(self.center, self.radius, q)
        return _single(cand, abs(d - self.radius))

    def to_dict(self):
        return {"type": "sphere", "center": self.center.tolist(), "radius": self.radius}


@dataclass(eq=False)
class Ball(ProjectorSpec):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = as_point(self.center)
        self.radius = float(self.radius)
        if not (self.radius > 0.0):
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        self.dim = self.center.size

    def _distance_impl(self, q):
        return max(0.0, _norm(q - self.center) - self.radius)

    def _project_impl(self, q, tie_tol):
        d = _norm(q - self.center)
        if d <= self.radius:
            return _single(q.copy(), 0.0)
        d, cand = _radial_candidate(self.center, self.radius, q)
        return _single(cand, d - self.radius)

    def to_dict(self):
        return {"type": "ball", "center": self.center.tolist(), "radius": self.radius}


@dataclass(eq=False)
class Box(ProjectorSpec):
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.lo = as_point(self.lo)
        self.hi = as_point(self.hi)
        if self.lo.size != self.hi.size:
            raise ValueError("box corners must share a dimension")
        if not np.all(self.lo <= self.hi):
            raise ValueError("box must satisfy lo <= hi componentwise")
        self.dim = self.lo.size

    def _distance_impl(self, q):
        return _norm(q - np.clip(q, self.lo, self.hi))

    def _project_impl(self, q, tie_tol):
        cand = np.clip(q, self.lo, self.hi)
        return _single(cand, _norm(q - cand))

    def to_dict(self):
        return {"type": "box", "min": self.lo.tolist(), "max": self.hi.tolist()}


@dataclass(eq=False)
class Halfspace(ProjectorSpec):
    """The closed halfspace {x : normal . x <= offset}, normal of unit length."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        self.normal = as_point(self.normal)
        self.offset = float(self.offset)
        if abs(_norm(self.normal) - 1.0) > _UNIT_TOL:
            raise ValueError("halfspace normal must have unit norm (within 1e-12)")
        self.dim = self.normal.size

    def _distance_impl(self, q):
        return max(0.0, float(np.dot(self.normal, q)) - self.offset)

    def _project_impl(self, q, tie_tol):
        s = float(np.dot(self.normal, q)) - self.offset
        if s <= 0.0:
            return _single(q.copy(), 0.0)
        return _single(q - s * self.normal, s)

    def to_dict(self):
        return {"type": "halfspace", "normal": self.normal.tolist(), "offset": self.offset}


@dataclass(eq=False)
class Segment(ProjectorSpec):
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.a = as_point(self.a)
        self.b = as_point(self.b)
        if self.a.size != self.b.size:
            raise ValueError("segment endpoints must share a dimension")
        self.dim = self.a.size

    def _closest(self, q):
        ab = self.b - self.a
        den = float(np.dot(ab, ab))
        if den == 0.0:
            return self.a.copy()
        t = float(np.dot(q - self.a, ab)) / den
        t = min(1.0, max(0.0, t))
        return self.a + t * ab

    def _distance_impl(self, q):
        return _norm(q - self._closest(q))

    def _project_impl(self, q, tie_tol):
        cand = self._closest(q)
        return _single(cand, _norm(q - cand))

    def to_dict(self):
        return {"type": "segment", "a": self.a.tolist(), "b": self.b.tolist()}


@dataclass(eq=False)
class PointCloud(ProjectorSpec):
    points: np.ndarray

    def __post_init__(self):
        self.points = _as_cloud(self.points)
        self.dim = self.points.shape[1]

    def _dists(self, q):
        return np.sqrt(((self.points - q) ** 2).sum(axis=1))

    def _alternatives(self, q):
        return self._dists(q)

    def _distance_impl(self, q):
        return float(self._dists(q).min())

    def _project_impl(self, q, tie_tol):
        dists = self._dists(q)
        dmin = float(dists.min())
        mask = dists <= dmin + tie_tol
        cands = _dedupe([self.points[i].copy() for i in np.flatnonzero(mask)], tie_tol)
        rest = dists[~mask]
        margin = float(rest.min()) - dmin if rest.size else math.inf
        return ProjectionResult(cands, dmin, len(cands) > 1, margin)

    def to_dict(self):
        return {"type": "points", "coords": self.points.tolist()}


@dataclass(eq=False)
class Union(ProjectorSpec):
    members: list

    def __post_init__(self):
        if not isinstance(self.members, (list, tuple)) or len(self.members) == 0:
            raise ValueError("union needs a nonempty member list")
        self.members = list(self.members)
        dims = {m.dim for m in self.members}
        if len(dims) != 1:
            raise ValueError(f"union members must share a dimension, got {sorted(dims)}")
        self.dim = self.members[0].dim

    def _alternatives(self, q):
        return np.concatenate([m._alternatives(q) for m in self.members])

    def _distance_impl(self, q):
        return min(m._distance_impl(q) for m in self.members)

    def _project_impl(self, q, tie_tol):
        dists = [m._distance_impl(q) for m in self.members]
        dmin = min(dists)
        cands: list[np.ndarray] = []
        for m, d in zip(self.members, dists):
            if d <= dmin + tie_tol:
                cands.extend(m._project_impl(q, tie_tol).candidates)
        cands = _dedupe(cands, tie_tol)
        alts = self._alternatives(q)
        rest = alts[alts > dmin + tie_tol]
        margin = float(rest.min()) - dmin if rest.size else math.inf
        return ProjectionResult(cands, dmin, len(cands) > 1, margin)

    def to_dict(self):
        return {"type": "union", "members": [m.to_dict() for m in self.members]}


def distance(spec: ProjectorSpec, q) -> float:
    """Infimum distance from `q` to the set described by `spec`."""
    return spec.distance(q)


def project(spec: ProjectorSpec, q, tie_tol: float = DEFAULT_TIE_TOL) -> ProjectionResult:
    """Set-valued projection of `q` onto the set described by `spec`."""
    return spec.project(q, tie_tol)


def nearest_in_cloud(points, q, exclude: Optional[int] = None) -> tuple[int, float, float]:
    """Brute-force nearest point of a cloud.

    Returns (index, distance, margin) where index is the argmin with
    lowest-index tie-break and margin is the gap to the runner-up (+inf when
    no runner-up exists).  `exclude` drops one index from consideration.
    """
    pts = _as_cloud(points)
    query = as_point(q)
    if query.size != pts.shape[1]:
        raise DimensionMismatch(f"query has dim {query.size}, cloud has dim {pts.shape[1]}")
    dists = np.sqrt(((pts - query) ** 2).sum(axis=1))
    if exclude is not None:
        if not (0 <= exclude < pts.shape[0]):
            raise ValueError(f"exclude index {exclude} out of range")
        dists[exclude] = math.inf
    best = int(np.argmin(dists))
    best_d = float(dists[best])
    if not math.isfinite(best_d):
        raise ValueError("no points remain after exclusion")
    finite = np.count_nonzero(np.isfinite(dists))
    if finite >= 2:
        runner = float(np.partition(dists, 1)[1])
        margin = runner - best_d
    else:
        margin = math.inf
    return best, best_d, margin


_REQUIRED_FIELDS = {
    "sphere": ("center", "radius"),
    "ball": ("center", "radius"),
    "box": ("min", "max"),
    "halfspace": ("normal", "offset"),
    "segment": ("a", "b"),
    "points": ("coords",),
    "union": ("members",),
}


def spec_to_dict(spec: ProjectorSpec) -> dict:
    return spec.to_dict()


def spec_from_dict(data, where: str = "spec") -> ProjectorSpec:
    """Build a ProjectorSpec from its JSON-object form; errors carry field paths."""
    if not isinstance(data, dict):
        raise ValueError(f"{where}: expected an object, got {type(data).__name__}")
    kind = data.get("type")
    if kind not in _REQUIRED_FIELDS:
        raise ValueError(f"{where}.type: unknown set type {kind!r}")
    for name in _REQUIRED_FIELDS[kind]:
        if name not in data:
            raise ValueError(f"{where}.{name}: missing field for type {kind!r}")
    extra = set(data) - {"type", *_REQUIRED_FIELDS[kind]}
    if extra:
        raise ValueError(f"{where}: unknown fields {sorted(extra)} for type {kind!r}")
    try:
        if kind == "sphere":
            return Sphere(data["center"], data["radius"])
        if kind == "ball":
            return Ball(data["center"], data["radius"])
        if kind == "box":
            return Box(data["min"], data["max"])
        if kind == "halfspace":
            return Halfspace(data["normal"], data["offset"])
        if kind == "segment":
            return Segment(data["a"], data["b"])
        if kind == "points":
            return PointCloud(data["coords"])
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from exc
    members = data["members"]
    if not isinstance(members, list) or not members:
        raise ValueError(f"{where}.members: expected a nonempty list")
    built = [spec_from_dict(m, f"{where}.members[{i}]") for i, m in enumerate(members)]
    try:
        return Union(built)
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from exc


def spec_to_json(spec: ProjectorSpec) -> str:
    return render_json(spec_to_dict(spec))


def spec_from_json(text: str, where: str = "spec") -> ProjectorSpec:
    return spec_from_dict(json.loads(text), where)
