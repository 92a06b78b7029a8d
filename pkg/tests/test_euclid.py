import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altproj import euclid, sequence
from altproj.euclid import (
    Ball,
    Box,
    DegenerateProjection,
    DimensionMismatch,
    Halfspace,
    PointCloud,
    Segment,
    Sphere,
    Union,
    as_point,
    distance,
    nearest_in_cloud,
    project,
    spec_from_dict,
    spec_from_json,
    spec_to_dict,
    spec_to_json,
)

O2 = np.zeros(2)


def test_sphere_distance_radial():
    assert distance(Sphere(O2, 1.0), [2.0, 0.0]) == 1.0


def test_sphere_distance_at_spiral_start():
    # the spiral starts at (2, 0); its distance to the unit sphere is exp(-0) = 1
    assert distance(Sphere(O2, 1.0), [2.0, 0.0]) == math.exp(-0.0)


def test_union_of_point_cloud_distance():
    spec = Union([PointCloud([[0.0, 0.0], [3.0, 0.0]])])
    assert distance(spec, [1.0, 0.0]) == 1.0


def test_ball_projection_radial():
    res = project(Ball(O2, 1.0), [2.0, 0.0])
    assert len(res.candidates) == 1
    np.testing.assert_array_equal(res.candidates[0], [1.0, 0.0])
    assert res.distance == 1.0
    assert not res.multivalued
    assert res.margin == math.inf


def test_point_cloud_symmetric_tie_is_multivalued():
    res = project(PointCloud([[0.0, 0.0], [3.0, 0.0]]), [1.5, 0.0])
    assert res.multivalued
    assert len(res.candidates) == 2
    np.testing.assert_array_equal(res.candidates[0], [0.0, 0.0])
    np.testing.assert_array_equal(res.candidates[1], [3.0, 0.0])


def test_union_sphere_and_tail_cloud_projects_to_successor():
    report = sequence.generate(80)
    pts = report.points()
    spec = Union([Sphere(O2, 1.0), PointCloud(pts[1:])])
    res = project(spec, pts[0])
    assert len(res.candidates) == 1
    np.testing.assert_array_equal(res.candidates[0], pts[1])
    assert res.margin > 0.0


def test_ball_inside_point_is_fixed():
    res = project(Ball(O2, 1.0), [0.25, 0.25])
    np.testing.assert_array_equal(res.candidates[0], [0.25, 0.25])
    assert res.distance == 0.0


def test_box_projection_clamps():
    box = Box([0.0, 0.0], [1.0, 1.0])
    res = project(box, [3.0, 0.5])
    np.testing.assert_array_equal(res.candidates[0], [1.0, 0.5])
    assert res.distance == 2.0


def test_halfspace_projection():
    # the set {x <= 1} from the right
    hs = Halfspace([1.0, 0.0], 1.0)
    res = project(hs, [3.0, 0.7])
    np.testing.assert_array_equal(res.candidates[0], [1.0, 0.7])
    assert res.distance == 2.0
    assert distance(hs, [0.0, 0.0]) == 0.0


def test_segment_projection_endpoints_and_interior():
    seg = Segment([0.0, 0.0], [1.0, 0.0])
    np.testing.assert_array_equal(project(seg, [2.0, 0.0]).candidates[0], [1.0, 0.0])
    np.testing.assert_array_equal(project(seg, [-1.0, 0.0]).candidates[0], [0.0, 0.0])
    np.testing.assert_array_equal(project(seg, [0.5, 1.0]).candidates[0], [0.5, 0.0])


def test_sphere_center_projection_is_degenerate():
    with pytest.raises(DegenerateProjection):
        project(Sphere(O2, 1.0), [0.0, 0.0])
    with pytest.raises(DegenerateProjection):
        project(Sphere(O2, 1.0), [1e-13, 0.0])


def test_ball_center_projection_is_fine():
    res = project(Ball(O2, 1.0), [0.0, 0.0])
    np.testing.assert_array_equal(res.candidates[0], [0.0, 0.0])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        distance(Sphere(O2, 1.0), [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatch):
        project(Box([0.0], [1.0]), [0.5, 0.5])


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        Sphere(O2, 0.0)
    with pytest.raises(ValueError):
        Box([1.0, 0.0], [0.0, 1.0])
    with pytest.raises(ValueError):
        Halfspace([2.0, 0.0], 1.0)
    with pytest.raises(ValueError):
        PointCloud([])
    with pytest.raises(ValueError):
        Union([])
    with pytest.raises(ValueError):
        Union([Sphere(O2, 1.0), Sphere(np.zeros(3), 1.0)])
    with pytest.raises(ValueError):
        as_point([1.0, math.nan])
    with pytest.raises(ValueError):
        project(Sphere(O2, 1.0), [2.0, 0.0], tie_tol=0.0)


def test_nearest_in_cloud_basic():
    idx, dist, margin = nearest_in_cloud([[0.0, 0.0], [3.0, 0.0]], [1.0, 0.0])
    assert (idx, dist, margin) == (0, 1.0, 1.0)


def test_nearest_in_cloud_tie_breaks_to_lowest_index():
    idx, dist, margin = nearest_in_cloud([[0.0, 0.0], [3.0, 0.0]], [1.5, 0.0])
    assert idx == 0
    assert dist == 1.5
    assert margin == 0.0


def test_nearest_in_cloud_exclusion_gives_successor(report_300):
    pts = report_300.points()[:101]
    idx, dist, margin = nearest_in_cloud(pts, pts[5], exclude=5)
    assert idx == 6
    assert margin > 0.0


def test_nearest_in_cloud_single_point():
    idx, dist, margin = nearest_in_cloud([[1.0, 1.0]], [4.0, 5.0])
    assert idx == 0
    assert dist == 5.0
    assert margin == math.inf


def test_nearest_in_cloud_empty_after_exclusion():
    with pytest.raises(ValueError):
        nearest_in_cloud([[1.0, 1.0]], [0.0, 0.0], exclude=0)


def _random_primitive(rng, dim):
    kind = rng.integers(0, 6)
    center = rng.normal(size=dim)
    if kind == 0:
        return Sphere(center, float(rng.uniform(0.2, 3.0)))
    if kind == 1:
        return Ball(center, float(rng.uniform(0.2, 3.0)))
    if kind == 2:
        lo = center - rng.uniform(0.1, 2.0, dim)
        return Box(lo, lo + rng.uniform(0.1, 3.0, dim))
    if kind == 3:
        v = rng.normal(size=dim)
        return Halfspace(v / np.linalg.norm(v), float(rng.uniform(-2.0, 2.0)))
    if kind == 4:
        return Segment(center, center + rng.normal(size=dim))
    return PointCloud(rng.normal(size=(int(rng.integers(1, 8)), dim)))


def test_fuzz_projection_invariants():
    # 1000 random (set, query) pairs across dims 1..4: reported distance is
    # the candidate distance, candidates are members of the set, and the
    # multivalued flag matches the candidate count.
    rng = np.random.default_rng(415926)
    for case in range(1000):
        dim = int(rng.integers(1, 5))
        if case % 5 == 0:
            spec = Union([_random_primitive(rng, dim) for _ in range(int(rng.integers(1, 4)))])
        else:
            spec = _random_primitive(rng, dim)
        q = rng.normal(size=dim) * 3.0
        if isinstance(spec, Sphere) and np.linalg.norm(q - spec.center) < 1e-6:
            continue
        d = distance(spec, q)
        res = project(spec, q)
        assert abs(res.distance - d) <= 1e-9
        assert res.multivalued == (len(res.candidates) > 1)
        assert res.margin >= 0.0
        for cand in res.candidates:
            assert abs(np.linalg.norm(q - cand) - d) <= 1e-9
            assert spec.distance(cand) <= 1e-9


_CONVEX = [
    Ball(O2, 1.5),
    Box([-1.0, 0.0], [1.0, 2.0]),
    Halfspace([0.0, 1.0], 0.5),
    Segment([-1.0, -1.0], [2.0, 0.5]),
]


@given(st.floats(-8, 8), st.floats(-8, 8))
@settings(max_examples=150)
def test_idempotence_on_convex_primitives(x, y):
    for spec in _CONVEX:
        cand = project(spec, [x, y]).candidates[0]
        again = project(spec, cand)
        assert again.distance <= 1e-9
        assert np.linalg.norm(again.candidates[0] - cand) <= 1e-9


@given(st.floats(-8, 8), st.floats(-8, 8), st.floats(-8, 8), st.floats(-8, 8))
@settings(max_examples=150)
def test_nonexpansiveness_on_convex_primitives(px, py, qx, qy):
    p = np.array([px, py])
    q = np.array([qx, qy])
    for spec in _CONVEX:
        pp = project(spec, p).candidates[0]
        pq = project(spec, q).candidates[0]
        assert np.linalg.norm(pp - pq) <= np.linalg.norm(p - q) + 1e-9


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(-10, 10), st.floats(-10, 10))
@settings(max_examples=300)
def test_law_of_cosines_and_radial_bound(r, s, alpha, beta):
    p = np.array([r * math.cos(alpha), r * math.sin(alpha)])
    q = np.array([s * math.cos(beta), s * math.sin(beta)])
    d2 = float(((p - q) ** 2).sum())
    expected = r * r + s * s - 2.0 * r * s * math.cos(alpha - beta)
    assert abs(d2 - expected) <= 1e-10
    d = math.sqrt(max(d2, 0.0))
    assert r - d <= s + 1e-9
    assert s <= r + d + 1e-9


def test_union_margin_across_members():
    spec = Union([PointCloud([[0.0, 0.0]]), PointCloud([[3.0, 0.0]])])
    res = project(spec, [1.0, 0.0])
    np.testing.assert_array_equal(res.candidates[0], [0.0, 0.0])
    assert res.margin == pytest.approx(1.0)


def test_point_cloud_dedupes_coincident_points():
    res = project(PointCloud([[1.0, 0.0], [1.0, 0.0], [2.0, 0.0]]), [0.0, 0.0])
    assert len(res.candidates) == 1
    assert not res.multivalued


def test_json_round_trip_nested():
    spec = Union([
        Sphere([0.0, 0.0], 1.0),
        PointCloud([[2.0, 0.0], [0.1, -0.25]]),
        Box([-1.0, -1.0], [1.0, 1.0]),
        Halfspace([0.0, 1.0], 0.125),
        Segment([0.0, 0.0], [1.0, 1.0]),
        Ball([0.5, 0.5], 2.0),
    ])
    text = spec_to_json(spec)
    back = spec_from_json(text)
    assert spec_to_dict(back) == spec_to_dict(spec)
    # 17 significant digits round-trip binary64 exactly
    assert json.loads(text)["members"][3]["offset"] == 0.125


def test_json_renders_17_significant_digits():
    assert "0.10000000000000001" in spec_to_json(Sphere([0.1, 0.0], 1.0))


def test_spec_from_dict_errors_carry_paths():
    with pytest.raises(ValueError, match=r"spec\.type"):
        spec_from_dict({"type": "conic"})
    with pytest.raises(ValueError, match=r"spec\.radius"):
        spec_from_dict({"type": "sphere", "center": [0, 0]})
    with pytest.raises(ValueError, match=r"members\[1\]"):
        spec_from_dict({"type": "union", "members": [
            {"type": "sphere", "center": [0, 0], "radius": 1.0},
            {"type": "sphere", "center": [0, 0]},
        ]})
    with pytest.raises(ValueError, match="unknown fields"):
        spec_from_dict({"type": "ball", "center": [0, 0], "radius": 1.0, "extra": 1})
