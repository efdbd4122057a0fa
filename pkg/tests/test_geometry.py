import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from santalo import bodies
from santalo.functionals import evaluate
from santalo.geometry import (
    Arc,
    ArcGon,
    DegeneratePointSetError,
    InvalidBodyError,
    ToleranceConfig,
    area,
    convex_hull,
    discretize,
    disk,
    perimeter,
    polygon,
    segment,
    steiner_symmetrize,
    support,
    validate_arcgon,
    width_in_direction,
)

from conftest import polygons

SQUARE = polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def brute_hull(points):
    """O(n^3): a pair is a hull edge when nothing lies strictly to its right."""
    pts = [tuple(p) for p in points]
    verts = set()
    for i, a in enumerate(pts):
        for j, b in enumerate(pts):
            if i == j:
                continue
            crosses = [(b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) for c in pts]
            if min(crosses) >= -1e-12:
                verts.update([a, b])
    # drop points in the relative interior of hull edges
    out = set()
    hull = convex_hull(pts)
    for v in verts:
        if v in hull.vertices:
            out.add(v)
    return verts, out


def test_validate_square_and_disk():
    assert validate_arcgon(SQUARE).ok
    assert validate_arcgon(disk()).ok


def test_validate_bowtie_names_index():
    bow = ArcGon([(0, 0), (1, 0), (0, 1), (1, 1)])
    rep = validate_arcgon(bow)
    assert not rep.ok
    assert any("non-convex turn at index 2" in v for v in rep.violations)


def test_validate_rejects_inward_arc():
    # arc centred outside the body bulges inward
    body = ArcGon([(1, 0), (0, 1), (-1, 0)], [Arc((1, 1), 1.0), None, None])
    assert not validate_arcgon(body).ok


def test_convex_hull_drops_interior_point():
    h = convex_hull([(0, 0), (1, 0), (0, 1), (0.2, 0.2)])
    assert set(h.vertices) == {(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)}
    assert len(h.vertices) == 3


def test_convex_hull_collinear_is_segment():
    h = convex_hull([(0, 0), (1, 0), (2, 0)])
    assert h.is_segment
    assert set(h.vertices) == {(0.0, 0.0), (2.0, 0.0)}


def test_convex_hull_degenerate():
    with pytest.raises(DegeneratePointSetError, match="degenerate point set"):
        convex_hull([(1, 1), (1, 1)])


def test_convex_hull_matches_brute_force():
    rng = np.random.default_rng(7)
    rad = np.sqrt(rng.uniform(size=100))
    ang = rng.uniform(0, 2 * math.pi, 100)
    pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    h = convex_hull(pts)
    verts, _ = brute_hull(pts)
    assert set(h.vertices) == verts


@given(st.integers(3, 60), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_convex_hull_idempotent_and_order_invariant(n, seed, perm_seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, 2))
    h = convex_hull(pts)
    assert convex_hull(h.vertices) == h
    shuffled = pts[np.random.default_rng(perm_seed).permutation(n)]
    assert convex_hull(shuffled) == h


def test_support_examples():
    v, pt = support(disk(), (1.0, 0.0))
    assert v == pytest.approx(1.0, abs=1e-15)
    assert pt == pytest.approx((1.0, 0.0))
    v, pt = support(SQUARE, (0.0, 1.0))
    assert v == pytest.approx(1.0)
    assert pt[1] == pytest.approx(1.0)


def test_reuleaux_constant_width_dense():
    rt = bodies.construct(bodies.BodySpec.named("reuleaux_triangle", width=2.0))
    for t in np.linspace(0, math.pi, 720, endpoint=False):
        assert width_in_direction(rt, (math.cos(t), math.sin(t))) == pytest.approx(2.0, abs=1e-12)


def test_width_in_direction_examples():
    seg = segment((-1, 0), (1, 0))
    assert width_in_direction(seg, (0.0, 1.0)) == pytest.approx(0.0, abs=1e-15)
    assert width_in_direction(seg, (1.0, 0.0)) == pytest.approx(2.0)
    tri = bodies.construct(bodies.BodySpec.named("equilateral_triangle", R=1.0))
    # every edge normal of the equilateral triangle gives the minimal width 3r = 3/2
    v = np.array(tri.vertices)
    for i in range(3):
        e = v[(i + 1) % 3] - v[i]
        n = (e[1] / np.hypot(*e), -e[0] / np.hypot(*e))
        assert width_in_direction(tri, n) == pytest.approx(1.5, abs=1e-12)


@given(polygons(), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
@settings(max_examples=60, deadline=None)
def test_support_sublinear(body, a, b):
    u, v = np.array([math.cos(a), math.sin(a)]), np.array([math.cos(b), math.sin(b)])
    s = u + v
    if np.linalg.norm(s) < 1e-6:
        return
    w = s / np.linalg.norm(s)
    hw = support(body, tuple(w))[0]
    assert hw * np.linalg.norm(s) <= support(body, tuple(u))[0] + support(body, tuple(v))[0] + 1e-12


def test_discretize_disk_perimeter_window():
    d = discretize(disk(), 1e-6)
    assert 2 * math.pi - 1e-4 <= perimeter(d) <= 2 * math.pi
    assert area(d) <= math.pi


def test_discretize_polygon_unchanged():
    assert discretize(SQUARE, 1e-3) == SQUARE


def test_discretize_lens_error_shrinks_linearly_in_sagitta():
    lens = bodies.construct(bodies.BodySpec.named("lens", D=2.0, phi=1.0))
    p = perimeter(lens)
    errs = [p - perimeter(discretize(lens, s)) for s in (1e-4, 5e-5, 2.5e-5)]
    assert all(e > 0 for e in errs)
    # chord error and sagitta both scale with the squared sub-angle
    assert 1.6 < errs[0] / errs[1] < 2.5
    assert 3.0 < errs[0] / errs[2] < 5.5


@pytest.mark.parametrize("name,params", [("reuleaux_triangle", {"width": 2.0}), ("slab_of_ball", {"w": 1.0, "R": 1.0})])
def test_discretize_inscribed(name, params):
    body = bodies.construct(bodies.BodySpec.named(name, **params))
    d = discretize(body, 1e-4)
    for t in np.linspace(0, 2 * math.pi, 4096, endpoint=False):
        u = (math.cos(t), math.sin(t))
        assert support(d, u)[0] <= support(body, u)[0] + 1e-12


def test_steiner_hand_example():
    tri = polygon([(0, 0), (2, 0), (2, 1)])
    s = steiner_symmetrize(tri, (1.0, 0.0))
    assert sorted(s.vertices) == pytest.approx(sorted([(0.0, 0.0), (2.0, 0.5), (2.0, -0.5)]))


def test_steiner_fixed_point():
    sq = polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    s = steiner_symmetrize(sq, (1.0, 0.0))
    assert set(s.vertices) == set(sq.vertices)


def test_steiner_requires_polygon():
    with pytest.raises(InvalidBodyError, match="polygon required"):
        steiner_symmetrize(disk(), (1.0, 0.0))


@given(polygons(), st.sampled_from([(1.0, 0.0), (0.0, 1.0)]))
@settings(max_examples=80, deadline=None)
def test_steiner_monotonicity(body, axis):
    s = steiner_symmetrize(body, axis)
    assert validate_arcgon(s).ok
    a, b = evaluate(body), evaluate(s)
    assert abs(b.A - a.A) <= 1e-9 * a.A
    assert b.p <= a.p + 1e-9
    assert b.D <= a.D + 1e-9
    assert b.R <= a.R + 1e-9
    assert b.r >= a.r - 1e-9


@given(polygons(), st.sampled_from([(1.0, 0.0), (0.0, 1.0)]), st.floats(-5, 5))
@settings(max_examples=40, deadline=None)
def test_steiner_chords_centered(body, axis, t):
    s = steiner_symmetrize(body, axis)
    ax = np.array(axis)
    nrm = np.array([-ax[1], ax[0]])
    ys = [np.dot(v, nrm) for v in s.vertices]
    assert max(ys) == pytest.approx(-min(ys), abs=1e-12)


def test_arcgon_json_round_trip():
    rt = bodies.construct(bodies.BodySpec.named("reuleaux_triangle", width=2.0))
    assert ArcGon.from_dict(rt.to_dict()) == rt
    assert ArcGon.from_dict(disk(radius=2.0).to_dict()).is_disk


def test_tolerance_defaults():
    t = ToleranceConfig()
    assert (t.abs_tol, t.rel_tol, t.max_sagitta, t.direction_samples) == (1e-9, 1e-9, 1e-6, 4096)
