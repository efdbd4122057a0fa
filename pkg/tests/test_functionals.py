import math

import numpy as np
import pytest
from hypothesis import given, settings

from santalo import bodies
from santalo.functionals import (
    FIELDS,
    FunctionalVector,
    check_invariants,
    circumradius,
    diameter,
    evaluate,
    evaluate_all,
    inradius,
    width,
)
from santalo.geometry import area, contains_disk, discretize, disk, perimeter, polygon, segment, support

from conftest import polygons

SQ3 = math.sqrt(3)


def named(name, **kw):
    return bodies.BodySpec.named(name, **kw)


def build(name, **kw):
    return bodies.construct(named(name, **kw))


def test_area_examples():
    assert area(disk()) == pytest.approx(math.pi, rel=1e-14)
    assert area(polygon([(0, 0), (1, 0), (1, 1), (0, 1)])) == pytest.approx(1.0)
    # exact value of the Reuleaux triangle of width 2
    assert area(build("reuleaux_triangle", width=2.0)) == pytest.approx(2 * (math.pi - SQ3), abs=1e-12)


def test_perimeter_examples():
    assert perimeter(disk()) == pytest.approx(2 * math.pi, rel=1e-14)
    assert perimeter(build("reuleaux_triangle", width=2.0)) == pytest.approx(2 * math.pi, abs=1e-12)
    st = build("stadium_hull", r=0.5, D=2.0)
    expected = 4 * (0.5 * (math.pi / 2 - math.pi / 3) + SQ3 / 2)
    assert expected == pytest.approx(math.pi / 3 + 2 * SQ3, abs=1e-14)
    assert perimeter(st) == pytest.approx(expected, abs=1e-12)
    assert perimeter(discretize(st, 1e-8)) == pytest.approx(expected, abs=1e-6)


def test_diameter_examples():
    assert diameter(segment((-1, 0), (1, 0)))[0] == pytest.approx(2.0)
    assert diameter(build("equilateral_triangle", R=1.0))[0] == pytest.approx(SQ3, abs=1e-12)
    # intersection of two unit disks at centre distance 1
    lens = bodies.construct(named("lens", D=SQ3, phi=math.pi / 3))
    d, a, b = diameter(lens)
    assert d == pytest.approx(SQ3, abs=1e-12)
    pts = np.array(discretize(lens, 1e-7).vertices)
    brute = max(np.linalg.norm(p - q) for p in pts for q in pts[::7])
    assert d >= brute - 1e-12


def test_width_examples():
    assert width(segment((-1, 0), (1, 0)))[0] == pytest.approx(0.0, abs=1e-15)
    assert width(build("reuleaux_triangle", width=2.0))[0] == pytest.approx(2.0, abs=1e-12)
    w, u = width(build("slab_of_ball", w=1.0, R=1.0))
    assert w == pytest.approx(1.0, abs=1e-12)
    assert abs(u[1]) == pytest.approx(1.0, abs=1e-9)


def test_circumradius_examples():
    R, c, cert, err = circumradius(disk())
    assert R == pytest.approx(1.0) and np.allclose(c, 0.0, atol=1e-12)
    assert len(cert.points) >= 2 and cert.hull_contains_center
    R, c, cert, _ = circumradius(build("equilateral_triangle", R=1.0))
    assert R == pytest.approx(1.0, abs=1e-12)
    assert len(cert.points) == 3 and cert.hull_contains_center
    R, c, cert, _ = circumradius(build("stadium_hull", r=0.4, D=2.0))
    assert R == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(c, 0.0, atol=1e-9)
    assert sorted(round(p[0], 9) for p in cert.points) == [-1.0, 1.0]


def test_inradius_examples():
    assert inradius(disk())[0] == pytest.approx(1.0, abs=1e-9)
    assert inradius(build("equilateral_triangle", R=1.0))[0] == pytest.approx(0.5, abs=1e-12)
    assert inradius(build("reuleaux_triangle", width=2.0))[0] == pytest.approx(2 - 2 / SQ3, abs=1e-9)
    r, c, normals, _ = inradius(segment((0, 0), (2, 0)))
    assert r == 0 and c == pytest.approx((1.0, 0.0)) and normals == []


@pytest.mark.parametrize(
    "spec,expected",
    [
        (named("ball", rho=1.0), (math.pi, 2 * math.pi, 1, 1, 2, 2)),
        (named("equilateral_triangle", r=1.0), (3 * SQ3, 6 * SQ3, 1, 2, 2 * SQ3, 3)),
    ],
)
def test_evaluate_all_named(spec, expected):
    fv = evaluate_all(spec)
    assert [fv.A, fv.p, fv.r, fv.R, fv.D, fv.w] == pytest.approx(list(expected), abs=1e-12)


def test_evaluate_all_slab():
    fv = evaluate_all(named("slab_of_ball", w=1.0, R=1.0))
    assert fv.A == pytest.approx(math.pi / 3 + SQ3 / 2, abs=1e-12)
    assert fv.A == pytest.approx(1.91322, abs=1e-5)
    assert fv.p == pytest.approx(2 * (math.pi / 3 + SQ3), abs=1e-12)


def test_segment_is_degenerate():
    fv = evaluate(segment((-1, 0), (1, 0)))
    assert fv.degenerate
    assert (fv.A, fv.r, fv.w) == (0.0, 0.0, 0.0)
    assert fv.D == pytest.approx(2.0) and fv.R == pytest.approx(1.0) and fv.p == pytest.approx(4.0)


@given(polygons())
@settings(max_examples=200, deadline=None)
def test_classical_invariants_random(body):
    fv = evaluate(body)
    assert check_invariants(fv) == []


@given(polygons(max_n=25))
@settings(max_examples=100, deadline=None)
def test_diameter_width_brute_force(body):
    fv = evaluate(body)
    v = np.array(body.vertices)
    d = max(np.linalg.norm(a - b) for a in v for b in v)
    # minimal width of a polygon is attained at an edge normal
    ws = []
    for i in range(len(v)):
        e = v[(i + 1) % len(v)] - v[i]
        n = np.array([e[1], -e[0]]) / np.linalg.norm(e)
        proj = v @ n
        ws.append(proj.max() - proj.min())
    assert fv.D == pytest.approx(d, abs=1e-7)
    assert fv.w == pytest.approx(min(ws), abs=1e-7)


@given(polygons())
@settings(max_examples=60, deadline=None)
def test_incircle_contained_and_tight(body):
    fv = evaluate(body)
    assert contains_disk(body, fv.incenter, fv.r - fv.err["r"])
    v = np.array(body.vertices)
    dists = []
    for i in range(len(v)):
        e = v[(i + 1) % len(v)] - v[i]
        n = np.array([e[1], -e[0]]) / np.linalg.norm(e)
        dists.append(np.dot(v[i] - np.array(fv.incenter), n))
    # every edge clears the incircle and some edge blocks a disk grown by 10 abs_tol
    assert min(dists) >= fv.r - fv.err["r"] - 1e-12
    assert min(dists) < fv.r + 10 * 1e-9


@given(polygons())
@settings(max_examples=60, deadline=None)
def test_circumcircle_contains_body(body):
    R, c, cert, err = circumradius(body)
    d = np.linalg.norm(np.array(body.vertices) - np.array(c), axis=1)
    assert d.max() <= R + err + 1e-12
    assert 2 <= len(cert.points) <= 3 and cert.hull_contains_center


@pytest.mark.parametrize("k", [3, 5, 7, 9])
def test_constant_width_barbier(k):
    fv = evaluate(bodies.construct(named("reuleaux_polygon", k=k, width=1.5)))
    assert abs(fv.p - math.pi * fv.D) <= 1e-9
    assert abs(fv.w - fv.D) <= 1e-9


def test_vector_json_round_trip():
    fv = evaluate(build("reuleaux_triangle", width=2.0))
    back = FunctionalVector.from_dict(fv.to_dict())
    assert back.values() == fv.values() and back.err == fv.err


def test_scaled_homogeneity():
    fv = evaluate(build("stadium_hull", r=0.3, D=2.0))
    big = evaluate(bodies.construct(named("stadium_hull", r=0.9, D=6.0)))
    sc = fv.scaled(3.0)
    for k in FIELDS:
        assert getattr(sc, k) == pytest.approx(getattr(big, k), rel=1e-12)
