import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from santalo import bodies
from santalo.bodies import BodySpec
from santalo.functionals import FunctionalVector, evaluate, evaluate_all
from santalo.geometry import polygon, support
from santalo.inequalities import (
    KubotaDomainError,
    catalog,
    certify_sharpness,
    check_all,
    incircle_support_triangle,
    record,
    slack,
    solve_kubota_phi,
    violations,
)

from conftest import polygons

SQ3 = math.sqrt(3)
IDS = [
    "isoperimetric", "pal", "blaschke_lebesgue", "area_r_ball", "area_R_ball", "pD_lower", "pD_upper",
    "p_r_lower", "pR_lower", "pR_upper", "pw", "LW_pRr", "UB_pDw_2", "jung", "steinhagen_lower",
    "steinhagen_upper", "w_2R", "cw_Rr", "concentricity_lower", "concentricity_upper", "steinhagen_cw",
    "ApDKubota", "ApDKubota2", "ApDKubota3", "pDrHenk", "LB_prD", "UB_pDr_2", "pRw_NEW", "LB_pRw",
    "ARw_old_lower", "ARw_old_upper", "ARw_NEW_UPPER", "ARw_LOWER", "Arw_nonsharp_1", "Arw_nonsharp_2",
    "prw_nonsharp", "Arw_upper", "prw_upper", "Arw_lower", "prw_lower",
]  # fmt: skip


def fv_of(name, **kw):
    return evaluate_all(BodySpec.named(name, **kw))


def test_catalog_ids_fixed():
    assert [r.id for r in catalog()] == IDS
    assert len(catalog()) == 40


def test_catalog_anchors():
    assert "Jung" in record("jung").anchor
    assert record("prw_lower").anchor
    with pytest.raises(KeyError):
        record("bogus")


def test_slack_examples():
    assert slack("isoperimetric", fv_of("ball", rho=1.0)).slack == pytest.approx(0.0, abs=1e-12)
    sq = evaluate(polygon([(0, 0), (1, 0), (1, 1), (0, 1)]))
    assert slack("pal", sq).slack == pytest.approx(SQ3 - 1, abs=1e-12)
    t = fv_of("equilateral_triangle", r=1.0)
    assert (t.w, t.A) == pytest.approx((3.0, 3 * SQ3))
    assert abs(slack("Arw_lower", t).slack) <= 1e-9


def test_kubota2_condition():
    ball = fv_of("ball", rho=1.0)
    assert not slack("ApDKubota2", ball).applicable
    assert slack("ApDKubota2", fv_of("equilateral_triangle", R=1.0)).applicable


def test_solve_kubota_phi():
    phi, deg = solve_kubota_phi(2 * math.pi, 2.0)
    assert not deg and abs(phi - math.pi / 2) <= 1e-12
    assert solve_kubota_phi(4.0, 2.0) == (0.0, True)
    phi, deg = solve_kubota_phi(3.0, 1.0)
    f = lambda x: 2 * x - 3 * math.sin(x)  # noqa: E731
    assert f(phi - 2**-40) * f(phi + 2**-40) < 0
    with pytest.raises(KubotaDomainError):
        solve_kubota_phi(3.5, 1.0)
    with pytest.raises(KubotaDomainError):
        solve_kubota_phi(1.5, 1.0)


def test_check_all_ball_equalities():
    reps = check_all(fv_of("ball", rho=1.0))
    assert not violations(reps)
    eq = {r.id for r in reps if r.applicable and r.is_equality}
    for rid in ("isoperimetric", "pD_upper", "pw", "steinhagen_lower", "w_2R", "concentricity_lower", "concentricity_upper"):
        assert rid in eq


def test_check_all_reuleaux_equalities():
    reps = {r.id: r for r in check_all(fv_of("reuleaux_triangle", width=2.0), constant_width=True)}
    for rid in ("blaschke_lebesgue", "steinhagen_cw", "cw_Rr"):
        assert reps[rid].applicable and reps[rid].is_equality


def test_equality_spot_checks():
    t = fv_of("equilateral_triangle", R=1.0)
    assert slack("pal", t).is_equality
    assert slack("ApDKubota3", t).is_equality
    thin = evaluate(bodies.construct(BodySpec.named("stadium_hull", r=1e-4, D=2.0)))
    assert abs(slack("pDrHenk", thin).normalized) <= 1e-3


def test_constant_width_applicability_detected():
    rt = evaluate(bodies.construct(BodySpec.named("reuleaux_polygon", k=5, width=1.0)))
    assert slack("steinhagen_cw", rt).applicable
    sq = evaluate(polygon([(0, 0), (1, 0), (1, 1), (0, 1)]))
    assert not slack("steinhagen_cw", sq).applicable


def test_corrupted_vector_is_violation():
    d = fv_of("ball", rho=1.0).to_dict()
    d["A"] = 4.0  # above p^2 / (4 pi)
    reps = check_all(FunctionalVector.from_dict(d))
    assert "isoperimetric" in {r.id for r in violations(reps)}


@given(polygons())
@settings(max_examples=300, deadline=None)
def test_soundness_random_polygons(body):
    assert violations(check_all(evaluate(body))) == []


FAMILY_RANGES = {
    "ball": ({}, "rho", 0.05, 3.0),
    "segment": ({}, "len", 0.05, 3.0),
    "equilateral_triangle": ({}, "R", 0.05, 3.0),
    "reuleaux_triangle": ({}, "width", 0.05, 3.0),
    "reuleaux_polygon": ({"k": 7}, "width", 0.05, 3.0),
    "lens": ({"D": 2.0}, "phi", 0.0, math.pi / 2),
    "slab_of_ball": ({"R": 1.0}, "w", 0.0, 2.0),
    "stadium_hull": ({"D": 2.0}, "r", 0.0, 1.0),
    "two_point_ball": ({"R": 1.0}, "r", 0.0, 1.0),
    "cap_cone": ({"R": 1.0}, "w", 1.0, 2.0),
    "sharp_isosceles": ({"r": 1.0}, "w", 2.0, 3.0),
}


def test_family_ranges_cover_all_families():
    assert set(FAMILY_RANGES) == set(bodies.FAMILIES)


@given(st.sampled_from(sorted(FAMILY_RANGES)), st.floats(0.0, 1.0))
@settings(max_examples=150, deadline=None)
def test_soundness_witness_bodies(family, t):
    fixed, param, lo, hi = FAMILY_RANGES[family]
    x = lo + (hi - lo) * t
    try:
        body = bodies.construct(BodySpec.named(family, **fixed, **{param: x}))
    except bodies.BodySpecError as exc:
        # open ends and the documented thickness floors
        assert x == lo or "numerically a segment" in str(exc), str(exc)
        return
    assert violations(check_all(evaluate(body))) == []


@given(polygons(max_n=20), st.sampled_from([0.5, 2.0, 7.0]))
@settings(max_examples=60, deadline=None)
def test_homogeneity(body, lam):
    fv = evaluate(body)
    big = fv.scaled(lam)
    for a, b in zip(check_all(fv), check_all(big)):
        assert a.applicable == b.applicable
        if a.applicable:
            assert a.normalized == pytest.approx(b.normalized, abs=1e-9)


@given(polygons())
@settings(max_examples=100, deadline=None)
def test_kubota_strengthens_isoperimetric(body):
    fv = evaluate(body)
    phi, deg = solve_kubota_phi(min(max(fv.p, 2 * fv.D), math.pi * fv.D), fv.D)
    if deg:
        return
    assert fv.p * (fv.p - 2 * fv.D * math.cos(phi)) / (8 * phi) <= fv.p**2 / (4 * math.pi) + 1e-9


@pytest.mark.parametrize("rid", ["LB_prD", "ARw_NEW_UPPER", "pRw_NEW"])
def test_sharpness_pass(rid):
    rep = certify_sharpness(rid, 33)
    assert rep.status == "PASS" and rep.gap <= 1e-7


def test_sharpness_no_claim():
    assert certify_sharpness("UB_pDr_2").status == "NO_CLAIM"


def test_incircle_triangle_equilateral():
    tri = polygon([(0, 0), (2, 0), (1, SQ3)])
    res = incircle_support_triangle(tri)
    assert not res.degenerate_strip
    assert np.allclose(sorted(res.triangle.vertices), sorted(tri.vertices), atol=1e-9)
    assert res.r_check == pytest.approx(1 / SQ3, abs=1e-9)


def test_incircle_square_strip():
    sq = polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    res = incircle_support_triangle(sq)
    assert res.degenerate_strip
    (n1, b1), (n2, b2) = res.halfplanes
    assert b1 + b2 == pytest.approx(2.0)
    assert res.r_check == pytest.approx(1.0)


@given(polygons())
@settings(max_examples=60, deadline=None)
def test_incircle_triangle_contains_and_preserves(body):
    res = incircle_support_triangle(body)
    r = evaluate(body).r
    for n, b in res.halfplanes:
        assert support(body, n)[0] <= b + 1e-9
    assert res.r_check == pytest.approx(r, abs=1e-9)


def test_incircle_triangle_seed_11():
    from santalo.diagrams import random_convex_polygon

    body = random_convex_polygon(30, 11)
    res = incircle_support_triangle(body)
    for n, b in res.halfplanes:
        assert support(body, n)[0] <= b + 1e-9
    assert res.r_check == pytest.approx(evaluate(body).r, abs=1e-9)
