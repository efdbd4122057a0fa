"""The six planar functionals with certified error bounds and witnesses.

``A`` and ``p`` are closed-form sums over edges.  ``D`` and ``w`` are the
maximum and minimum of the directional width, extremised exactly on each
piece of the normal fan.  ``R`` comes from a minimal enclosing circle of a
growing set of body points (cutting planes against the arcs) and ``r`` from
the Chebyshev-centre LP with a dual certificate; both report the gap between
a certified lower and upper bound as their error.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.optimize import linprog

from .geometry import (
    DEFAULT_TOL,
    TWO_PI,
    ArcGon,
    InvalidBodyError,
    Point2,
    ToleranceConfig,
    area,
    perimeter,
    require_valid,
)

if TYPE_CHECKING:
    from .bodies import BodySpec

EPS = np.finfo(float).eps
FIELDS = ("A", "p", "r", "R", "D", "w")


class ClosedFormMismatch(AssertionError):
    """A named body's closed form disagrees with its numeric evaluation."""


@dataclass(frozen=True)
class TouchingCertificate:
    points: list[Point2]
    hull_contains_center: bool


@dataclass(frozen=True)
class FunctionalVector:
    A: float
    p: float
    r: float
    R: float
    D: float
    w: float
    incenter: Point2 = (0.0, 0.0)
    circumcenter: Point2 = (0.0, 0.0)
    diameter_pair: tuple[Point2, Point2] = ((0.0, 0.0), (0.0, 0.0))
    width_direction: Point2 = (0.0, 1.0)
    err: dict[str, float] = field(default_factory=lambda: dict.fromkeys(FIELDS, 0.0))
    degenerate: bool = False

    def values(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in FIELDS}

    def scaled(self, lam: float) -> FunctionalVector:
        """Functionals of ``lam * K`` by homogeneity."""
        deg = {"A": 2}
        vals = {k: getattr(self, k) * lam ** deg.get(k, 1) for k in FIELDS}
        err = {k: self.err.get(k, 0.0) * lam ** deg.get(k, 1) for k in FIELDS}
        sc = lambda p: (p[0] * lam, p[1] * lam)  # noqa: E731
        return replace(
            self,
            **vals,
            err=err,
            incenter=sc(self.incenter),
            circumcenter=sc(self.circumcenter),
            diameter_pair=(sc(self.diameter_pair[0]), sc(self.diameter_pair[1])),
        )

    def to_dict(self) -> dict:
        return {
            "kind": "functionals",
            **self.values(),
            "incenter": list(self.incenter),
            "circumcenter": list(self.circumcenter),
            "diameter_pair": [list(self.diameter_pair[0]), list(self.diameter_pair[1])],
            "width_direction": list(self.width_direction),
            "err": {k: self.err.get(k, 0.0) for k in FIELDS},
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> FunctionalVector:
        missing = [k for k in FIELDS if k not in data]
        if missing:
            raise ValueError(f"functional vector missing fields {missing}")
        pair = data.get("diameter_pair", [[0, 0], [0, 0]])
        return cls(
            **{k: float(data[k]) for k in FIELDS},
            incenter=tuple(data.get("incenter", (0.0, 0.0))),
            circumcenter=tuple(data.get("circumcenter", (0.0, 0.0))),
            diameter_pair=(tuple(pair[0]), tuple(pair[1])),
            width_direction=tuple(data.get("width_direction", (0.0, 1.0))),
            err={k: float(data.get("err", {}).get(k, 0.0)) for k in FIELDS},
            degenerate=bool(data.get("degenerate", False)),
        )


# ---------------------------------------------------------------------------
# diameter / width


def diameter(body: ArcGon) -> tuple[float, Point2, Point2]:
    fan = require_valid(body).fan
    _, _, d, theta = fan.width_extrema()
    return max(d, 0.0), fan.support_point(theta), fan.support_point(theta + math.pi)


def width(body: ArcGon) -> tuple[float, Point2]:
    fan = require_valid(body).fan
    w, theta, _, _ = fan.width_extrema()
    return max(w, 0.0), (math.cos(theta), math.sin(theta))


# ---------------------------------------------------------------------------
# minimal enclosing circle


def _circle_two(p: Point2, q: Point2) -> tuple[float, float, float]:
    cx, cy = 0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])
    return cx, cy, max(math.dist((cx, cy), p), math.dist((cx, cy), q))


def _circle_three(a: Point2, b: Point2, c: Point2) -> tuple[float, float, float] | None:
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        return None
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    x = ox + (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    y = oy + (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    r = max(math.dist((x, y), a), math.dist((x, y), b), math.dist((x, y), c))
    return x, y, r


def _inside(c: tuple[float, float, float], p: Point2) -> bool:
    return math.dist((c[0], c[1]), p) <= c[2] * (1.0 + 1e-14) + 1e-300


def min_enclosing_circle(points: Sequence[Point2], seed: int = 0) -> tuple[float, float, float]:
    """Randomised incremental (move-to-front style) smallest enclosing circle."""
    pts = [(float(x), float(y)) for x, y in points]
    random.Random(seed).shuffle(pts)
    c: tuple[float, float, float] | None = None
    for i, p in enumerate(pts):
        if c is None or not _inside(c, p):
            c = _mec_one(pts[: i + 1], p)
    assert c is not None
    return c


def _mec_one(pts: list[Point2], p: Point2) -> tuple[float, float, float]:
    c = (p[0], p[1], 0.0)
    for i, q in enumerate(pts):
        if not _inside(c, q):
            c = _circle_two(p, q) if c[2] == 0.0 else _mec_two(pts[: i + 1], p, q)
    return c


def _mec_two(pts: list[Point2], p: Point2, q: Point2) -> tuple[float, float, float]:
    circ = _circle_two(p, q)
    left = right = None
    px, py = p
    qx, qy = q
    for r in pts:
        if _inside(circ, r):
            continue
        cross = (qx - px) * (r[1] - py) - (qy - py) * (r[0] - px)
        c = _circle_three(p, q, r)
        if c is None:
            continue
        side = (qx - px) * (c[1] - py) - (qy - py) * (c[0] - px)
        if cross > 0.0 and (left is None or side > (qx - px) * (left[1] - py) - (qy - py) * (left[0] - px)):
            left = c
        elif cross < 0.0 and (right is None or side < (qx - px) * (right[1] - py) - (qy - py) * (right[0] - px)):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right  # type: ignore[return-value]
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _touching_subset(center: Point2, cands: list[Point2], radius: float) -> TouchingCertificate:
    """Pick 2 or 3 touching points whose hull contains ``center``."""
    cx, cy = center
    tol = 1e-9 * max(radius, 1e-300)
    if len(cands) > 48:
        ang = sorted(cands, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        step = len(ang) / 48
        cands = [ang[int(i * step)] for i in range(48)]
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            a, b = cands[i], cands[j]
            if math.hypot(a[0] + b[0] - 2 * cx, a[1] + b[1] - 2 * cy) <= 2 * tol:
                return TouchingCertificate([a, b], True)
    arr = np.asarray(cands) - np.array(center)
    n = len(cands)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                m = np.array([[arr[i, 0], arr[j, 0], arr[k, 0]], [arr[i, 1], arr[j, 1], arr[k, 1]], [1.0, 1.0, 1.0]])
                try:
                    lam = np.linalg.solve(m, [0.0, 0.0, 1.0])
                except np.linalg.LinAlgError:
                    continue
                if np.all(lam >= -1e-9):
                    return TouchingCertificate([cands[i], cands[j], cands[k]], True)
    return TouchingCertificate(cands[:3], False)


def circumradius(body: ArcGon, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, Point2, TouchingCertificate, float]:
    """Circumradius, circumcentre, touching certificate and certified error.

    The enclosing circle of a finite subset of the body is a lower bound;
    the farthest body point from its centre is an upper bound.  The
    farthest point is appended to the subset until both bounds meet.
    """
    fan = require_valid(body).fan
    if body.is_disk:
        a = body.arcs[0]
        cx, cy = a.center
        pts = [(cx + a.radius, cy), (cx - a.radius, cy)]
        return a.radius, a.center, TouchingCertificate(pts, True), 4 * EPS * a.radius

    pts: list[Point2] = list(body.vertices)
    n = len(body.vertices)
    for i, arc in enumerate(body.arcs):
        if arc is None:
            continue
        p, q = body.vertices[i], body.vertices[(i + 1) % n]
        t0 = math.atan2(p[1] - arc.center[1], p[0] - arc.center[0])
        t1 = math.atan2(q[1] - arc.center[1], q[0] - arc.center[0])
        sweep = (t1 - t0) % TWO_PI
        for j in range(1, 8):
            t = t0 + sweep * j / 8
            pts.append((arc.center[0] + arc.radius * math.cos(t), arc.center[1] + arc.radius * math.sin(t)))

    scale = body.scale
    for _ in range(200):
        cx, cy, r_low = min_enclosing_circle(pts)
        r_up, far = fan.farthest_point((cx, cy))
        if r_up - r_low <= 4 * EPS * scale or far in pts:
            break
        pts.append(far)
    r_up = max(r_up, r_low)
    cands = [p for p in pts if math.dist(p, (cx, cy)) >= r_low - 1e-9 * r_low]
    cert = _touching_subset((cx, cy), cands, r_low)
    err = 0.5 * (r_up - r_low) + 8 * EPS * scale
    return 0.5 * (r_low + r_up), (cx, cy), cert, err


# ---------------------------------------------------------------------------
# inradius


def _arc_normals(fan, per_arc: int = 8) -> list[float]:
    out: list[float] = []
    for s, wd, off in zip(fan.starts, fan.widths, fan.offsets):
        if off > 0:
            out.extend((s + wd * np.linspace(0.0, 1.0, per_arc)).tolist())
    return out


def _edge_normals(body: ArcGon) -> list[float]:
    n = len(body.vertices)
    out = []
    for i, arc in enumerate(body.arcs):
        if arc is None:
            p, q = body.vertices[i], body.vertices[(i + 1) % n]
            out.append(math.atan2(-(q[0] - p[0]), q[1] - p[1]))
    return out


def inradius(body: ArcGon, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, Point2, list[Point2], float]:
    """Inradius, incentre, active outward normals and certified error.

    Solves ``max rho`` s.t. ``<c, n> + rho <= h(n)`` over a finite normal
    set.  The exact boundary distance of the LP centre is a lower bound;
    a convex combination of active normals summing to zero gives the
    upper bound ``sum lam_i h(n_i)``.  The minimising normal of the
    boundary distance is added until the bounds meet.
    """
    fan = require_valid(body).fan
    if body.is_segment:
        p, q = body.vertices
        return 0.0, ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2), [], 0.0
    if body.is_disk:
        a = body.arcs[0]
        normals = [(math.cos(t), math.sin(t)) for t in (0.0, TWO_PI / 3, 2 * TWO_PI / 3)]
        return a.radius, a.center, normals, 4 * EPS * a.radius

    scale = body.scale
    thetas = np.unique(np.mod(np.array(_edge_normals(body) + _arc_normals(fan)), TWO_PI))
    best_low, best_c = -math.inf, (0.0, 0.0)
    up = math.inf
    active: np.ndarray = thetas
    for _ in range(60):
        nrm = np.c_[np.cos(thetas), np.sin(thetas)]
        h = fan.support(thetas)
        res = linprog(
            [0.0, 0.0, -1.0],
            A_ub=np.c_[nrm, np.ones(len(thetas))],
            b_ub=h,
            bounds=[(None, None), (None, None), (0.0, None)],
            method="highs",
        )
        if res.status != 0:
            raise InvalidBodyError(f"inradius LP failed: {res.message}")
        lam = -np.asarray(res.ineqlin.marginals)
        sel = np.nonzero(lam > 1e-9)[0]
        centers = [(float(res.x[0]), float(res.x[1]))]
        up_k = math.inf
        if 1 <= len(sel) <= 3:
            m = np.vstack([nrm[sel].T, np.ones(len(sel))])
            lam_e, *_ = np.linalg.lstsq(m, np.array([0.0, 0.0, 1.0]), rcond=None)
            resid = m @ lam_e - np.array([0.0, 0.0, 1.0])
            if np.all(lam_e >= 0) and np.abs(resid).max() < 1e-12:
                lam_e = lam_e / lam_e.sum()
                g = float(np.hypot(*(nrm[sel].T @ lam_e)))
                up_k = float(lam_e @ h[sel]) + g * scale
                if len(sel) == 3:
                    sol = np.linalg.lstsq(np.c_[nrm[sel], np.ones(3)], h[sel], rcond=None)[0]
                    centers.append((float(sol[0]), float(sol[1])))
        if not math.isfinite(up_k):
            g = float(np.hypot(*(nrm.T @ lam))) / max(lam.sum(), 1e-300)
            up_k = float(lam @ h) / max(lam.sum(), 1e-300) + g * scale
        up = min(up, up_k)
        cut = None
        for c in centers:
            low, worst = fan.boundary_distance(c)
            if cut is None:
                cut = worst
            if low > best_low:
                best_low, best_c = low, c
        active = thetas[sel] if len(sel) else thetas
        if up - best_low <= 16 * EPS * scale:
            break
        if np.min(np.abs(np.angle(np.exp(1j * (thetas - cut))))) < 1e-15:
            break
        thetas = np.sort(np.append(thetas, cut))

    up = max(up, best_low)
    nrm_all = np.c_[np.cos(thetas), np.sin(thetas)]
    slack = fan.support(thetas) - nrm_all @ np.array(best_c) - best_low
    touching = thetas[slack <= 1e-9 * scale]
    if len(touching) < 2:
        touching = active
    normals = [(float(math.cos(t)), float(math.sin(t))) for t in touching]
    err = 0.5 * (up - best_low) + 16 * EPS * scale
    return 0.5 * (best_low + up), best_c, normals, err


# ---------------------------------------------------------------------------
# all six


def evaluate(body: ArcGon, tol: ToleranceConfig = DEFAULT_TOL) -> FunctionalVector:
    """Numeric evaluation of the six functionals of an arc-gon."""
    require_valid(body)
    sc = body.scale
    a = area(body)
    p = perimeter(body)
    d, q1, q2 = diameter(body)
    w, u = width(body)
    big_r, cc, _, err_big_r = circumradius(body, tol)
    r, ic, _, err_r = inradius(body, tol)
    err = {
        "A": 64 * EPS * max(a, sc * sc * 1e-3) + 16 * EPS * sc * sc,
        "p": 64 * EPS * p + 16 * EPS * sc,
        "r": err_r,
        "R": err_big_r,
        "D": 64 * EPS * sc,
        "w": 64 * EPS * sc,
    }
    return FunctionalVector(
        A=a,
        p=p,
        r=r,
        R=big_r,
        D=d,
        w=w,
        incenter=ic,
        circumcenter=cc,
        diameter_pair=(q1, q2),
        width_direction=u,
        err=err,
        degenerate=body.is_segment,
    )


def evaluate_all(spec: BodySpec | ArcGon, tol: ToleranceConfig = DEFAULT_TOL) -> FunctionalVector:
    """Evaluate a body spec; named bodies return closed forms checked against numerics."""
    from . import bodies

    if isinstance(spec, ArcGon):
        return evaluate(spec, tol)
    body = bodies.construct(spec)
    numeric = evaluate(body, tol)
    if spec.kind == "raw":
        return numeric
    closed = bodies.closed_form(spec)
    vals = numeric.values()
    err = dict(numeric.err)
    for k, v in closed.values.items():
        if abs(v - vals[k]) > 10 * tol.abs_tol * max(1.0, abs(v)) + 3 * numeric.err[k]:
            raise ClosedFormMismatch(f"{spec.name}: closed-form {k}={v!r} vs numeric {vals[k]!r}")
        vals[k] = v
        err[k] = 4 * EPS * max(abs(v), 1.0)
    return replace(numeric, **vals, err=err)


def check_invariants(fv: FunctionalVector) -> list[str]:
    """Classical relations every functional vector must satisfy (within err)."""
    e = fv.err
    A, p, r, R, D, w = fv.A, fv.p, fv.r, fv.R, fv.D, fv.w
    s3 = math.sqrt(3.0)
    checks = {
        "r <= R": r - R <= e["r"] + e["R"],
        "w <= D": w - D <= e["w"] + e["D"],
        "2r <= w": 2 * r - w <= 2 * e["r"] + e["w"],
        "w <= 3r": w - 3 * r <= e["w"] + 3 * e["r"],
        "sqrt3 R <= D": s3 * R - D <= s3 * e["R"] + e["D"],
        "w <= r + R": w - r - R <= e["w"] + e["r"] + e["R"],
        "r + R <= D": r + R - D <= e["r"] + e["R"] + e["D"],
        "pi r^2 <= A": math.pi * r * r - A <= 2 * math.pi * r * e["r"] + e["A"] + 1e-15,
        "A <= pi R^2": A - math.pi * R * R <= 2 * math.pi * R * e["R"] + e["A"],
        "2D <= p": 2 * D - p <= 2 * e["D"] + e["p"],
        "p <= pi D": p - math.pi * D <= e["p"] + math.pi * e["D"],
        "4 pi A <= p^2": 4 * math.pi * A - p * p <= 4 * math.pi * e["A"] + 2 * p * e["p"],
    }
    return [k for k, ok in checks.items() if not ok]
