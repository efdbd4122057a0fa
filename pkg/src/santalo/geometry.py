"""Exact planar convex bodies bounded by segments and outward circular arcs.

An :class:`ArcGon` stores counterclockwise vertices and, per edge, either
``None`` (straight edge) or an :class:`Arc`.  Everything downstream works on
the body's *normal fan*: the circle of outward normal angles split into
pieces on which the support function has the closed form
``h(u) = <P, u> + rho`` (a vertex ``P`` with ``rho = 0``, or an arc centre
``P`` with its radius ``rho``).  Widths, distances to the boundary and
farthest points are then extremised piece by piece in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

Point2 = tuple[float, float]


class InvalidBodyError(ValueError):
    """Raised when an operation receives a body that fails validation."""


class DegeneratePointSetError(ValueError):
    pass


@dataclass(frozen=True)
class ToleranceConfig:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_sagitta: float = 1e-6
    direction_samples: int = 4096

    def __post_init__(self) -> None:
        for name in ("abs_tol", "rel_tol", "max_sagitta", "direction_samples"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceConfig()


def unit_vector(x: float, y: float) -> Point2:
    """Normalise ``(x, y)``; rejects the zero vector."""
    n = math.hypot(x, y)
    if n == 0.0 or not math.isfinite(n):
        raise ValueError("cannot normalise a zero or non-finite vector")
    return (x / n, y / n)


def direction(theta: float) -> Point2:
    return (math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class Arc:
    center: Point2
    radius: float
    full_circle: bool = False


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class ArcGon:
    """Convex body: cyclic CCW vertices with optional outward arcs per edge.

    ``arcs[i]`` describes the edge from ``vertices[i]`` to
    ``vertices[(i + 1) % n]``.  A disk is one vertex plus one full-circle
    arc; a segment is two vertices joined by two straight edges.
    """

    vertices: tuple[Point2, ...]
    arcs: tuple[Arc | None, ...]

    def __init__(self, vertices: Iterable[Sequence[float]], arcs: Iterable[Arc | None] | None = None):
        vs = tuple((float(v[0]), float(v[1])) for v in vertices)
        if arcs is None:
            arcs_t: tuple[Arc | None, ...] = (None,) * len(vs)
        else:
            arcs_t = tuple(arcs)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "arcs", arcs_t)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArcGon):
            return NotImplemented
        return self.vertices == other.vertices and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.vertices, self.arcs))

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        kind = "disk" if self.is_disk else "segment" if self.is_segment else f"{len(self)}-gon"
        n_arcs = sum(a is not None for a in self.arcs)
        return f"ArcGon({kind}, arcs={n_arcs})"

    @property
    def is_disk(self) -> bool:
        return len(self.vertices) == 1 and self.arcs[0] is not None and self.arcs[0].full_circle

    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2 and self.arcs[0] is None and self.arcs[1] is None

    @property
    def is_polygon(self) -> bool:
        return all(a is None for a in self.arcs)

    @cached_property
    def fan(self) -> NormalFan:
        report = validate_arcgon(self)
        if not report.ok:
            raise InvalidBodyError("invalid arc-gon: " + "; ".join(report.violations))
        return NormalFan.from_arcgon(self)

    @cached_property
    def scale(self) -> float:
        """Rough size used to turn relative tolerances into absolute ones."""
        pts = [self.vertices[0]]
        pts.extend(self.vertices)
        m = max(math.hypot(*p) for p in pts)
        for a in self.arcs:
            if a is not None:
                m = max(m, math.hypot(*a.center) + a.radius)
        return max(m, 1e-300)

    # --- JSON -----------------------------------------------------------
    def to_dict(self) -> dict:
        arcs = []
        for a in self.arcs:
            if a is None:
                arcs.append(None)
            elif a.full_circle:
                arcs.append({"full_circle": True, "center": list(a.center), "radius": a.radius})
            else:
                arcs.append({"center": list(a.center), "radius": a.radius})
        return {"kind": "arcgon", "vertices": [list(v) for v in self.vertices], "arcs": arcs}

    @classmethod
    def from_dict(cls, data: dict) -> ArcGon:
        if data.get("kind", "arcgon") != "arcgon":
            raise ValueError(f"expected kind 'arcgon', got {data.get('kind')!r}")
        vertices = data["vertices"]
        raw_arcs = data.get("arcs") or [None] * len(vertices)
        if len(raw_arcs) != len(vertices):
            raise ValueError("arcs list must have one entry per vertex")
        arcs: list[Arc | None] = []
        for a in raw_arcs:
            if a is None:
                arcs.append(None)
            else:
                c = a["center"]
                arcs.append(Arc((float(c[0]), float(c[1])), float(a["radius"]), bool(a.get("full_circle", False))))
        return cls(vertices, arcs)


# ---------------------------------------------------------------------------
# constructors and rigid transforms


def disk(center: Point2 = (0.0, 0.0), radius: float = 1.0) -> ArcGon:
    cx, cy = center
    return ArcGon([(cx + radius, cy)], [Arc((cx, cy), radius, full_circle=True)])


def segment(p: Point2, q: Point2) -> ArcGon:
    return ArcGon([p, q])


def polygon(points: Iterable[Sequence[float]]) -> ArcGon:
    return ArcGon(points)


def transform(body: ArcGon, scale: float = 1.0, angle: float = 0.0, shift: Point2 = (0.0, 0.0)) -> ArcGon:
    """Similarity ``x -> scale * R(angle) x + shift``; keeps arcs exact."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    ca, sa = math.cos(angle), math.sin(angle)
    sx, sy = shift

    def f(p: Point2) -> Point2:
        return (scale * (ca * p[0] - sa * p[1]) + sx, scale * (sa * p[0] + ca * p[1]) + sy)

    arcs = [None if a is None else Arc(f(a.center), a.radius * scale, a.full_circle) for a in body.arcs]
    return ArcGon([f(v) for v in body.vertices], arcs)


def linear_map(body: ArcGon, matrix: Sequence[Sequence[float]]) -> ArcGon:
    """Apply an orientation-preserving linear map to a polygon."""
    if not body.is_polygon:
        raise InvalidBodyError("polygon required")
    m = np.asarray(matrix, dtype=float)
    if np.linalg.det(m) <= 0:
        raise ValueError("linear map must preserve orientation")
    pts = np.asarray(body.vertices) @ m.T
    return ArcGon(pts.tolist())


# ---------------------------------------------------------------------------
# validation


def _cross(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _arc_sweep(p: Point2, q: Point2, c: Point2) -> float:
    ax, ay = p[0] - c[0], p[1] - c[1]
    bx, by = q[0] - c[0], q[1] - c[1]
    return math.atan2(_cross(ax, ay, bx, by), ax * bx + ay * by) % TWO_PI


def _edge_tangents(body: ArcGon, i: int) -> tuple[Point2, Point2]:
    """Unit tangent of edge ``i`` at its start and at its end."""
    n = len(body.vertices)
    p, q = body.vertices[i], body.vertices[(i + 1) % n]
    a = body.arcs[i]
    if a is None:
        t = unit_vector(q[0] - p[0], q[1] - p[1])
        return t, t
    cx, cy = a.center
    t0 = unit_vector(-(p[1] - cy), p[0] - cx)
    t1 = unit_vector(-(q[1] - cy), q[0] - cx)
    return t0, t1


def validate_arcgon(body: ArcGon) -> ValidationReport:
    """Check every structural invariant; never raises."""
    v: list[str] = []
    n = len(body.vertices)
    if n == 0:
        return ValidationReport(False, ["no vertices"])
    if len(body.arcs) != n:
        return ValidationReport(False, [f"expected {n} arc entries, got {len(body.arcs)}"])
    for i, p in enumerate(body.vertices):
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            v.append(f"non-finite vertex at index {i}")
    for i, a in enumerate(body.arcs):
        if a is not None and not (
            math.isfinite(a.center[0]) and math.isfinite(a.center[1]) and math.isfinite(a.radius) and a.radius > 0
        ):
            v.append(f"bad arc record at index {i}")
    if v:
        return ValidationReport(False, v)

    if n == 1:
        a = body.arcs[0]
        if a is None or not a.full_circle:
            return ValidationReport(False, ["single vertex requires a full-circle arc (points are not bodies)"])
        d = math.dist(body.vertices[0], a.center)
        if abs(d - a.radius) > 1e-10 * max(1.0, a.radius):
            v.append("vertex 0 not on the full circle")
        return ValidationReport(not v, v)

    if any(a is not None and a.full_circle for a in body.arcs):
        v.append("full-circle arc only allowed in the one-vertex disk encoding")

    for i in range(n):
        p, q = body.vertices[i], body.vertices[(i + 1) % n]
        if math.dist(p, q) == 0.0:
            v.append(f"zero-length edge at index {i}")
    if v:
        return ValidationReport(False, v)

    total = 0.0
    for i, a in enumerate(body.arcs):
        if a is None:
            continue
        p, q = body.vertices[i], body.vertices[(i + 1) % n]
        tol = 1e-10 * max(1.0, a.radius)
        if abs(math.dist(p, a.center) - a.radius) > tol or abs(math.dist(q, a.center) - a.radius) > tol:
            v.append(f"arc endpoints off the circle at index {i}")
        sweep = _arc_sweep(p, q, a.center)
        if not (0.0 < sweep < math.pi):
            v.append(f"arc at index {i} bulges inward or subtends >= pi")
        total += sweep

    segment_like = n == 2 and body.is_segment
    for i in range(n):
        _, t_in = _edge_tangents(body, (i - 1) % n)
        t_out, _ = _edge_tangents(body, i)
        cr = _cross(*t_in, *t_out)
        dt = t_in[0] * t_out[0] + t_in[1] * t_out[1]
        if segment_like:
            turn = math.pi
        else:
            turn = math.atan2(cr, dt)
            if turn < -1e-12:
                v.append(f"non-convex turn at index {i}")
            elif turn > math.pi - 1e-12:
                v.append(f"cusp (turn of pi) at index {i}")
        total += turn
    if not v and abs(total - TWO_PI) > 1e-9:
        v.append(f"total turning {total:.12g} differs from 2*pi")
    return ValidationReport(not v, v)


def require_valid(body: ArcGon) -> ArcGon:
    body.fan  # noqa: B018 - builds the fan, raising on invalid input
    return body


# ---------------------------------------------------------------------------
# normal fan


def _wrap(theta: np.ndarray | float) -> np.ndarray:
    return np.mod(theta, TWO_PI)


@dataclass(frozen=True, eq=False)
class NormalFan:
    """Support function pieces ``h(u) = <P_k, u> + rho_k`` on ``[start_k, start_k + width_k]``."""

    starts: np.ndarray  # sorted, in [0, 2pi)
    widths: np.ndarray
    points: np.ndarray  # (m, 2)
    offsets: np.ndarray  # (m,)

    @classmethod
    def from_arcgon(cls, body: ArcGon) -> NormalFan:
        if body.is_disk:
            a = body.arcs[0]
            return cls(np.array([0.0]), np.array([TWO_PI]), np.array([a.center], float), np.array([a.radius]))
        n = len(body.vertices)
        starts: list[float] = []
        widths: list[float] = []
        pts: list[Point2] = []
        offs: list[float] = []
        for i in range(n):
            _, t_in = _edge_tangents(body, (i - 1) % n)
            t_out, _ = _edge_tangents(body, i)
            if body.is_segment:
                turn = math.pi
            else:
                turn = math.atan2(_cross(*t_in, *t_out), t_in[0] * t_out[0] + t_in[1] * t_out[1])
            if turn > 1e-12:  # tangency points between an arc and a chord carry no cone
                starts.append(math.atan2(-t_in[0], t_in[1]))
                widths.append(turn)
                pts.append(body.vertices[i])
                offs.append(0.0)
            a = body.arcs[i]
            if a is not None:
                p = body.vertices[i]
                q = body.vertices[(i + 1) % n]
                starts.append(math.atan2(p[1] - a.center[1], p[0] - a.center[0]))
                widths.append(_arc_sweep(p, q, a.center))
                pts.append(a.center)
                offs.append(a.radius)
        s = _wrap(np.array(starts))
        # equal starts: the widest piece sorts last so searchsorted picks it
        order = np.lexsort((np.array(widths), s))
        return cls(s[order], np.array(widths)[order], np.array(pts, float)[order], np.array(offs)[order])

    def __len__(self) -> int:
        return len(self.starts)

    @property
    def ends(self) -> np.ndarray:
        return np.append(self.starts[1:], self.starts[0] + TWO_PI)

    def piece(self, theta: np.ndarray | float) -> np.ndarray:
        t = _wrap(np.asarray(theta, dtype=float))
        k = np.searchsorted(self.starts, t, side="right") - 1
        return np.where(k < 0, len(self.starts) - 1, k)

    def support(self, theta: np.ndarray | float) -> np.ndarray:
        k = self.piece(theta)
        t = np.asarray(theta, dtype=float)
        return self.points[k, 0] * np.cos(t) + self.points[k, 1] * np.sin(t) + self.offsets[k]

    def support_point(self, theta: float) -> Point2:
        k = int(self.piece(theta))
        c, s = math.cos(theta), math.sin(theta)
        px, py = self.points[k]
        rho = self.offsets[k]
        return (float(px + rho * c), float(py + rho * s))

    # -- width function ------------------------------------------------
    def width_pieces(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Intervals of ``[0, pi]`` on which ``w(theta) = <d, u> + C`` with constant ``d, C``."""
        b = np.concatenate([self.starts, _wrap(self.starts - math.pi)])
        b = b[b < math.pi]
        b = np.unique(np.concatenate([b, [0.0, math.pi]]))
        lo, hi = b[:-1], b[1:]
        keep = hi > lo
        lo, hi = lo[keep], hi[keep]
        mid = 0.5 * (lo + hi)
        k1 = self.piece(mid)
        k2 = self.piece(mid + math.pi)
        d = self.points[k1] - self.points[k2]
        c = self.offsets[k1] + self.offsets[k2]
        return lo, hi, d, c

    def width_extrema(self) -> tuple[float, float, float, float]:
        """Return ``(w_min, theta_min, w_max, theta_max)`` of the directional width."""
        lo, hi, d, c = self.width_pieces()
        alpha = np.arctan2(d[:, 1], d[:, 0])
        cand = np.stack([lo, hi, _wrap(alpha), _wrap(alpha + math.pi)], axis=1)
        inside = (cand >= lo[:, None]) & (cand <= hi[:, None])
        vals = d[:, :1] * np.cos(cand) + d[:, 1:] * np.sin(cand) + c[:, None]
        vmin = np.where(inside, vals, np.inf)
        vmax = np.where(inside, vals, -np.inf)
        i_min = np.unravel_index(np.argmin(vmin), vmin.shape)
        i_max = np.unravel_index(np.argmax(vmax), vmax.shape)
        return float(vmin[i_min]), float(cand[i_min]), float(vmax[i_max]), float(cand[i_max])

    # -- distances from a point ----------------------------------------
    def boundary_distance(self, c: Sequence[float]) -> tuple[float, float]:
        """``min_u h(u) - <c, u>`` and a minimising normal angle.

        For ``c`` inside the body this is the distance to the boundary,
        i.e. the largest disk about ``c`` contained in the body.
        """
        q = self.points - np.asarray(c, dtype=float)
        lo, hi = self.starts, self.starts + self.widths
        alpha = np.arctan2(q[:, 1], q[:, 0]) + math.pi
        a = lo + _wrap(alpha - lo)
        cand = np.stack([lo, hi, a], axis=1)
        inside = np.ones_like(cand, dtype=bool)
        inside[:, 2] = a <= hi
        vals = q[:, :1] * np.cos(cand) + q[:, 1:] * np.sin(cand) + self.offsets[:, None]
        vals = np.where(inside, vals, np.inf)
        i = np.unravel_index(np.argmin(vals), vals.shape)
        return float(vals[i]), float(_wrap(cand[i]))

    def farthest_point(self, c: Sequence[float]) -> tuple[float, Point2]:
        """Farthest body point from ``c`` (vertex or interior arc point)."""
        cx, cy = float(c[0]), float(c[1])
        q = self.points - np.array([cx, cy])
        dist = np.hypot(q[:, 0], q[:, 1])
        arc = self.offsets > 0
        best = -1.0
        best_pt: Point2 = (cx, cy)
        vtx = ~arc
        if vtx.any():
            j = int(np.argmax(np.where(vtx, dist, -1.0)))
            best, best_pt = float(dist[j]), (float(self.points[j, 0]), float(self.points[j, 1]))
        for j in np.nonzero(arc)[0]:
            if dist[j] == 0.0:
                ang = self.starts[j]
            else:
                ang = math.atan2(q[j, 1], q[j, 0])
            rel = (ang - self.starts[j]) % TWO_PI
            if rel <= self.widths[j] or self.widths[j] >= TWO_PI:
                val = float(dist[j] + self.offsets[j])
                if val > best:
                    u = (math.cos(ang), math.sin(ang))
                    best = val
                    best_pt = (
                        float(self.points[j, 0] + self.offsets[j] * u[0]),
                        float(self.points[j, 1] + self.offsets[j] * u[1]),
                    )
        return best, best_pt


# ---------------------------------------------------------------------------
# operations


def support(body: ArcGon, u: Point2) -> tuple[float, Point2]:
    """Support value ``max <x, u>`` and a maximiser."""
    fan = body.fan
    theta = math.atan2(u[1], u[0])
    return float(fan.support(theta)), fan.support_point(theta)


def support_many(body: ArcGon, thetas: np.ndarray) -> np.ndarray:
    return body.fan.support(thetas)


def width_in_direction(body: ArcGon, u: Point2) -> float:
    return support(body, u)[0] + support(body, (-u[0], -u[1]))[0]


def convex_hull(points: Iterable[Sequence[float]]) -> ArcGon:
    """Monotone-chain hull; collinear input gives the segment encoding."""
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if len(pts) < 2:
        raise DegeneratePointSetError("degenerate point set")

    def half(seq: list[Point2]) -> list[Point2]:
        out: list[Point2] = []
        for p in seq:
            while len(out) >= 2 and _cross(
                out[-1][0] - out[-2][0], out[-1][1] - out[-2][1], p[0] - out[-2][0], p[1] - out[-2][1]
            ) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return segment(pts[0], pts[-1])
    return ArcGon(hull)


def discretize(body: ArcGon, max_sagitta: float) -> ArcGon:
    """Inscribed polygon replacing each arc by chords of sagitta <= ``max_sagitta``."""
    if max_sagitta <= 0:
        raise ValueError("max_sagitta must be positive")
    if body.is_polygon:
        return body

    def pieces(radius: float, sweep: float) -> int:
        ratio = max_sagitta / radius
        step = 2.0 * math.acos(max(-1.0, 1.0 - ratio)) if ratio < 2.0 else math.pi
        return max(1, math.ceil(sweep / step - 1e-12))

    if body.is_disk:
        a = body.arcs[0]
        m = max(3, pieces(a.radius, TWO_PI))
        t = np.linspace(0.0, TWO_PI, m, endpoint=False)
        return ArcGon(np.c_[a.center[0] + a.radius * np.cos(t), a.center[1] + a.radius * np.sin(t)].tolist())

    n = len(body.vertices)
    out: list[Point2] = []
    for i in range(n):
        p = body.vertices[i]
        out.append(p)
        a = body.arcs[i]
        if a is None:
            continue
        q = body.vertices[(i + 1) % n]
        sweep = _arc_sweep(p, q, a.center)
        m = pieces(a.radius, sweep)
        t0 = math.atan2(p[1] - a.center[1], p[0] - a.center[0])
        for j in range(1, m):
            t = t0 + sweep * j / m
            out.append((a.center[0] + a.radius * math.cos(t), a.center[1] + a.radius * math.sin(t)))
    return ArcGon(out)


def area(body: ArcGon) -> float:
    require_valid(body)
    if body.is_disk:
        return math.pi * body.arcs[0].radius ** 2
    v = np.asarray(body.vertices)
    x, y = v[:, 0], v[:, 1]
    a = 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
    n = len(v)
    for i, arc in enumerate(body.arcs):
        if arc is not None:
            th = _arc_sweep(body.vertices[i], body.vertices[(i + 1) % n], arc.center)
            a += 0.5 * arc.radius ** 2 * (th - math.sin(th))
    return max(a, 0.0)


def perimeter(body: ArcGon) -> float:
    require_valid(body)
    if body.is_disk:
        return TWO_PI * body.arcs[0].radius
    n = len(body.vertices)
    total = 0.0
    for i, arc in enumerate(body.arcs):
        p, q = body.vertices[i], body.vertices[(i + 1) % n]
        if arc is None:
            total += math.dist(p, q)
        else:
            total += arc.radius * _arc_sweep(p, q, arc.center)
    return total


def steiner_symmetrize(body: ArcGon, axis: Point2) -> ArcGon:
    """Steiner symmetrisation of a polygon about the line through 0 along ``axis``."""
    if not body.is_polygon:
        raise InvalidBodyError("polygon required")
    require_valid(body)
    ax, ay = unit_vector(*axis)
    nx, ny = -ay, ax
    v = np.asarray(body.vertices)
    s = v @ np.array([ax, ay])
    t = v @ np.array([nx, ny])
    s1, t1 = np.roll(s, -1), np.roll(t, -1)

    levels = np.unique(s)
    ds = s1 - s
    smin, smax = np.minimum(s, s1), np.maximum(s, s1)
    lv = levels[:, None]
    on = (lv >= smin[None, :]) & (lv <= smax[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(ds[None, :] != 0, (lv - s[None, :]) / ds[None, :], 0.0)
    frac = np.clip(frac, 0.0, 1.0)
    tt = t[None, :] + frac * (t1 - t)[None, :]
    hi = np.where(on, np.maximum(tt, np.where(ds[None, :] == 0, np.maximum(t, t1)[None, :], tt)), -np.inf)
    lo = np.where(on, np.minimum(tt, np.where(ds[None, :] == 0, np.minimum(t, t1)[None, :], tt)), np.inf)
    # vertices lying exactly on a level
    vh = np.where(s[None, :] == lv, t[None, :], -np.inf).max(axis=1)
    vl = np.where(s[None, :] == lv, t[None, :], np.inf).min(axis=1)
    half = 0.5 * (np.maximum(hi.max(axis=1), vh) - np.minimum(lo.min(axis=1), vl))
    half = np.maximum(half, 0.0)

    pts = []
    for sv, hv in zip(levels, half):
        for sign in (1.0, -1.0):
            tv = sign * hv
            pts.append((sv * ax + tv * nx, sv * ay + tv * ny))
    return convex_hull(pts)


def contains_disk(body: ArcGon, center: Point2, radius: float, samples: int = 4096) -> bool:
    """Sampled support test: ``<c,u> + radius <= h(u)`` on ``samples`` directions."""
    th = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    h = body.fan.support(th)
    return bool(np.all(center[0] * np.cos(th) + center[1] * np.sin(th) + radius <= h + 1e-15 * body.scale))
