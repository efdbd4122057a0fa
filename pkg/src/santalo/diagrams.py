"""The six open Blaschke-Santalo diagrams: coordinate maps, boundary curves, clouds, search.

Points are ratios of functionals of matching degree, so every map is scale
invariant. Curves carry the exact function they plot so clouds can be checked
against them without interpolation error.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from . import bodies
from .functionals import FIELDS, FunctionalVector, evaluate
from .geometry import ArcGon, DegeneratePointSetError, InvalidBodyError, convex_hull, discretize, polygon
from .inequalities import check_all, solve_kubota_phi, violations

SQRT3 = math.sqrt(3.0)
RT_W_OVER_R = SQRT3  # Reuleaux triangle: w / R
RT_R_OVER_D = 1 - 1 / SQRT3  # Reuleaux triangle: r / D
RT_W_OVER_r = (3 + SQRT3) / 2  # Reuleaux triangle: w / r


class DiagramError(ValueError):
    pass


class DegenerateBodyError(DiagramError):
    pass


class CloudViolation(RuntimeError):
    """A sampled body violated a catalog inequality or crossed a proven curve."""

    def __init__(self, message: str, reports: list | None = None):
        super().__init__(message)
        self.reports = reports or []


Ratio = tuple[str, str, int]  # numerator field, denominator field, power of denominator


@dataclass(frozen=True)
class DiagramSpec:
    name: str
    x: Ratio
    y: Ratio
    curve_refs: tuple[str, ...]
    x_range: tuple[float, float]
    y_range: tuple[float, float]

    @property
    def x_label(self) -> str:
        return _ratio_label(self.x)

    @property
    def y_label(self) -> str:
        return _ratio_label(self.y)

    def x_map(self, fv: FunctionalVector) -> float:
        return _apply(self.x, fv.values())

    def y_map(self, fv: FunctionalVector) -> float:
        return _apply(self.y, fv.values())


def _ratio_label(r: Ratio) -> str:
    num, den, k = r
    return f"{num}/{den}" + ("^2" if k == 2 else "")


def _apply(r: Ratio, v: dict[str, float]) -> float:
    num, den, k = r
    return v[num] / v[den] ** k


DIAGRAMS: dict[str, DiagramSpec] = {
    "ApD": DiagramSpec(
        "ApD",
        ("p", "D", 1),
        ("A", "D", 2),
        ("ApDKubota", "ApDKubota2", "pD_upper", "pD_lower", "ApDKubota3", "isoperimetric"),
        (1.9, 3.25),
        (0.0, 0.85),
    ),
    "pDr": DiagramSpec(
        "pDr",
        ("r", "D", 1),
        ("p", "D", 1),
        ("pD_upper", "LB_prD", "pD_lower", "UB_pDr_2", "pDrHenk"),
        (0.0, 0.52),
        (1.9, 4.1),
    ),
    "pRw": DiagramSpec(
        "pRw",
        ("w", "R", 1),
        ("p", "R", 1),
        ("pw", "pRw_NEW", "LB_pRw", "pR_upper", "pR_lower"),
        (0.0, 2.05),
        (3.8, 6.5),
    ),
    "ARw": DiagramSpec(
        "ARw",
        ("w", "R", 1),
        ("A", "R", 2),
        ("ARw_NEW_UPPER", "ARw_LOWER", "ARw_old_lower", "ARw_old_upper"),
        (0.0, 2.05),
        (0.0, 3.3),
    ),
    "Arw": DiagramSpec(
        "Arw",
        ("w", "r", 1),
        ("A", "r", 2),
        ("steinhagen_lower", "Arw_upper", "Arw_nonsharp_1", "Arw_nonsharp_2", "Arw_lower"),
        (1.95, 3.05),
        (2.5, 30.0),
    ),
    "prw": DiagramSpec(
        "prw",
        ("w", "r", 1),
        ("p", "r", 1),
        ("steinhagen_lower", "prw_upper", "prw_nonsharp", "pw", "prw_lower"),
        (1.95, 3.05),
        (5.5, 60.0),
    ),
}


def get_diagram(name: str) -> DiagramSpec:
    try:
        return DIAGRAMS[name]
    except KeyError:
        raise DiagramError(f"unknown diagram {name!r}; choose from {sorted(DIAGRAMS)}") from None


def _denominators(spec: DiagramSpec) -> set[str]:
    dens = {spec.x[1], spec.y[1]}
    if spec.name == "pDr":
        dens.add("r")
    return dens


def map_point(spec: DiagramSpec, fv: FunctionalVector) -> tuple[float, float]:
    v = fv.values()
    for d in _denominators(spec):
        if not v[d] > 0:
            raise DegenerateBodyError(f"degenerate body for this diagram ({d} = 0)")
    return _apply(spec.x, v), _apply(spec.y, v)


def point_error(spec: DiagramSpec, fv: FunctionalVector) -> tuple[float, float]:
    """Bounds on |dx|, |dy| from the per-field errors (each field moved by +/- err)."""
    v = fv.values()
    out = []
    for ratio in (spec.x, spec.y):
        base = _apply(ratio, v)
        total = 0.0
        for f in set(ratio[:2]):
            e = fv.err.get(f, 0.0)
            moved = [dict(v, **{f: v[f] + s * e}) for s in (1.0, -1.0)]
            total += max(abs(_apply(ratio, m) - base) for m in moved if m[ratio[1]] > 0)
        out.append(total + 4 * np.finfo(float).eps * abs(base))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# known curves


@dataclass(frozen=True)
class Curve:
    """A boundary or bound in diagram coordinates.

    ``side`` says where the diagram lies: ``below``/``above`` a graph
    ``y = f(x)`` on ``[x0, x1]``, or ``left``/``right`` of the vertical line ``x = x0``.
    """

    id: str
    ref: str
    style: str  # proven-boundary | valid-bound
    side: str
    x0: float
    x1: float
    f: Callable[[float], float] | None = None
    y0: float = 0.0
    y1: float = 0.0
    label: str = ""

    @property
    def vertical(self) -> bool:
        return self.f is None

    def polyline(self, n: int = 201, y_clip: float | None = None) -> list[tuple[float, float]]:
        if self.vertical:
            return [(self.x0, self.y0), (self.x0, self.y1)]
        pts = []
        for x in np.linspace(self.x0, self.x1, n):
            y = self.f(float(x))
            if math.isfinite(y) and (y_clip is None or y <= y_clip):
                pts.append((float(x), float(y)))
        return pts

    def excess(self, x: float, y: float, ex: float = 0.0, ey: float = 0.0) -> float:
        """How far (x, y) lies on the wrong side, after allowing the error box; <= 0 means fine."""
        if self.vertical:
            c = self.x0
            return (x - ex - c) if self.side == "left" else (c - x - ex)
        lo, hi = max(self.x0, x - ex), min(self.x1, x + ex)
        if lo > hi:
            return -math.inf
        ys = [self.f(t) for t in {lo, hi, min(max(x, lo), hi)}]
        ys = [t for t in ys if not math.isnan(t)]  # +-inf is a genuine pole
        if not ys:
            return -math.inf
        if self.side == "below":
            return y - ey - max(ys)
        return min(ys) - (y + ey)


def _kubota_y(x: float) -> float:
    if x <= 2.0:
        return 0.0
    phi, deg = solve_kubota_phi(min(x, math.pi), 1.0)
    if deg:
        return x * x / (4 * math.pi)
    return x * (x - 2 * math.cos(phi)) / (8 * phi)


def _lb_prd(x: float) -> float:
    s = math.sqrt(max(1 - 4 * x * x, 0.0))
    return 4 * x * math.atan2(2 * x, s) + 2 * s


def _ub_pdr(x: float) -> float:
    t = min(3 * x, 1.0)
    return 2 * math.sqrt(max(1 - t * t, 0.0)) + 2 * math.asin(t)


def _prw_new(x: float) -> float:
    return 2 * math.pi + 2 * math.sqrt(max(4 - x * x, 0.0)) - 4 * math.acos(min(x / 2, 1.0))


def _lb_prw(x: float) -> float:
    return 4 * (math.sqrt(max(1 - x * x / 9, 0.0)) + x / 3 * math.asin(x / 3))


def _arw_new_upper(x: float) -> float:
    return math.pi - 2 * math.acos(min(x / 2, 1.0)) + 0.5 * x * math.sqrt(max(4 - x * x, 0.0))


def _arw_lower_R(x: float) -> float:
    q = x - 1
    return (math.pi - math.acos(max(min(q, 1.0), -1.0))) * q * q + q * math.sqrt(max(1 - q * q, 0.0))


def _iso_g1(x: float) -> float:
    if x <= 2:
        return math.inf
    return x**1.5 / ((x - 2) * math.sqrt(4 - x))


def _over(x: float, num: float) -> float:
    return num / (x - 2) if x > 2 else math.inf


def _arw_lower(x: float) -> float:
    return math.pi + 3 * (math.sqrt(max(x * x - 2 * x, 0.0)) + math.asin(min(1.0, 1 / (x - 1))) - math.pi / 2)


def _prw_lower(x: float) -> float:
    return 6 * (math.sqrt(max(x * x - 2 * x, 0.0)) + math.asin(min(1.0, 1 / (x - 1)))) - math.pi


P, V = "proven-boundary", "valid-bound"

_CURVES: dict[str, list[Curve]] = {
    "ApD": [
        Curve("ApDKubota", "ApDKubota", P, "below", 2.0, math.pi, _kubota_y, label="upper boundary (lenses)"),
        Curve(
            "ApDKubota2",
            "ApDKubota2",
            P,
            "above",
            2.0,
            3.0,
            lambda x: (x - 2) * math.sqrt(max(4 * x - x * x, 0.0)) / 4,
            label="lower boundary (isosceles triangles)",
        ),
        Curve(
            "pD_upper",
            "pD_upper",
            P,
            "left",
            math.pi,
            math.pi,
            y0=(math.pi - SQRT3) / 2,
            y1=math.pi / 4,
            label="constant width",
        ),
        Curve("pD_lower", "pD_lower", V, "right", 2.0, 2.0, y0=0.0, y1=math.pi / 4, label="p = 2D"),
        Curve("ApDKubota3", "ApDKubota3", V, "above", 3.0, math.pi, lambda x: SQRT3 * (x - 2) / 4, label="Kubota, 3D <= p"),
        Curve("isoperimetric", "isoperimetric", V, "below", 2.0, math.pi, lambda x: x * x / (4 * math.pi), label="isoperimetric"),
    ],
    "pDr": [
        Curve("pD_upper_cw", "pD_upper", P, "below", RT_R_OVER_D, 0.5, lambda x: math.pi, label="constant width"),
        Curve("LB_prD", "LB_prD", P, "above", 0.0, 0.5, _lb_prd, label="lower boundary (stadium hulls)"),
        Curve("pD_upper", "pD_upper", V, "below", 0.0, 0.5, lambda x: math.pi, label="p = pi D"),
        Curve("pD_lower", "pD_lower", V, "above", 0.0, 0.5, lambda x: 2.0, label="p = 2D"),
        Curve("UB_pDr_2", "UB_pDr_2", V, "below", 0.0, 0.5, _ub_pdr, label="via Kubota and Steinhagen"),
        Curve("pDrHenk", "pDrHenk", V, "below", 0.0, 0.5, lambda x: 2 + 4 * x, label="p = 2D + 4r"),
    ],
    "pRw": [
        Curve("pw_cw", "pw", P, "above", RT_W_OVER_R, 2.0, lambda x: math.pi * x, label="constant width"),
        Curve("pRw_NEW", "pRw_NEW", P, "below", 0.0, 2.0, _prw_new, label="upper boundary (slabs)"),
        Curve("pw", "pw", V, "above", 0.0, 2.0, lambda x: math.pi * x, label="p = pi w"),
        Curve("LB_pRw", "LB_pRw", V, "above", 0.0, 2.0, _lb_prw, label="via Steinhagen"),
        Curve("pR_upper", "pR_upper", V, "below", 0.0, 2.0, lambda x: 2 * math.pi, label="p = 2 pi R"),
        Curve("pR_lower", "pR_lower", V, "above", 0.0, 2.0, lambda x: 4.0, label="p = 4R"),
    ],
    "ARw": [
        Curve("ARw_NEW_UPPER", "ARw_NEW_UPPER", P, "below", 0.0, 2.0, _arw_new_upper, label="upper boundary (slabs)"),
        Curve("ARw_LOWER", "ARw_LOWER", V, "above", 1.0, 2.0, _arw_lower_R, label="near the ball"),
        Curve("ARw_old_lower", "ARw_old_lower", V, "above", 0.0, 2.0, lambda x: SQRT3 / 2 * x, label="A = (sqrt3/2) R w"),
        Curve("ARw_old_upper", "ARw_old_upper", V, "below", 0.0, 2.0, lambda x: 2 * x, label="A = 2 R w"),
    ],
    "Arw": [
        Curve("steinhagen_lower", "steinhagen_lower", P, "right", 2.0, 2.0, y0=math.pi, y1=30.0, label="w = 2r"),
        Curve("Arw_upper", "Arw_upper", P, "below", 2.0, 3.0, _iso_g1, label="upper boundary (isosceles triangles)"),
        Curve("Arw_nonsharp_1", "Arw_nonsharp_1", V, "below", 2.0, 3.0, lambda x: _over(x, x**3 / 4), label="Scott"),
        Curve(
            "Arw_nonsharp_2", "Arw_nonsharp_2", V, "below", 2.0, 3.0, lambda x: _over(x, x * x / SQRT3), label="Scott"
        ),
        Curve("Arw_lower", "Arw_lower", V, "above", 2.0, 3.0, _arw_lower, label="lower bound"),
    ],
    "prw": [
        Curve("steinhagen_lower", "steinhagen_lower", P, "right", 2.0, 2.0, y0=2 * math.pi, y1=60.0, label="w = 2r"),
        Curve("prw_upper", "prw_upper", P, "below", 2.0, 3.0, lambda x: 2 * _iso_g1(x), label="upper boundary (isosceles triangles)"),
        Curve("prw_nonsharp", "prw_nonsharp", V, "below", 2.0, 3.0, lambda x: _over(x, 2 * x * x / SQRT3), label="Scott"),
        Curve("pw_cw", "pw", P, "above", 2.0, RT_W_OVER_r, lambda x: math.pi * x, label="constant width"),
        Curve("prw_lower", "prw_lower", V, "above", 2.0, 3.0, _prw_lower, label="lower bound"),
    ],
}


def known_curves(spec: DiagramSpec | str) -> list[Curve]:
    name = spec if isinstance(spec, str) else spec.name
    return list(_CURVES[get_diagram(name).name])


def curve_value(spec: DiagramSpec | str, curve_id: str, x: float) -> float:
    for c in known_curves(spec):
        if c.id == curve_id and not c.vertical:
            return c.f(x)
    raise DiagramError(f"no graph curve {curve_id!r}")


def outside_proven(spec: DiagramSpec, fv: FunctionalVector, tol: float = 1e-9) -> list[tuple[str, float]]:
    """Proven curves that the body's point crosses beyond ``tol`` plus its error box."""
    x, y = map_point(spec, fv)
    ex, ey = point_error(spec, fv)
    bad = []
    for c in known_curves(spec):
        if c.style != P:
            continue
        e = c.excess(x, y, ex, ey)
        if e > tol * max(1.0, abs(y)):
            bad.append((c.id, e))
    return bad


# ---------------------------------------------------------------------------
# body generators


def random_convex_polygon(n: int, seed: int) -> ArcGon:
    """Hull of ``n`` uniform points in the unit disk (redrawn until it has 3+ vertices)."""
    if n < 3:
        raise DiagramError("n must be >= 3")
    rng = np.random.default_rng(seed)
    while True:
        rad = np.sqrt(rng.uniform(size=n))
        ang = rng.uniform(0, 2 * math.pi, size=n)
        hull = convex_hull(np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]))
        if len(hull.vertices) >= 3:
            return hull


def minkowski_sum(a: ArcGon, b: ArcGon, la: float = 1.0, lb: float = 1.0) -> ArcGon:
    pa, pb = la * np.asarray(a.vertices), lb * np.asarray(b.vertices)
    return convex_hull((pa[:, None, :] + pb[None, :, :]).reshape(-1, 2))


_PARAM_FAMILIES: list[bodies.WitnessFamily] = []
for _fams in bodies.WITNESSES.values():
    for _f in _fams:
        if _f not in _PARAM_FAMILIES:
            _PARAM_FAMILIES.append(_f)


def _random_witness(rng: np.random.Generator) -> ArcGon:
    fam = _PARAM_FAMILIES[int(rng.integers(len(_PARAM_FAMILIES)))]
    if fam.param is None:
        spec = bodies.BodySpec.named(fam.family, **fam.fixed)
    else:
        t = float(rng.uniform(fam.lo, fam.hi))
        if fam.open_lo and t <= fam.lo:
            t = fam.hi
        spec = bodies.BodySpec.named(fam.family, **fam.fixed, **{fam.param: t})
    body = bodies.construct(spec)
    return body if body.is_polygon else discretize(body, 1e-4)


def _perturbed_witness(rng: np.random.Generator) -> ArcGon:
    base = _random_witness(rng)
    pts = np.asarray(base.vertices, float)
    if len(pts) < 3:
        pts = np.vstack([pts, pts.mean(axis=0)])
    scale = max(np.ptp(pts[:, 0]), np.ptp(pts[:, 1]), 1e-9)
    sigma = scale * 10 ** rng.uniform(-4, -1)
    pts = pts + rng.normal(scale=sigma, size=pts.shape)
    if rng.uniform() < 0.5:  # random affine distortion
        m = np.eye(2) + rng.normal(scale=0.15, size=(2, 2))
        pts = pts @ m.T
    return convex_hull(pts)


def _mix(rng: np.random.Generator) -> ArcGon:
    def piece() -> ArcGon:
        if rng.uniform() < 0.5:
            return random_convex_polygon(int(rng.integers(3, 12)), int(rng.integers(2**62)))
        return _random_witness(rng)

    a, b = piece(), piece()
    lam = float(rng.uniform(0.05, 0.95))
    return minkowski_sum(a, b, lam, 1 - lam)


GENERATORS: dict[str, Callable[[np.random.Generator], ArcGon]] = {
    "random_polygons": lambda rng: random_convex_polygon(int(rng.integers(3, 40)), int(rng.integers(2**62))),
    "perturbed_witnesses": _perturbed_witness,
    "polygon_minkowski_mixes": _mix,
}


def regenerate(tag: str, seed: int) -> ArcGon:
    """The body behind a cloud row."""
    try:
        gen = GENERATORS[tag]
    except KeyError:
        raise DiagramError(f"unknown generator {tag!r}") from None
    return gen(np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# point clouds


@dataclass(frozen=True)
class CloudRow:
    x: float
    y: float
    body_id: str
    generator_tag: str
    seed: int


@dataclass
class PointCloud:
    diagram: str
    rows: list[CloudRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def xs(self) -> np.ndarray:
        return np.array([r.x for r in self.rows])

    def ys(self) -> np.ndarray:
        return np.array([r.y for r in self.rows])


def _row_seed(seed: int, k: int) -> int:
    return int(np.random.SeedSequence([seed, k]).generate_state(1, np.uint64)[0] >> 1)


def sample_bodies(generators: Iterable[str], n: int, seed: int) -> Iterator[tuple[str, int, ArcGon]]:
    """Round-robin over the generators; every body is reproducible from (tag, row seed)."""
    tags = list(generators)
    if not tags:
        raise DiagramError("at least one generator required")
    for t in tags:
        if t not in GENERATORS:
            raise DiagramError(f"unknown generator {t!r}")
    k = 0
    while True:
        tag = tags[k % len(tags)]
        s = _row_seed(seed, k)
        k += 1
        try:
            body = regenerate(tag, s)
        except (InvalidBodyError, DegeneratePointSetError):
            continue
        yield tag, s, body
        n -= 1
        if n <= 0:
            return


def sample_cloud(
    spec: DiagramSpec | str,
    generators: Iterable[str] = tuple(GENERATORS),
    n: int = 1000,
    seed: int = 0,
    check: bool = True,
) -> PointCloud:
    """``n`` diagram points; any catalog violation or proven-curve crossing aborts with CloudViolation."""
    spec = get_diagram(spec) if isinstance(spec, str) else spec
    return sample_clouds([spec], generators, n, seed, check)[spec.name]


def sample_clouds(
    specs: Iterable[DiagramSpec | str],
    generators: Iterable[str] = tuple(GENERATORS),
    n: int = 1000,
    seed: int = 0,
    check: bool = True,
) -> dict[str, PointCloud]:
    """Several diagrams from one body stream; each cloud equals its own ``sample_cloud`` run."""
    specs = [get_diagram(s) if isinstance(s, str) else s for s in specs]
    if n < 1:
        raise DiagramError("N must be >= 1")
    clouds = {s.name: PointCloud(s.name) for s in specs}
    stream = sample_bodies(generators, 10**12, seed)
    while any(len(c) < n for c in clouds.values()):
        tag, s, body = next(stream)
        fv = evaluate(body)
        body_id = f"{tag}:{s}"
        if check:
            bad = violations(check_all(fv))
            if bad:
                raise CloudViolation(f"VIOLATION on {body_id}: {[r.id for r in bad]}", bad)
        for spec in specs:
            cloud = clouds[spec.name]
            if len(cloud) >= n:
                continue
            try:
                x, y = map_point(spec, fv)
            except DegenerateBodyError:
                continue
            if check:
                crossed = outside_proven(spec, fv)
                if crossed:
                    raise CloudViolation(f"VIOLATION on {body_id}: point outside proven {spec.name} curves {crossed}")
            cloud.rows.append(CloudRow(x, y, body_id, tag, s))
    return clouds


def export_csv(cloud: PointCloud) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "body_id", "generator_tag", "seed"])
    for r in cloud.rows:
        w.writerow([repr(r.x), repr(r.y), r.body_id, r.generator_tag, r.seed])
    return buf.getvalue()


def import_csv(text: str, diagram: str = "") -> PointCloud:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != ["x", "y", "body_id", "generator_tag", "seed"]:
        raise DiagramError("unexpected CSV header")
    rows = [CloudRow(float(r["x"]), float(r["y"]), r["body_id"], r["generator_tag"], int(r["seed"])) for r in reader]
    return PointCloud(diagram, rows)


# ---------------------------------------------------------------------------
# boundary search


@dataclass
class PushResult:
    body: ArcGon
    point: tuple[float, float]
    history: list[float]
    label: str = "empirical envelope"


def _closed_x(spec: DiagramSpec, fam: bodies.WitnessFamily, t: float) -> float:
    s = bodies.BodySpec.named(fam.family, **fam.fixed, **{fam.param: t})
    v = bodies.closed_form(s).values
    if not all(f in v for f in FIELDS) or v[spec.x[1]] <= 0:
        return math.nan
    return _apply(spec.x, v)


def _targeted_witnesses(spec: DiagramSpec, x_target: float, grid: int = 65) -> list[ArcGon]:
    """Witness bodies whose closed-form x equals ``x_target`` (bisection on the family parameter)."""
    out: list[ArcGon] = []
    for fam in _PARAM_FAMILIES:
        if fam.param is None:
            continue
        ts = [t for t, _ in fam.grid(grid)]
        try:
            xs = [_closed_x(spec, fam, t) for t in ts]
        except (bodies.BodySpecError, KeyError, ValueError, ZeroDivisionError):
            continue
        for (a, xa), (b, xb) in zip(zip(ts, xs), zip(ts[1:], xs[1:])):
            if not (math.isfinite(xa) and math.isfinite(xb)) or (xa - x_target) * (xb - x_target) > 0:
                continue
            for _ in range(60):
                m = 0.5 * (a + b)
                xm = _closed_x(spec, fam, m)
                if (xa - x_target) * (xm - x_target) <= 0:
                    b = m
                else:
                    a, xa = m, xm
            body = bodies.construct(bodies.BodySpec.named(fam.family, **fam.fixed, **{fam.param: 0.5 * (a + b)}))
            if not body.is_segment:
                out.append(body if body.is_polygon else discretize(body, 1e-4))
    return out


def _seed_pool(rng: np.random.Generator, size: int = 48) -> list[ArcGon]:
    pool: list[ArcGon] = []
    for fam in _PARAM_FAMILIES:
        for _, spec in fam.grid(9):
            b = bodies.construct(spec)
            if not b.is_segment:
                pool.append(b if b.is_polygon else discretize(b, 1e-4))
    for _ in range(size):
        pool.append(random_convex_polygon(int(rng.integers(3, 16)), int(rng.integers(2**62))))
    return pool


def boundary_push(
    spec: DiagramSpec | str,
    direction: str,
    x_target: float,
    iterations: int = 10_000,
    seed: int = 0,
    x_tol: float = 1e-3,
) -> PushResult:
    """Simulated annealing on polygon vertices pushing y up or down at fixed x (penalised)."""
    spec = get_diagram(spec) if isinstance(spec, str) else spec
    if direction not in ("up", "down"):
        raise DiagramError("direction must be 'up' or 'down'")
    if not spec.x_range[0] <= x_target <= spec.x_range[1]:
        raise DiagramError(f"infeasible x_target {x_target} for {spec.name}")
    sgn = 1.0 if direction == "up" else -1.0
    rng = np.random.default_rng(seed)
    penalty = 100.0 * (spec.y_range[1] - spec.y_range[0])

    def score(body: ArcGon) -> tuple[float, float, float, FunctionalVector] | None:
        try:
            fv = evaluate(body)
            x, y = map_point(spec, fv)
        except (DiagramError, InvalidBodyError, DegeneratePointSetError):
            return None
        miss = max(0.0, abs(x - x_target) - x_tol)
        return sgn * y - penalty * miss, x, y, fv

    pool = _targeted_witnesses(spec, x_target) + _seed_pool(rng)
    scored = [(s, b) for b in pool if (s := score(b)) is not None]
    scored.sort(key=lambda t: -t[0][0])
    (cur_s, cx, cy, cfv), cur = scored[0]
    best, best_pt = None, None
    history: list[float] = []
    if abs(cx - x_target) <= x_tol:
        best, best_pt = cur, (cx, cy)
    pts = np.asarray(cur.vertices, float)
    t0, t1 = 1e-2 * max(abs(cy), 1.0), 1e-7 * max(abs(cy), 1.0)
    for k in range(iterations):
        frac = k / max(iterations - 1, 1)
        temp = t0 * (t1 / t0) ** frac
        step = cfv.D * 0.05 * (1e-4 / 0.05) ** frac
        cand = pts.copy()
        if rng.uniform() < 0.8:
            i = int(rng.integers(len(cand)))
            cand[i] += rng.normal(scale=step, size=2)
        else:
            cand += rng.normal(scale=0.3 * step, size=cand.shape)
        try:
            body = convex_hull(cand)
        except DegeneratePointSetError:
            continue
        if len(body.vertices) < 3:
            continue
        res = score(body)
        if res is None:
            continue
        s, x, y, fv = res
        if s >= cur_s or rng.uniform() < math.exp((s - cur_s) / temp):
            cur_s, cur, cfv, pts = s, body, fv, np.asarray(body.vertices, float)
            if abs(x - x_target) <= x_tol and (best_pt is None or sgn * y > sgn * best_pt[1]):
                crossed = outside_proven(spec, fv)
                if crossed:
                    raise CloudViolation(f"search crossed proven curves {crossed}")
                best, best_pt = body, (x, y)
        history.append(best_pt[1] if best_pt is not None else math.nan)
    if best is None or best_pt is None:
        raise DiagramError(f"no feasible body found near x = {x_target}")
    return PushResult(best, best_pt, history)


# ---------------------------------------------------------------------------
# SVG


_MARKERS = {
    "B": lambda: bodies.BodySpec.named("ball", rho=1.0),
    "T": lambda: bodies.BodySpec.named("equilateral_triangle", R=1.0),
    "RT": lambda: bodies.BodySpec.named("reuleaux_triangle", width=2.0),
    "L": lambda: bodies.BodySpec.named("segment", len=2.0),
}


def special_points(spec: DiagramSpec) -> list[tuple[str, float, float]]:
    out = []
    for name, make in _MARKERS.items():
        s = make()
        cf = bodies.closed_form(s).values
        fv = FunctionalVector(**{f: cf[f] for f in FIELDS})
        try:
            x, y = map_point(spec, fv)
        except DegenerateBodyError:
            if name == "L" and spec.name == "pDr":
                x, y = 0.0, 2.0  # limit of thin stadium hulls
            else:
                continue
        out.append((name, x, y))
    return out


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(
    spec: DiagramSpec | str,
    cloud: PointCloud | None = None,
    curves: list[Curve] | None = None,
    width: int = 640,
    height: int = 480,
) -> str:
    spec = get_diagram(spec) if isinstance(spec, str) else spec
    curves = known_curves(spec) if curves is None else curves
    (x0, x1), (y0, y1) = spec.x_range, spec.y_range
    ml, mr, mt, mb = 60, 170, 20, 50
    pw, ph = width - ml - mr, height - mt - mb

    def sx(x: float) -> float:
        return ml + (x - x0) / (x1 - x0) * pw

    def sy(y: float) -> float:
        return mt + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f"<title>{_esc(spec.name)} diagram: x = {_esc(spec.x_label)}, y = {_esc(spec.y_label)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
        f'<defs><clipPath id="plot"><rect x="{ml}" y="{mt}" width="{pw}" height="{ph}"/></clipPath></defs>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in np.linspace(x0, x1, 6):
        out.append(f'<line x1="{sx(t):.2f}" y1="{mt + ph}" x2="{sx(t):.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{mt + ph + 18}" font-size="11" text-anchor="middle">{t:.3g}</text>')
    for t in np.linspace(y0, y1, 6):
        out.append(f'<line x1="{ml - 5}" y1="{sy(t):.2f}" x2="{ml}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{sy(t) + 4:.2f}" font-size="11" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 10}" font-size="13" text-anchor="middle">{_esc(spec.x_label)}</text>')
    out.append(
        f'<text x="15" y="{mt + ph / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 15 {mt + ph / 2})">{_esc(spec.y_label)}</text>'
    )
    out.append('<g clip-path="url(#plot)">')
    if cloud is not None:
        out.append('<g class="cloud" fill="#4a7ab5" fill-opacity="0.5">')
        for r in cloud.rows:
            out.append(f'<circle cx="{sx(r.x):.2f}" cy="{sy(r.y):.2f}" r="1.2"/>')
        out.append("</g>")
    palette = ["#c0392b", "#27ae60", "#8e44ad", "#d35400", "#2c3e50", "#16a085"]
    for i, c in enumerate(curves):
        pts = c.polyline(y_clip=y1 + (y1 - y0))
        if len(pts) < 2:
            continue
        dash = "" if c.style == P else ' stroke-dasharray="6 4"'
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(
            f'<polyline class="curve" data-id="{_esc(c.id)}" data-ref="{_esc(c.ref)}" data-style="{c.style}" '
            f'points="{path}" fill="none" stroke="{palette[i % len(palette)]}" stroke-width="1.6"{dash}/>'
        )
    for name, x, y in special_points(spec):
        out.append(f'<circle class="marker" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3.5" fill="black"/>')
        out.append(f'<text x="{sx(x) + 6:.2f}" y="{sy(y) - 6:.2f}" font-size="12">{_esc(name)}</text>')
    out.append("</g>")
    lx = ml + pw + 10
    for i, c in enumerate(curves):
        ly = mt + 14 + 18 * i
        dash = "" if c.style == P else ' stroke-dasharray="6 4"'
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" stroke="{palette[i % len(palette)]}" '
            f'stroke-width="1.6"{dash}/>'
        )
        out.append(f'<text x="{lx + 30}" y="{ly}" font-size="11">{_esc(c.id)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
