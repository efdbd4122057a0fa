"""Named witness bodies: exact constructions and closed-form functionals.

Every family is built exactly as an :class:`~santalo.geometry.ArcGon` and
carries the closed-form values that the test-suite and the sharpness
certifier compare numerics against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import Arc, ArcGon, disk, segment

SQRT3 = math.sqrt(3.0)


class BodySpecError(ValueError):
    """Unknown family or parameters outside the family's validity range."""


@dataclass(frozen=True)
class BodySpec:
    """Either a raw arc-gon or a named parametric body."""

    name: str = "raw"
    params: dict[str, float] = field(default_factory=dict)
    body: ArcGon | None = None

    @property
    def kind(self) -> str:
        return "raw" if self.body is not None else "named"

    @classmethod
    def raw(cls, body: ArcGon) -> BodySpec:
        return cls("raw", {}, body)

    @classmethod
    def named(cls, name: str, **params: float) -> BodySpec:
        if name not in FAMILIES:
            raise BodySpecError(f"unknown body family {name!r}")
        return cls(name, {k: float(v) for k, v in params.items()})

    @property
    def label(self) -> str:
        if self.kind == "raw":
            return "raw"
        args = ",".join(f"{k}={v:.12g}" for k, v in sorted(self.params.items()))
        return f"{self.name}({args})"

    def to_dict(self) -> dict:
        if self.body is not None:
            return self.body.to_dict()
        return {"kind": "named", "name": self.name, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: dict) -> BodySpec:
        kind = data.get("kind")
        if kind == "arcgon":
            return cls.raw(ArcGon.from_dict(data))
        if kind == "named":
            params = data.get("params", {})
            if not isinstance(params, dict):
                raise BodySpecError("params must be an object")
            return cls.named(str(data["name"]), **params)
        raise BodySpecError(f"unknown body kind {kind!r}")


@dataclass(frozen=True)
class ClosedFormValues:
    values: dict[str, float]
    provenance: dict[str, str]

    @property
    def numeric_fields(self) -> list[str]:
        return [k for k in ("A", "p", "r", "R", "D", "w") if k not in self.values]


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise BodySpecError(msg)


# ---------------------------------------------------------------------------
# constructions


def _ball(rho: float = 1.0) -> ArcGon:
    _need(rho > 0, "ball: rho must be > 0")
    return disk((0.0, 0.0), rho)


def _segment(len: float = 2.0) -> ArcGon:  # noqa: A002 - JSON parameter name
    _need(len > 0, "segment: len must be > 0")
    return segment((-len / 2, 0.0), (len / 2, 0.0))


def _triangle_R(R: float | None, r: float | None) -> float:
    _need((R is None) != (r is None), "equilateral_triangle: give exactly one of R, r")
    big = R if R is not None else 2.0 * r  # type: ignore[operator]
    _need(big > 0, "equilateral_triangle: size must be > 0")
    return big


def _equilateral_triangle(R: float | None = None, r: float | None = None) -> ArcGon:
    big = _triangle_R(R, r)
    return ArcGon([(big * math.cos(t), big * math.sin(t)) for t in (math.pi / 2, 7 * math.pi / 6, 11 * math.pi / 6)])


def _reuleaux_polygon(k: float = 3, width: float = 2.0) -> ArcGon:
    k_i = int(round(k))
    _need(k_i == k and k_i >= 3 and k_i % 2 == 1, "reuleaux_polygon: k must be an odd integer >= 3")
    _need(width > 0, "reuleaux_polygon: width must be > 0")
    rho = width / (2.0 * math.cos(math.pi / (2 * k_i)))
    vs = [(rho * math.cos(math.pi / 2 + 2 * math.pi * j / k_i), rho * math.sin(math.pi / 2 + 2 * math.pi * j / k_i)) for j in range(k_i)]
    half = (k_i + 1) // 2
    arcs = [Arc(vs[(j + half) % k_i], width) for j in range(k_i)]
    return ArcGon(vs, arcs)


def _reuleaux_triangle(width: float = 2.0) -> ArcGon:
    return _reuleaux_polygon(3, width)


LENS_MIN_PHI = 1e-6
MIN_THICKNESS = 1e-12  # thinner bodies are indistinguishable from segments in floating point


def _lens(D: float = 2.0, phi: float = math.pi / 4) -> ArcGon:
    _need(D > 0, "lens: D must be > 0")
    _need(0 < phi <= math.pi / 2, "lens: need 0 < phi <= pi/2")
    # thinner lenses lose their width to rounding; use segment() for the limit
    _need(phi >= LENS_MIN_PHI, f"lens: need phi >= {LENS_MIN_PHI:g} (numerically a segment below)")
    rho = D / (2.0 * math.sin(phi))
    off = rho * math.cos(phi)
    bulge = D / 2 * math.tan(phi / 2)  # rho - off without cancellation
    vs = [(D / 2, 0.0), (0.0, bulge), (-D / 2, 0.0), (0.0, -bulge)]
    top, bottom = Arc((0.0, -off), rho), Arc((0.0, off), rho)
    return ArcGon(vs, [top, top, bottom, bottom])


def _slab_of_ball(w: float = 1.0, R: float = 1.0) -> ArcGon:
    _need(R > 0, "slab_of_ball: R must be > 0")
    _need(0 <= w <= 2 * R, "slab_of_ball: need 0 <= w <= 2R")
    if w == 0:
        return segment((-R, 0.0), (R, 0.0))
    if w == 2 * R:
        return disk((0.0, 0.0), R)
    c = w / 2
    x0 = math.sqrt(R * R - c * c)
    o = Arc((0.0, 0.0), R)
    return ArcGon([(x0, -c), (x0, c), (-x0, c), (-x0, -c)], [o, None, o, None])


def _stadium_hull(r: float = 0.5, D: float = 2.0) -> ArcGon:
    _need(D > 0, "stadium_hull: D must be > 0")
    _need(0 <= r <= D / 2, "stadium_hull: need 0 <= r <= D/2")
    L = D / 2
    if r == 0:
        return segment((-L, 0.0), (L, 0.0))
    _need(r >= MIN_THICKNESS * L, f"stadium_hull: need r = 0 or r >= {MIN_THICKNESS:g} D/2 (numerically a segment below)")
    if r == L:
        return disk((0.0, 0.0), L)
    ct = r / L
    st = math.sqrt(1.0 - ct * ct)
    tx, ty = r * ct, r * st
    o = Arc((0.0, 0.0), r)
    vs = [(L, 0.0), (tx, ty), (-tx, ty), (-L, 0.0), (-tx, -ty), (tx, -ty)]
    return ArcGon(vs, [None, o, None, None, o, None])


def _two_point_ball(r: float = 0.5, R: float = 1.0) -> ArcGon:
    _need(R > 0, "two_point_ball: R must be > 0")
    _need(0 <= r <= R, "two_point_ball: need 0 <= r <= R")
    return _stadium_hull(r, 2 * R)


def _cap_cone(w: float = 1.5, R: float = 1.0) -> ArcGon:
    _need(R > 0, "cap_cone: R must be > 0")
    _need(R <= w <= 2 * R, "cap_cone: need R <= w <= 2R")
    rho = w - R
    if rho == 0:
        return segment((-R, 0.0), (0.0, 0.0))
    _need(rho >= MIN_THICKNESS * R, f"cap_cone: need w = R or w - R >= {MIN_THICKNESS:g} R (numerically a segment below)")
    if rho == R:
        return disk((0.0, 0.0), R)
    th = math.acos(-rho / R)
    o = Arc((0.0, 0.0), rho)
    vs = [(-R, 0.0), (rho * math.cos(th), -rho * math.sin(th)), (rho, 0.0), (rho * math.cos(th), rho * math.sin(th))]
    return ArcGon(vs, [None, o, o, None])


def _isosceles_shape(w: float, r: float) -> tuple[float, float]:
    """Half-base and height of the sharp isosceles triangle, in units of ``r``."""
    x = w / r
    a = math.sqrt(x / (4.0 - x))
    alpha = 2.0 * math.atan(1.0 / a)
    return a, a * math.tan(alpha)


def _sharp_isosceles(w: float = 3.0, r: float = 1.0) -> ArcGon:
    _need(r > 0, "sharp_isosceles: r must be > 0")
    _need(2 * r < w <= 3 * r, "sharp_isosceles: need 2r < w <= 3r")
    a, h = _isosceles_shape(w, r)
    return ArcGon([(-a * r, -r), (a * r, -r), (0.0, (h - 1.0) * r)])


# ---------------------------------------------------------------------------
# closed forms


def _cf_ball(rho: float = 1.0) -> dict[str, float]:
    return {"A": math.pi * rho * rho, "p": 2 * math.pi * rho, "r": rho, "R": rho, "D": 2 * rho, "w": 2 * rho}


def _cf_segment(len: float = 2.0) -> dict[str, float]:  # noqa: A002
    return {"A": 0.0, "p": 2 * len, "r": 0.0, "R": len / 2, "D": len, "w": 0.0}


def _cf_triangle(R: float | None = None, r: float | None = None) -> dict[str, float]:
    big = _triangle_R(R, r)
    return {
        "A": 3 * SQRT3 / 4 * big * big,
        "p": 3 * SQRT3 * big,
        "r": big / 2,
        "R": big,
        "D": SQRT3 * big,
        "w": 1.5 * big,
    }


def _cf_reuleaux_polygon(k: float = 3, width: float = 2.0) -> dict[str, float]:
    k_i = int(round(k))
    rho = width / (2.0 * math.cos(math.pi / (2 * k_i)))
    a = 0.5 * k_i * rho * rho * math.sin(2 * math.pi / k_i) + 0.5 * k_i * width**2 * (math.pi / k_i - math.sin(math.pi / k_i))
    return {"A": a, "p": math.pi * width, "r": width - rho, "R": rho, "D": width, "w": width}


def _cf_reuleaux_triangle(width: float = 2.0) -> dict[str, float]:
    return _cf_reuleaux_polygon(3, width)


def _cf_lens(D: float = 2.0, phi: float = math.pi / 4) -> dict[str, float]:
    rho = D / (2.0 * math.sin(phi))
    thick = 2 * rho * (1 - math.cos(phi))
    return {
        "A": rho * rho * (2 * phi - math.sin(2 * phi)),
        "p": 4 * phi * rho,
        "r": thick / 2,
        "R": D / 2,
        "D": D,
        "w": thick,
    }


def _cf_slab(w: float = 1.0, R: float = 1.0) -> dict[str, float]:
    s = math.sqrt(max(4 * R * R - w * w, 0.0))
    ac = math.acos(min(w / (2 * R), 1.0))
    return {
        "A": R * R * (math.pi - 2 * ac) + 0.5 * w * s,
        "p": 2 * R * (math.pi - 2 * ac) + 2 * s,
        "r": w / 2,
        "R": R,
        "D": 2 * R,
        "w": w,
    }


def _cf_stadium(r: float = 0.5, D: float = 2.0) -> dict[str, float]:
    L = D / 2
    s = math.sqrt(max(L * L - r * r, 0.0))
    asn = math.asin(min(r / L, 1.0))
    return {"A": 2 * r * s + 2 * r * r * asn, "p": 4 * (s + r * asn), "r": r, "R": L, "D": D, "w": 2 * r}


def _cf_two_point_ball(r: float = 0.5, R: float = 1.0) -> dict[str, float]:
    return _cf_stadium(r, 2 * R)


def _cf_cap_cone(w: float = 1.5, R: float = 1.0) -> dict[str, float]:
    rho = w - R
    s = math.sqrt(max(R * R - rho * rho, 0.0))
    ac = math.acos(rho / R)
    return {
        "A": (math.pi - ac) * rho * rho + rho * s,
        "p": 2 * s + 2 * rho * (math.pi - ac),
        "r": rho,
        "R": (R + rho) / 2,
        "D": R + rho,
        "w": 2 * rho,
    }


def _cf_sharp_isosceles(w: float = 3.0, r: float = 1.0) -> dict[str, float]:
    x = w / r
    a, h = _isosceles_shape(w, r)
    leg = math.hypot(a, h)
    g1 = x * math.sqrt(x) / ((x - 2) * math.sqrt(4 - x))
    area_unit = a * h
    return {
        "A": g1 * r * r,
        "p": 2 * g1 * r,
        "r": r,
        "R": leg * leg * 2 * a / (4 * area_unit) * r,
        "D": leg * r,
        "w": w,
    }


@dataclass(frozen=True)
class Family:
    build: Callable[..., ArcGon]
    closed: Callable[..., dict[str, float]]
    provenance: str


FAMILIES: dict[str, Family] = {
    "ball": Family(_ball, _cf_ball, "disk of radius rho"),
    "segment": Family(_segment, _cf_segment, "segment of length len"),
    "equilateral_triangle": Family(_equilateral_triangle, _cf_triangle, "regular triangle geometry"),
    "reuleaux_polygon": Family(_reuleaux_polygon, _cf_reuleaux_polygon, "regular k-gon plus k circular segments"),
    "reuleaux_triangle": Family(_reuleaux_triangle, _cf_reuleaux_triangle, "Reuleaux polygon with k=3"),
    "lens": Family(_lens, _cf_lens, "two circular segments of half-angle phi"),
    "slab_of_ball": Family(_slab_of_ball, _cf_slab, "ball cut by |y| <= w/2"),
    "stadium_hull": Family(_stadium_hull, _cf_stadium, "hull of a segment and a concentric disk"),
    "two_point_ball": Family(_two_point_ball, _cf_two_point_ball, "stadium hull with D = 2R"),
    "cap_cone": Family(_cap_cone, _cf_cap_cone, "hull of a boundary point and a concentric disk of radius w-R"),
    "sharp_isosceles": Family(_sharp_isosceles, _cf_sharp_isosceles, "isosceles triangle with long equal legs"),
}


def construct(spec: BodySpec) -> ArcGon:
    if spec.body is not None:
        return spec.body
    fam = FAMILIES.get(spec.name)
    if fam is None:
        raise BodySpecError(f"unknown body family {spec.name!r}")
    try:
        return fam.build(**spec.params)
    except TypeError as exc:
        raise BodySpecError(f"{spec.name}: bad parameters {sorted(spec.params)}") from exc


def closed_form(spec: BodySpec) -> ClosedFormValues:
    if spec.kind == "raw":
        raise BodySpecError("no closed form")
    construct(spec)  # range checks
    fam = FAMILIES[spec.name]
    vals = fam.closed(**spec.params)
    return ClosedFormValues(vals, {k: fam.provenance for k in vals})


# ---------------------------------------------------------------------------
# equality witnesses


@dataclass(frozen=True)
class WitnessFamily:
    """A one-parameter family (or a single body when ``param`` is None)."""

    family: str
    fixed: dict[str, float]
    param: str | None = None
    lo: float = 0.0
    hi: float = 0.0
    open_lo: bool = False

    def grid(self, n: int) -> list[tuple[float | None, BodySpec]]:
        if self.param is None:
            return [(None, BodySpec.named(self.family, **self.fixed))]
        if self.open_lo:
            ts = [self.lo + (self.hi - self.lo) * (k + 1) / n for k in range(n)]
        else:
            ts = np.linspace(self.lo, self.hi, n).tolist() if n > 1 else [self.hi]
        return [(t, BodySpec.named(self.family, **self.fixed, **{self.param: t})) for t in ts]

    def describe(self) -> str:
        fixed = ",".join(f"{k}={v:g}" for k, v in self.fixed.items())
        if self.param is None:
            return f"{self.family}({fixed})"
        bracket = "(" if self.open_lo else "["
        rng = f"{self.param} in {bracket}{self.lo:g}, {self.hi:g}]"
        return f"{self.family}({fixed}{',' if fixed else ''}{self.param}); {rng}"


def _single(name: str, **fixed: float) -> WitnessFamily:
    return WitnessFamily(name, fixed)


BALL = _single("ball", rho=1.0)
TRIANGLE = _single("equilateral_triangle", R=1.0)
SEGMENT = _single("segment", len=2.0)
REULEAUX = _single("reuleaux_triangle", width=2.0)
SLAB = WitnessFamily("slab_of_ball", {"R": 1.0}, "w", 0.0, 2.0)
ISOSCELES = WitnessFamily("sharp_isosceles", {"r": 1.0}, "w", 2.0, 3.0, open_lo=True)
CONSTANT_WIDTH = [BALL, REULEAUX, _single("reuleaux_polygon", k=5, width=2.0), _single("reuleaux_polygon", k=7, width=2.0)]

WITNESSES: dict[str, list[WitnessFamily]] = {
    "isoperimetric": [BALL],
    "pal": [TRIANGLE],
    "blaschke_lebesgue": [REULEAUX],
    "area_r_ball": [BALL],
    "area_R_ball": [BALL],
    "pD_lower": [SEGMENT],
    "pD_upper": CONSTANT_WIDTH,
    "p_r_lower": [BALL],
    "pR_lower": [SEGMENT],
    "pR_upper": [BALL],
    "pw": CONSTANT_WIDTH,
    "LW_pRr": [WitnessFamily("two_point_ball", {"R": 1.0}, "r", 0.0, 1.0)],
    "UB_pDw_2": [SLAB],
    "jung": [TRIANGLE, REULEAUX],
    "steinhagen_lower": [BALL],
    "steinhagen_upper": [TRIANGLE],
    "w_2R": [BALL],
    "cw_Rr": [REULEAUX],
    "concentricity_lower": CONSTANT_WIDTH,
    "concentricity_upper": CONSTANT_WIDTH,
    "steinhagen_cw": [REULEAUX],
    "ApDKubota": [WitnessFamily("lens", {"D": 2.0}, "phi", 0.0, math.pi / 2, open_lo=True)],
    "ApDKubota2": [ISOSCELES],
    "ApDKubota3": [TRIANGLE],
    "pDrHenk": [SEGMENT],
    "LB_prD": [WitnessFamily("stadium_hull", {"D": 2.0}, "r", 0.0, 1.0)],
    "UB_pDr_2": [],
    "pRw_NEW": [SLAB],
    "LB_pRw": [SEGMENT],
    "ARw_old_lower": [SEGMENT, TRIANGLE],
    "ARw_old_upper": [SEGMENT],
    "ARw_NEW_UPPER": [SLAB],
    "ARw_LOWER": [BALL],
    "Arw_nonsharp_1": [],
    "Arw_nonsharp_2": [TRIANGLE],
    "prw_nonsharp": [TRIANGLE],
    "Arw_upper": [ISOSCELES],
    "prw_upper": [ISOSCELES],
    "Arw_lower": [BALL, TRIANGLE],
    "prw_lower": [BALL, TRIANGLE],
}


def witnesses_for(inequality_id: str) -> list[WitnessFamily]:
    """Bodies claimed to attain equality; empty when no sharpness claim is made."""
    try:
        return list(WITNESSES[inequality_id])
    except KeyError:
        raise KeyError(f"unknown inequality id {inequality_id!r}") from None
