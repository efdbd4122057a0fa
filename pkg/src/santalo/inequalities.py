"""Catalog of planar inequalities between A, p, r, R, D and w.

Every record is stored as ``lhs <= rhs`` in a cleared-denominator form that is
homogeneous of degree ``degree`` in length, so segments (r = w = A = 0) never
divide by zero. Slack is ``rhs - lhs``; the scale-free ``normalized`` slack
divides it by ``D**degree``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bodies
from .functionals import EPS, FIELDS, FunctionalVector, evaluate, inradius
from .geometry import ArcGon, polygon, require_valid

SQRT3 = math.sqrt(3.0)
HALF_PI = 0.5 * math.pi
CW_TOL = 1e-8
SHARP_TOL = 1e-7

Values = dict[str, float]


class KubotaDomainError(ValueError):
    pass


def _sqrt(x: float) -> float:
    return math.sqrt(x) if x > 0 else 0.0


def _asin(x: float) -> float:
    return math.asin(min(1.0, max(-1.0, x)))


def _acos(x: float) -> float:
    return math.acos(min(1.0, max(-1.0, x)))


def _ratio(num: float, den: float, default: float = 1.0) -> float:
    return num / den if den > 0 else default


def solve_kubota_phi(p: float, D: float) -> tuple[float, bool]:
    """Root of ``2 phi D = p sin(phi)`` in (0, pi]; ``(0, True)`` when p = 2D."""
    if not (D > 0 and 2 * D * (1 - 1e-12) <= p <= math.pi * D * (1 + 1e-12)):
        raise KubotaDomainError(f"p={p!r}, D={D!r} violates 2D <= p <= pi*D")
    if p <= 2 * D * (1 + 1e-14):
        return 0.0, True
    f = lambda phi: 2 * phi * D - p * math.sin(phi)  # noqa: E731
    lo, hi = 1e-9, math.pi
    if f(lo) >= 0:  # p within rounding of 2D
        return 0.0, True
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo if abs(f(lo)) <= abs(f(hi)) else hi, False


def _kubota(v: Values) -> tuple[float, float]:
    A, p, D = v["A"], v["p"], v["D"]
    pc = min(max(p, 2 * D), math.pi * D)
    phi, degenerate = solve_kubota_phi(pc, D)
    if degenerate:
        return 4 * math.pi * A, p * p
    return 8 * phi * A, p * (p - 2 * D * math.cos(phi))


def _lb_prd(v: Values) -> tuple[float, float]:
    r, D = v["r"], v["D"]
    s = _sqrt(D * D - 4 * r * r)
    return 4 * r * math.atan2(2 * r, s) + 2 * s, v["p"]


def _ub_pdr(v: Values) -> tuple[float, float]:
    D = v["D"]
    t = min(3 * v["r"], D)
    return v["p"], 2 * _sqrt(D * D - t * t) + 2 * D * _asin(t / D)


def _arw_lower(v: Values) -> tuple[float, float]:
    r, w = v["r"], v["w"]
    ang = _asin(_ratio(r, w - r)) - HALF_PI
    return math.pi * r * r + 3 * r * _sqrt(w * w - 2 * w * r) + 3 * r * r * ang, v["A"]


def _prw_lower(v: Values) -> tuple[float, float]:
    r, w = v["r"], v["w"]
    return 6 * (_sqrt(w * w - 2 * w * r) + r * _asin(_ratio(r, w - r))) - math.pi * r, v["p"]


def _arw_lower_R(v: Values) -> tuple[float, float]:
    R, rho = v["R"], v["w"] - v["R"]
    return (math.pi - _acos(rho / R)) * rho * rho + rho * _sqrt(R * R - rho * rho), v["A"]


def _in_range(lo: float, hi: float) -> Callable[[Values], bool]:
    def pred(v: Values) -> bool:
        tol = 1e-12 * v["D"]
        return lo * v["D"] - tol <= v["p"] <= hi * v["D"] + tol

    return pred


@dataclass(frozen=True)
class InequalityRecord:
    id: str
    anchor: str
    degree: float
    sides: Callable[[Values], tuple[float, float]]
    form: str
    constant_width: bool = False
    condition: Callable[[Values], bool] | None = None
    condition_text: str = ""

    @property
    def witness_family(self) -> list[bodies.WitnessFamily]:
        return bodies.witnesses_for(self.id)

    def raw_slack(self, v: Values) -> float:
        lhs, rhs = self.sides(v)
        return rhs - lhs

    def rounding(self, v: Values) -> float:
        lhs, rhs = self.sides(v)
        return 64 * EPS * (abs(lhs) + abs(rhs))


def _rec(id_, anchor, degree, sides, form, **kw) -> InequalityRecord:
    return InequalityRecord(id_, anchor, degree, sides, form, **kw)


_CATALOG: tuple[InequalityRecord, ...] = (
    _rec("isoperimetric", "isoperimetric inequality", 2, lambda v: (4 * math.pi * v["A"], v["p"] ** 2), "4 pi A <= p^2"),
    _rec("pal", "Pal's inequality", 2, lambda v: (v["w"] ** 2, SQRT3 * v["A"]), "w^2 <= sqrt(3) A"),
    _rec(
        "blaschke_lebesgue",
        "Blaschke-Lebesgue inequality",
        2,
        lambda v: ((math.pi - SQRT3) * v["w"] ** 2, 2 * v["A"]),
        "(pi - sqrt(3)) w^2 <= 2A",
        constant_width=True,
    ),
    _rec("area_r_ball", "pi r^2 <= A", 2, lambda v: (math.pi * v["r"] ** 2, v["A"]), "pi r^2 <= A"),
    _rec("area_R_ball", "A <= pi R^2", 2, lambda v: (v["A"], math.pi * v["R"] ** 2), "A <= pi R^2"),
    _rec("pD_lower", "2D <= p (trivial)", 1, lambda v: (2 * v["D"], v["p"]), "2D <= p"),
    _rec("pD_upper", "p <= pi D (Barbier)", 1, lambda v: (v["p"], math.pi * v["D"]), "p <= pi D"),
    _rec("p_r_lower", "2 pi r <= p", 1, lambda v: (2 * math.pi * v["r"], v["p"]), "2 pi r <= p"),
    _rec("pR_lower", "4R <= p", 1, lambda v: (4 * v["R"], v["p"]), "4R <= p"),
    _rec("pR_upper", "p <= 2 pi R", 1, lambda v: (v["p"], 2 * math.pi * v["R"]), "p <= 2 pi R"),
    _rec("pw", "Cauchy: pi w <= p", 1, lambda v: (math.pi * v["w"], v["p"]), "pi w <= p"),
    _rec(
        "LW_pRr",
        "perimeter lower bound in R and r",
        1,
        lambda v: (4 * (_sqrt(v["R"] ** 2 - v["r"] ** 2) + v["r"] * _asin(_ratio(v["r"], v["R"], 0.0))), v["p"]),
        "4(sqrt(R^2 - r^2) + r asin(r/R)) <= p",
    ),
    _rec(
        "UB_pDw_2",
        "Kubota's perimeter upper bound in D and w",
        1,
        lambda v: (v["p"], 2 * _sqrt(v["D"] ** 2 - v["w"] ** 2) + 2 * v["D"] * _asin(v["w"] / v["D"])),
        "p <= 2 sqrt(D^2 - w^2) + 2D asin(w/D)",
    ),
    _rec("jung", "Jung's inequality", 1, lambda v: (SQRT3 * v["R"], v["D"]), "sqrt(3) R <= D"),
    _rec("steinhagen_lower", "2r <= w", 1, lambda v: (2 * v["r"], v["w"]), "2r <= w"),
    _rec("steinhagen_upper", "Steinhagen: w <= 3r", 1, lambda v: (v["w"], 3 * v["r"]), "w <= 3r"),
    _rec("w_2R", "w <= 2R", 1, lambda v: (v["w"], 2 * v["R"]), "w <= 2R"),
    _rec(
        "cw_Rr",
        "2R <= (sqrt(3)+1) r for constant width",
        1,
        lambda v: (2 * v["R"], (SQRT3 + 1) * v["r"]),
        "2R <= (sqrt(3) + 1) r",
        constant_width=True,
    ),
    _rec("concentricity_lower", "concentricity: w <= r + R", 1, lambda v: (v["w"], v["r"] + v["R"]), "w <= r + R"),
    _rec("concentricity_upper", "concentricity: r + R <= D", 1, lambda v: (v["r"] + v["R"], v["D"]), "r + R <= D"),
    _rec(
        "steinhagen_cw",
        "sharpened Steinhagen for constant width",
        1,
        lambda v: (2 * v["w"], (3 + SQRT3) * v["r"]),
        "2w <= (3 + sqrt(3)) r",
        constant_width=True,
    ),
    _rec(
        "ApDKubota",
        "Kubota's area upper bound with 2 phi D = p sin(phi)",
        2,
        _kubota,
        "8 phi A <= p (p - 2D cos(phi))",
    ),
    _rec(
        "ApDKubota2",
        "Kubota's area lower bound for 2D <= p <= 3D",
        2,
        lambda v: ((v["p"] - 2 * v["D"]) * _sqrt(4 * v["p"] * v["D"] - v["p"] ** 2), 4 * v["A"]),
        "(p - 2D) sqrt(4pD - p^2) <= 4A",
        condition=_in_range(2, 3),
        condition_text="2D <= p <= 3D",
    ),
    _rec(
        "ApDKubota3",
        "Kubota's area lower bound for 3D <= p <= pi D",
        2,
        lambda v: (SQRT3 * v["D"] * (v["p"] - 2 * v["D"]), 4 * v["A"]),
        "sqrt(3) D (p - 2D) <= 4A",
        condition=_in_range(3, math.pi),
        condition_text="3D <= p <= pi D",
    ),
    _rec("pDrHenk", "p <= 2D + 4r", 1, lambda v: (v["p"], 2 * v["D"] + 4 * v["r"]), "p <= 2D + 4r"),
    _rec(
        "LB_prD",
        "perimeter lower bound in D and r (stadium hulls)",
        1,
        _lb_prd,
        "4r atan2(2r, sqrt(D^2 - 4r^2)) + 2 sqrt(D^2 - 4r^2) <= p",
    ),
    _rec(
        "UB_pDr_2",
        "perimeter upper bound in D and r via Steinhagen",
        1,
        _ub_pdr,
        "p <= 2 sqrt(D^2 - t^2) + 2D asin(t/D), t = min(3r, D)",
    ),
    _rec(
        "pRw_NEW",
        "perimeter upper bound in R and w (slabs of the ball)",
        1,
        lambda v: (
            v["p"],
            2 * math.pi * v["R"] + 2 * _sqrt(4 * v["R"] ** 2 - v["w"] ** 2) - 4 * v["R"] * _acos(v["w"] / (2 * v["R"])),
        ),
        "p <= 2 pi R + 2 sqrt(4R^2 - w^2) - 4R acos(w/2R)",
    ),
    _rec(
        "LB_pRw",
        "perimeter lower bound in R and w",
        1,
        lambda v: (
            4 * (_sqrt(v["R"] ** 2 - v["w"] ** 2 / 9) + v["w"] / 3 * _asin(v["w"] / (3 * v["R"]))),
            v["p"],
        ),
        "4(sqrt(R^2 - w^2/9) + (w/3) asin(w/3R)) <= p",
    ),
    _rec("ARw_old_lower", "(sqrt(3)/2) R w <= A", 2, lambda v: (SQRT3 / 2 * v["R"] * v["w"], v["A"]), "(sqrt(3)/2) R w <= A"),
    _rec("ARw_old_upper", "A <= 2 R w", 2, lambda v: (v["A"], 2 * v["R"] * v["w"]), "A <= 2 R w"),
    _rec(
        "ARw_NEW_UPPER",
        "area upper bound in R and w (slabs of the ball)",
        2,
        lambda v: (
            v["A"],
            v["R"] ** 2 * (math.pi - 2 * _acos(v["w"] / (2 * v["R"]))) + 0.5 * v["w"] * _sqrt(4 * v["R"] ** 2 - v["w"] ** 2),
        ),
        "A <= R^2 (pi - 2 acos(w/2R)) + (w/2) sqrt(4R^2 - w^2)",
    ),
    _rec(
        "ARw_LOWER",
        "area lower bound in R and w (vacuous for w < R)",
        2,
        _arw_lower_R,
        "(pi - acos(q/R)) q^2 + q sqrt(R^2 - q^2) <= A, q = w - R",
    ),
    _rec(
        "Arw_nonsharp_1",
        "Scott: 4(w - 2r) A <= w^3",
        3,
        lambda v: (4 * (v["w"] - 2 * v["r"]) * v["A"], v["w"] ** 3),
        "4 (w - 2r) A <= w^3",
    ),
    _rec(
        "Arw_nonsharp_2",
        "Scott: sqrt(3)(w - 2r) A <= w^2 r",
        3,
        lambda v: (SQRT3 * (v["w"] - 2 * v["r"]) * v["A"], v["w"] ** 2 * v["r"]),
        "sqrt(3) (w - 2r) A <= w^2 r",
    ),
    _rec(
        "prw_nonsharp",
        "Scott: sqrt(3)(w - 2r) p <= 2 w^2",
        2,
        lambda v: (SQRT3 * (v["w"] - 2 * v["r"]) * v["p"], 2 * v["w"] ** 2),
        "sqrt(3) (w - 2r) p <= 2 w^2",
    ),
    _rec(
        "Arw_upper",
        "area upper bound in r and w (isosceles triangles)",
        3.5,
        lambda v: ((v["w"] - 2 * v["r"]) * _sqrt(4 * v["r"] - v["w"]) * v["A"], v["w"] ** 1.5 * v["r"] ** 2),
        "(w - 2r) sqrt(4r - w) A <= w^(3/2) r^2",
    ),
    _rec(
        "prw_upper",
        "perimeter upper bound in r and w (isosceles triangles)",
        2.5,
        lambda v: ((v["w"] - 2 * v["r"]) * _sqrt(4 * v["r"] - v["w"]) * v["p"], 2 * v["r"] * v["w"] ** 1.5),
        "(w - 2r) sqrt(4r - w) p <= 2 r w^(3/2)",
    ),
    _rec(
        "Arw_lower",
        "area lower bound in r and w",
        2,
        _arw_lower,
        "pi r^2 + 3r sqrt(w^2 - 2wr) + 3r^2 (asin(r/(w - r)) - pi/2) <= A",
    ),
    _rec(
        "prw_lower",
        "perimeter lower bound in r and w",
        1,
        _prw_lower,
        "6 (sqrt(w^2 - 2wr) + r asin(r/(w - r))) - pi r <= p",
    ),
)

_BY_ID = {rec.id: rec for rec in _CATALOG}


def catalog() -> list[InequalityRecord]:
    return list(_CATALOG)


def record(id_: str) -> InequalityRecord:
    try:
        return _BY_ID[id_]
    except KeyError:
        raise KeyError(f"unknown inequality id {id_!r}") from None


@dataclass(frozen=True)
class SlackReport:
    id: str
    applicable: bool
    slack: float
    equality_within: float
    violation: bool = False
    normalized: float = math.nan
    scale: float = 1.0  # D**degree

    @property
    def is_equality(self) -> bool:
        return self.applicable and abs(self.slack) <= max(self.equality_within, 1e-9 * self.scale)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "applicable": self.applicable,
            "slack": self.slack,
            "equality_within": self.equality_within,
            "violation": self.violation,
            "normalized": self.normalized,
        }


def is_constant_width(fv: FunctionalVector) -> bool:
    return abs(fv.D - fv.w) <= CW_TOL * fv.D


def propagated_error(rec: InequalityRecord, fv: FunctionalVector) -> float:
    """First-order-free bound: perturb every functional by +/- err and sum the worst shifts."""
    v = fv.values()
    base = rec.raw_slack(v)
    total = rec.rounding(v)
    for f in FIELDS:
        e = fv.err.get(f, 0.0)
        if e <= 0:
            continue
        shifts = []
        for sgn in (1.0, -1.0):
            moved = dict(v)
            moved[f] = max(v[f] + sgn * e, 0.0)
            if moved["D"] <= 0:
                continue
            shifts.append(abs(rec.raw_slack(moved) - base))
        total += max(shifts, default=0.0)
    return total


def slack(id_: str, fv: FunctionalVector, constant_width: bool | None = None) -> SlackReport:
    rec = record(id_)
    v = fv.values()
    if not v["D"] > 0:
        return SlackReport(id_, False, math.nan, 0.0)
    cw = is_constant_width(fv) if constant_width is None else constant_width
    if (rec.constant_width and not cw) or (rec.condition is not None and not rec.condition(v)):
        return SlackReport(id_, False, math.nan, 0.0)
    s = rec.raw_slack(v)
    scale = v["D"] ** rec.degree
    within = 3.0 * float(propagated_error(rec, fv))
    return SlackReport(id_, True, s, within, violation=bool(s < -within), normalized=s / scale, scale=scale)


def check_all(fv: FunctionalVector, constant_width: bool | None = None) -> list[SlackReport]:
    return [slack(rec.id, fv, constant_width) for rec in _CATALOG]


def violations(reports: list[SlackReport]) -> list[SlackReport]:
    return [r for r in reports if r.violation]


# ---------------------------------------------------------------------------
# sharpness


@dataclass(frozen=True)
class SharpnessRow:
    family: str
    param: float | None
    gap: float


@dataclass(frozen=True)
class SharpnessReport:
    id: str
    status: str  # PASS | FAIL | NO_CLAIM
    gap: float
    argmax: float | None
    argmax_family: str
    rows: tuple[SharpnessRow, ...]

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "gap": self.gap,
            "argmax": self.argmax,
            "argmax_family": self.argmax_family,
            "rows": [{"family": r.family, "param": r.param, "gap": r.gap} for r in self.rows],
        }


def certify_sharpness(id_: str, grid_points: int = 33, threshold: float = SHARP_TOL) -> SharpnessReport:
    """Worst equality gap of ``id_`` over its claimed witness families (numeric functionals)."""
    rec = record(id_)
    fams = rec.witness_family
    if not fams:
        return SharpnessReport(id_, "NO_CLAIM", math.nan, None, "no sharpness claim", ())
    rows: list[SharpnessRow] = []
    for fam in fams:
        for t, spec in fam.grid(grid_points):
            fv = evaluate(bodies.construct(spec))
            rep = slack(id_, fv, constant_width=True if rec.constant_width else None)
            gap = abs(rep.normalized) if rep.applicable else math.inf
            rows.append(SharpnessRow(fam.describe(), t, gap))
    worst = max(rows, key=lambda row: row.gap)
    status = "PASS" if worst.gap <= threshold else "FAIL"
    return SharpnessReport(id_, status, worst.gap, worst.param, worst.family, tuple(rows))


# ---------------------------------------------------------------------------
# incircle support triangle


@dataclass(frozen=True)
class IncircleTriangle:
    halfplanes: tuple[tuple[tuple[float, float], float], ...]  # (outer normal n, offset b): <x, n> <= b
    r_check: float
    degenerate_strip: bool
    triangle: ArcGon | None = None


def _dedupe_angles(normals: list[tuple[float, float]]) -> list[float]:
    out: list[float] = []
    for ang in sorted(math.atan2(n[1], n[0]) % (2 * math.pi) for n in normals):
        if not out or ang - out[-1] > 1e-9:
            out.append(ang)
    if len(out) > 1 and out[0] + 2 * math.pi - out[-1] <= 1e-9:
        out.pop()
    return out


def _max_gap(angs: list[float]) -> float:
    s = sorted(angs)
    gaps = [b - a for a, b in zip(s, s[1:])] + [s[0] + 2 * math.pi - s[-1]]
    return max(gaps)


def incircle_support_triangle(body: ArcGon) -> IncircleTriangle:
    """Supporting halfplanes at incircle touching normals; a strip when only an antipodal pair exists."""
    require_valid(body)
    r, c, normals, _ = inradius(body)
    angs = _dedupe_angles(list(normals))

    def halfplane(a: float) -> tuple[tuple[float, float], float]:
        n = (math.cos(a), math.sin(a))
        return n, c[0] * n[0] + c[1] * n[1] + r

    best = None
    for i in range(len(angs)):
        for j in range(i + 1, len(angs)):
            for k in range(j + 1, len(angs)):
                gap = _max_gap([angs[i], angs[j], angs[k]])
                if gap < math.pi - 1e-9 and (best is None or gap < best[0]):
                    best = (gap, (angs[i], angs[j], angs[k]))
    if best is not None:
        hps = tuple(halfplane(a) for a in best[1])
        verts = []
        for (n1, b1), (n2, b2) in zip(hps, hps[1:] + hps[:1]):
            x = np.linalg.solve(np.array([n1, n2]), np.array([b1, b2]))
            verts.append((float(x[0]), float(x[1])))
        tri = polygon(verts)
        r_tri, _, _, _ = inradius(tri)
        return IncircleTriangle(hps, r_tri, False, tri)
    for i in range(len(angs)):
        for j in range(i + 1, len(angs)):
            if abs(abs(angs[j] - angs[i]) - math.pi) <= 1e-9:
                hps = (halfplane(angs[i]), halfplane(angs[j]))
                (n1, b1), (_, b2) = hps
                return IncircleTriangle(hps, 0.5 * (b1 + b2), True)
    raise ArithmeticError("incircle touching normals do not certify optimality")
