"""``santalo`` batch command line.

Exit codes: 0 success, 1 mathematical violation, 2 input error,
3 invalid geometry, 4 certification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import bodies, diagrams, inequalities, ndim
from .functionals import FunctionalVector, evaluate_all
from .geometry import DegeneratePointSetError, InvalidBodyError

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_GEOMETRY, EXIT_CERT = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace


def _dump(obj) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None if math.isnan(v) else ("inf" if v > 0 else "-inf")
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        if hasattr(v, "item"):  # numpy scalars
            return clean(v.item())
        return v

    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise CliError(f"cannot write {path}: {exc}", EXIT_INPUT) from exc
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_INPUT) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: malformed JSON ({exc})", EXIT_INPUT) from exc
    if not isinstance(data, dict):
        raise CliError(f"{path}: expected a JSON object", EXIT_INPUT)
    return data


def _load_vector(path: str) -> FunctionalVector:
    """A BodySpec file is evaluated; a ``functionals`` file is replayed as is."""
    data = _read_json(path)
    try:
        if data.get("kind") == "functionals":
            return FunctionalVector.from_dict(data)
        spec = bodies.BodySpec.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (InvalidBodyError, DegeneratePointSetError)):
            raise CliError(f"invalid body: {exc}", EXIT_GEOMETRY) from exc
        raise CliError(f"{path}: cannot parse body ({exc})", EXIT_INPUT) from exc
    try:
        return evaluate_all(spec)
    except bodies.BodySpecError as exc:
        raise CliError(f"invalid body: {exc}", EXIT_GEOMETRY) from exc
    except (InvalidBodyError, DegeneratePointSetError) as exc:
        raise CliError(f"invalid body: {exc}", EXIT_GEOMETRY) from exc


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args: argparse.Namespace) -> int:
    fv = _load_vector(args.body)
    _emit(_dump(fv.to_dict()), args.json)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    fv = _load_vector(args.body)
    cw = True if args.constant_width else None
    reports = inequalities.check_all(fv, constant_width=cw)
    bad = inequalities.violations(reports)
    out = {
        "violations": [r.id for r in bad],
        "equalities": [r.id for r in reports if r.applicable and r.is_equality],
        "records": [r.to_dict() for r in reports],
    }
    _emit(_dump(out), args.json)
    for r in bad:
        print(f"VIOLATION {r.id}: slack {r.slack:.6g}", file=sys.stderr)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_sharpness(args: argparse.Namespace) -> int:
    try:
        inequalities.record(args.ineq)
    except KeyError as exc:
        raise CliError(f"unknown inequality {args.ineq!r}", EXIT_INPUT) from exc
    if args.grid < 2:
        raise CliError("--grid must be >= 2", EXIT_INPUT)
    rep = inequalities.certify_sharpness(args.ineq, args.grid)
    _emit(_dump(rep.to_dict()), args.json)
    print(f"{rep.id}: {rep.status} (gap {rep.gap:.3g})", file=sys.stderr)
    return EXIT_CERT if rep.status == "FAIL" else EXIT_OK


def cmd_diagram(args: argparse.Namespace) -> int:
    try:
        spec = diagrams.get_diagram(args.name)
    except diagrams.DiagramError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    gens = args.generators.split(",") if args.generators else list(diagrams.GENERATORS)
    try:
        cloud = diagrams.sample_cloud(spec, gens, args.samples, args.seed) if args.samples > 0 else None
    except diagrams.CloudViolation as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATION
    except diagrams.DiagramError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    curves = diagrams.known_curves(spec)
    if args.csv:
        _emit(diagrams.export_csv(cloud or diagrams.PointCloud(spec.name)), args.csv)
    if args.svg:
        _emit(diagrams.render_svg(spec, cloud, curves), args.svg)
    summary = {
        "diagram": spec.name,
        "x": spec.x_label,
        "y": spec.y_label,
        "samples": len(cloud) if cloud else 0,
        "seed": args.seed,
        "curves": [{"id": c.id, "ref": c.ref, "style": c.style} for c in curves],
    }
    if not args.csv and not args.svg:
        _emit(_dump(summary), None)
    elif args.json:
        _emit(_dump(summary), args.json)
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    try:
        res = diagrams.boundary_push(args.name, args.dir, args.x, args.iters, args.seed)
    except diagrams.CloudViolation as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VIOLATION
    except diagrams.DiagramError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    out = {
        "diagram": args.name,
        "direction": args.dir,
        "x_target": args.x,
        "label": res.label,
        "point": list(res.point),
        "iterations": args.iters,
        "seed": args.seed,
        "body": res.body.to_dict(),
    }
    _emit(_dump(out), args.json)
    return EXIT_OK


def cmd_ndim(args: argparse.Namespace) -> int:
    try:
        if args.theorem == "VRw":
            grid = _grid(0.0, 2.0, args.grid)
            rep = ndim.certify_VRw(args.dim, grid)
        elif args.theorem == "bRw":
            grid = _grid(0.25, 2.0, args.grid)
            rep = ndim.certify_bRw(args.dim, grid, args.samples, args.seed)
        else:
            grid = _grid(0.0, 1.0, args.grid)
            rep = ndim.certify_brD(args.dim, grid, args.samples, args.seed)
    except ndim.NdimError as exc:
        raise CliError(str(exc), EXIT_INPUT) from exc
    _emit(_dump(rep.to_dict()), args.json)
    print(f"{rep.theorem} dim {rep.dim}: {'PASS' if rep.passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_CERT


def _grid(lo: float, hi: float, n: int) -> list[float]:
    if n < 1:
        raise CliError("--grid must be >= 1", EXIT_INPUT)
    if n == 1:
        return [hi]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="santalo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate the six functionals of a body")
    e.add_argument("--body", required=True)
    e.add_argument("--json")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", help="slack of every catalog inequality")
    c.add_argument("--body", required=True, help="BodySpec JSON or a functionals replay file")
    c.add_argument("--constant-width", action="store_true")
    c.add_argument("--json")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sharpness", help="certify equality over witness families")
    s.add_argument("--ineq", required=True)
    s.add_argument("--grid", type=int, default=33)
    s.add_argument("--json")
    s.set_defaults(func=cmd_sharpness)

    d = sub.add_parser("diagram", help="point cloud, curves, CSV and SVG for one diagram")
    d.add_argument("--name", required=True)
    d.add_argument("--samples", type=int, default=1000)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--generators", help="comma list of " + ",".join(diagrams.GENERATORS))
    d.add_argument("--csv")
    d.add_argument("--svg")
    d.add_argument("--json")
    d.set_defaults(func=cmd_diagram)

    q = sub.add_parser("search", help="simulated-annealing envelope at one x")
    q.add_argument("--name", required=True)
    q.add_argument("--x", type=float, required=True)
    q.add_argument("--dir", choices=("up", "down"), required=True)
    q.add_argument("--iters", type=int, default=10_000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--json")
    q.set_defaults(func=cmd_search)

    n = sub.add_parser("ndim", help="certify the n-dimensional theorems")
    n.add_argument("--theorem", choices=("brD", "bRw", "VRw"), required=True)
    n.add_argument("--dim", type=int, default=3)
    n.add_argument("--grid", type=int, default=5)
    n.add_argument("--samples", type=int, default=1_000_000)
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--json")
    n.set_defaults(func=cmd_ndim)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
