"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 invalid arguments or
input files, 3 the Minkowski solver stalled.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import io
from .bodies import (
    DiscreteSphericalMeasure,
    LinearMap,
    Polytope,
    UnconditionalBody2D,
    add_measures,
    apply_linear,
    hausdorff_distance,
    lp_sum,
    m_sum,
    minkowski_sum,
    outer_approximation,
    surface_area_measure,
)
from .errors import SolverStalled
from .levy_prokhorov import lp_distance
from .minkowski import SolverConfig, solve_minkowski
from .projection import Zonotope, inverse_projection_body, projection_body
from .sphere import rotation_matrix
from .verify import run_suite, suite_json


class UsageError(Exception):
    pass


def _load(path):
    try:
        return io.load(path)
    except FileNotFoundError as exc:
        raise UsageError(f"{path}: no such file") from exc


def _load_body(path):
    obj = _load(path)
    if isinstance(obj, DiscreteSphericalMeasure):
        raise UsageError(f"{path}: expected a body file, got a measure")
    return obj


def _as_polytope(body):
    return body.to_polytope() if isinstance(body, Zonotope) else body


def _as_measure(obj):
    if isinstance(obj, DiscreteSphericalMeasure):
        return obj
    return surface_area_measure(_as_polytope(obj))


def _same_dim(*objs):
    dims = {o.dim for o in objs}
    if len(dims) != 1:
        raise UsageError(f"dimension mismatch: {sorted(dims)}")


def _emit(args, payload):
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _polytope_payload(poly: Polytope, **extra):
    d = io.body_to_dict(poly, facets=True)
    d.update(extra)
    return d


# ---------------------------------------------------------------------------
# verbs


def cmd_sum(args):
    a, b = _load_body(args.a), _load_body(args.b)
    _same_dim(a, b)
    if isinstance(a, Zonotope) and isinstance(b, Zonotope):
        return _emit(args, io.body_to_dict(a + b))
    _emit(args, _polytope_payload(minkowski_sum(_as_polytope(a), _as_polytope(b))))


def cmd_blaschke(args):
    a, b = _load(args.a), _load(args.b)
    _same_dim(a, b)
    cfg = SolverConfig(area_tolerance=args.tol) if args.tol else None
    p = solve_minkowski(add_measures(_as_measure(a), _as_measure(b)), cfg)
    _emit(args, _polytope_payload(p, height=p.extent(-1), volume=p.volume()))


def _outer(args, oracle, **meta):
    p = outer_approximation(oracle, args.resolution)
    _emit(args, _polytope_payload(p, approximation="outer", resolution=args.resolution, **meta))


def cmd_lp_sum(args):
    a, b = _load_body(args.a), _load_body(args.b)
    _same_dim(a, b)
    if not args.p > 1:
        raise UsageError("--p must exceed 1")
    _outer(args, lp_sum(a, b, args.p), p=args.p)


def cmd_m_sum(args):
    a, b = _load_body(args.a), _load_body(args.b)
    _same_dim(a, b)
    if args.box is not None:
        m = UnconditionalBody2D.box(*args.box)
    elif args.lp_ball is not None:
        m = UnconditionalBody2D.lp_ball(args.lp_ball)
    else:
        raise UsageError("choose M with --box A B or --lp-ball P")
    _outer(args, m_sum(a, b, m), M=m.name)


def cmd_project(args):
    _emit(args, io.body_to_dict(projection_body(_as_polytope(_load_body(args.body)))))


def cmd_unproject(args):
    z = _load_body(args.body)
    if not isinstance(z, Zonotope):
        raise UsageError("unproject needs a zonotope file")
    cfg = SolverConfig(area_tolerance=args.tol) if args.tol else None
    _emit(args, _polytope_payload(inverse_projection_body(z, cfg)))


def cmd_hausdorff(args):
    a, b = _load_body(args.a), _load_body(args.b)
    _same_dim(a, b)
    value, bound = hausdorff_distance(_as_polytope(a), _as_polytope(b), args.resolution)
    _emit(args, {"value": float(value), "error_bound": float(bound)})


def cmd_lp_distance(args):
    a, b = _as_measure(_load(args.a)), _as_measure(_load(args.b))
    if len(a) and len(b):
        _same_dim(a, b)
    r = lp_distance(a, b, args.tol or 1e-9)
    _emit(args, {"value": r.value, "certificate_eps": r.certificate_eps,
                 "bisection_tolerance": r.bisection_tolerance})


def cmd_measure(args):
    if args.ball_approx is not None:
        s, depth = args.ball_approx
        if s <= 0 or depth < 0 or depth != int(depth):
            raise UsageError("--ball-approx needs a positive radius and a depth >= 0")
        p = Polytope.ball_approximation(s, int(depth))
    else:
        if args.body:
            p = _as_polytope(_load_body(args.body))
        elif args.box:
            if any(h <= 0 for h in args.box):
                raise UsageError("--box half-widths must be positive")
            p = Polytope.box(args.box)
        else:
            p = Polytope.cube()
        if args.rotated_box is not None:
            p = apply_linear(LinearMap(rotation_matrix(p.dim, args.rotated_box)), p)
    _emit(args, io.measure_to_dict(surface_area_measure(p)))


def cmd_verify(args):
    reports = run_suite(args.seed, args.filter)
    _emit(args, suite_json(reports))
    for r in reports:
        sys.stderr.write(r.line() + "\n")
    failed = sum(not r.passed for r in reports)
    sys.stderr.write(f"{len(reports) - failed}/{len(reports)} checks passed\n")
    return 1 if failed else 0


def cmd_export(args):
    body = _load_body(args.body)
    if args.format == "off":
        _emit(args, io.to_off(_as_polytope(body)))
    else:
        _emit(args, io.body_to_dict(body))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the result here instead of stdout")
    common.add_argument("--tol", type=float, help="solver area tolerance or metric tolerance")

    parser = argparse.ArgumentParser(prog="blaschke", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, func, help_, *inputs):
        p = sub.add_parser(name, parents=[common], help=help_)
        for i in inputs:
            p.add_argument(i)
        p.set_defaults(func=func)
        return p

    verb("sum", cmd_sum, "Minkowski sum of two bodies", "a", "b")
    verb("blaschke", cmd_blaschke, "Blaschke sum of two bodies or measures", "a", "b")
    p = verb("lp-sum", cmd_lp_sum, "outer polytope of the Lp sum", "a", "b")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--resolution", type=int, default=3)
    p = verb("m-sum", cmd_m_sum, "outer polytope of the M-sum", "a", "b")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--box", type=float, nargs=2, metavar=("A", "B"), help="M = [-A,A] x [-B,B]")
    g.add_argument("--lp-ball", type=float, metavar="P", help="M = unit ball of l_P")
    p.add_argument("--resolution", type=int, default=3)
    verb("project", cmd_project, "projection body (a zonotope)", "body")
    verb("unproject", cmd_unproject, "inverse projection body of a zonotope", "body")
    p = verb("hausdorff", cmd_hausdorff, "Hausdorff distance with error bound", "a", "b")
    p.add_argument("--resolution", type=int, default=6)
    verb("lp-distance", cmd_lp_distance, "Levy-Prokhorov distance of measures", "a", "b")
    p = verb("measure", cmd_measure, "surface area measure of a body or built-in instance")
    p.add_argument("body", nargs="?")
    p.add_argument("--box", type=float, nargs="+", metavar="H", help="box with these half-widths")
    p.add_argument("--rotated-box", type=float, metavar="THETA",
                   help="rotate the box by THETA in the {x1, x2}-plane")
    p.add_argument("--ball-approx", type=float, nargs=2, metavar=("S", "K"),
                   help="icosphere polytope of radius S at subdivision depth K")
    p = verb("verify", cmd_verify, "run the verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--filter", metavar="NAME")
    p = verb("export", cmd_export, "write a body as OFF mesh or JSON", "body")
    p.add_argument("--format", choices=["json", "off"], default="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except SolverStalled as exc:
        sys.stderr.write(json.dumps({"error": str(exc), "residual": exc.residual,
                                     "iterations": exc.iterations}) + "\n")
        return 3
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"blaschke {args.verb}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
