"""Command line: build model algebras, run suites, recognize, export geometries.

Exit codes: 0 pass, 1 check failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import AlgebraParseError, StructureLieAlgebra
from .fields import FieldSpec
from .geometry import build_geometry
from .recognition import RecognitionError, recognize
from .suites import SUITES, SuiteSpec, run_suite
from .symplectic import standard_space
from .tensor_model import psp3_algebra, sf_algebra, sp3_algebra

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _field(args) -> FieldSpec:
    if args.rational:
        if args.p is not None:
            raise UsageError("--p and --rational are mutually exclusive")
        return FieldSpec.rational()
    try:
        return FieldSpec.prime(3 if args.p is None else args.p)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _build(kind: str, args):
    """Returns (algebra, model space or None)."""
    F = _field(args)
    if kind == "sp":
        if args.pairs < 1 or args.radical < 0:
            raise UsageError("--pairs must be >= 1 and --radical >= 0")
        sp = standard_space(F, args.pairs, args.radical)
        return sf_algebra(sp), sp
    if kind == "sp3":
        return sp3_algebra(F).algebra, None
    if kind == "psp3":
        return psp3_algebra(F).algebra, None
    raise UsageError(f"unknown model {kind!r}")


def _load(path: str) -> StructureLieAlgebra:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    try:
        return StructureLieAlgebra.from_json(obj)
    except AlgebraParseError as e:
        raise AlgebraParseError(f"{path}: {e}") from None


def _emit(obj: dict, out: str | None):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    L, _ = _build(args.model, args)
    _emit(L.to_json(), args.out)
    if args.out:
        print(f"wrote {args.out}: dim {L.dim}, {len(L.extremal_generators)} extremal generators", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    space = None
    if args.input:
        L = _load(args.input)
    else:
        L, space = _build(args.model or "sp", args)
    spec = SuiteSpec(args.suite, seed=args.seed, budget=args.budget, samples=args.samples, space=space)
    report = run_suite(L, spec)
    _emit(report, args.out)
    for c in report["checks"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}", file=sys.stderr)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_recognize(args) -> int:
    L = _load(args.input)
    try:
        rep = recognize(L, budget=args.budget)
    except RecognitionError as e:
        print(f"recognition failed: {type(e).__name__}: {e}", file=sys.stderr)
        _emit({"passed": False, "error": str(e), "kind": type(e).__name__}, args.out)
        return EXIT_FAIL
    _emit({"passed": rep.passed, **rep.to_json()}, args.out)
    print(f"m = {rep.m}, passed = {rep.passed}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_geometry(args) -> int:
    L = _load(args.input)
    geom = build_geometry(L, budget=args.budget)
    n_polar = len(geom.polar_lines()) if not geom.partial else None
    _emit({"n_points": geom.n_points, "n_hyperbolic_lines": len(geom.hyperbolic), "n_polar_lines": n_polar,
           **geom.to_json(include_polar=not geom.partial)}, args.out)
    if args.dot:
        Path(args.dot).write_text(geom.to_dot(), encoding="utf-8")
    flag = " (partial: budget exceeded)" if geom.partial else ""
    print(f"points {geom.n_points}, sl2-lines {len(geom.hyperbolic)}, polar lines {n_polar}{flag}",
          file=sys.stderr)
    return EXIT_FAIL if geom.partial else EXIT_OK


def _field_flags(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, default=None, help="prime field F_p (default 3)")
    p.add_argument("--rational", action="store_true", help="work over Q")
    p.add_argument("--pairs", type=int, default=2, help="hyperbolic pairs m")
    p.add_argument("--radical", type=int, default=0, help="radical dimension")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="extremal-sp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a model algebra as JSON")
    b.add_argument("model", choices=("sp", "sp3", "psp3"))
    _field_flags(b)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("input", nargs="?", help="algebra JSON; omitted means build from flags")
    v.add_argument("--model", choices=("sp", "sp3", "psp3"))
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    _field_flags(v)
    v.add_argument("--budget", type=int, default=5000)
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("recognize", help="recognize an algebra as a symplectic model")
    r.add_argument("input")
    r.add_argument("--budget", type=int, default=20000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.set_defaults(func=cmd_recognize)

    g = sub.add_parser("geometry", help="export the sl2-geometry")
    g.add_argument("input")
    g.add_argument("--budget", type=int, default=5000)
    g.add_argument("--out")
    g.add_argument("--dot")
    g.set_defaults(func=cmd_geometry)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AlgebraParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
