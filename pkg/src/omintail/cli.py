"""Command-line front end.

Exit status: 0 on success, 1 when a check fails, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import invariants as inv
from .grammar import TermSyntaxError, format_point, parse_point, parse_term
from .iso import DEFAULT_MAX_DEPTH, DepthLimitExceeded, decide_iso
from .models import (
    HahnVector,
    NoWitnessFound,
    ParamSet,
    TheoryId,
    build_model,
    canonical_tail_check,
    faithfulness_check,
    ladder,
    nonsimplicity_search,
)
from .order import InvalidPoint, TailView, bounds, check_point, enumerate_point, size, to_text
from .pointlogic import NotClassT, classify_point
from .reductions import RecoveryError, apply_f, apply_g, make_T, tail_iso_T
from .verify import SUITES, report, run_suites


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: List[str] = []

    def emit(self, data, text: Optional[str] = None):
        self.lines.append(_dump(data) if self.as_json or text is None else text)


def _parse_vector(index, text: str) -> HahnVector:
    coeffs = {}
    for item in filter(None, (s.strip() for s in text.split(";"))):
        point, _, coeff = item.rpartition(":")
        if not point:
            raise UsageError(f"parameter term {item!r} must look like <point>:<coefficient>")
        coeffs[parse_point(point)] = Fraction(coeff)
    return HahnVector.of(index, coeffs)


# ---------------------------------------------------------------- commands


def cmd_parse(args, out: Output) -> int:
    term = parse_term(args.term)
    lo, hi = bounds(term)
    n = size(term)
    out.emit({"term": to_text(term), "has_least": lo, "has_greatest": hi, "size": n}, to_text(term))
    return 0


def cmd_classify(args, out: Output) -> int:
    if args.scan is not None:
        term = parse_term(args.scan)
        where = term
        if args.base is not None:
            base = parse_point(args.base)
            check_point(term, base)
            where = TailView(term, base)
        points = where.points(args.count) if isinstance(where, TailView) else (
            enumerate_point(term, i) for i in range(args.count if size(term) is None else min(args.count, size(term))))
        for p in points:
            out.lines.append(_dump({"point": format_point(p), "class": classify_point(where, p).value}))
        return 0
    if args.term is None or args.point is None:
        raise UsageError("classify needs <term> <point>, or --scan <term>")
    term = parse_term(args.term)
    p = parse_point(args.point)
    cls = classify_point(term, p).value
    out.emit({"term": to_text(term), "point": format_point(p), "class": cls}, cls)
    return 0


def cmd_iso(args, out: Output) -> int:
    a, b = parse_term(args.a), parse_term(args.b)
    depth = args.depth if args.depth is not None else DEFAULT_MAX_DEPTH
    v = decide_iso(a, b, kmax=depth)
    out.lines.append(_dump(v.to_dict()))
    return 0


def cmd_reduce(args, out: Output) -> int:
    term = parse_term(args.term)
    if args.map == "f":
        result = apply_f(term)
    elif args.map == "g":
        result = apply_g(term)
    else:
        result = make_T(term).result
    out.emit({"map": args.map, "source": to_text(term), "result": to_text(result)}, to_text(result))
    return 0


def cmd_tailiso(args, out: Output) -> int:
    a, b = make_T(parse_term(args.a)), make_T(parse_term(args.b))
    base_a = parse_point(args.base_a) if args.base_a else None
    base_b = parse_point(args.base_b) if args.base_b else None
    v = tail_iso_T(a, b, base_a, base_b, use_labels=not args.label_free)
    out.lines.append(_dump(v.to_dict()))
    return 0


def cmd_model(args, out: Output) -> int:
    if args.action == "build":
        theory = TheoryId.parse(args.theory)
        m = build_model(theory, parse_term(args.term))
        gens = [m.generator(enumerate_point(m.source, i)).to_json()
                for i in range(3 if size(m.source) is None else min(3, size(m.source)))]
        out.emit(m.to_json() | {"first_generators": gens})
        return 0
    if args.action == "ladder":
        theory = TheoryId.parse(args.theory)
        m = build_model(theory, parse_term(args.term))
        if theory is TheoryId.AFFINE:
            params = [_parse_vector(m.index, p) for p in args.params] if args.params else [m.prefix(0), m.prefix(1)]
        else:
            params = [_parse_vector(m.index, p) for p in args.params or []]
        lad = ladder(theory, ParamSet(theory, tuple(params)), m)
        out.emit(lad.to_json(args.count))
        return 0
    if args.action == "nonsimple":
        theory = TheoryId.parse(args.theory)
        try:
            cert = nonsimplicity_search(theory, args.nmax, height=args.height)
        except NoWitnessFound as exc:
            out.emit({"theory": theory.value, "found": False, "message": str(exc),
                      "ruled_out": {str(k): v for k, v in sorted(exc.ruled_out.items())}})
            return 1
        out.emit(cert.to_json() | {"found": True})
        return 0
    if args.action == "cantail":
        r = canonical_tail_check(parse_term(args.term), args.trials, args.seed)
        out.emit(r.to_json())
        return 0 if r.ok else 1
    theory = TheoryId.parse(args.theory)
    r = faithfulness_check(theory, args.samples, args.seed, mode=args.mode)
    out.emit(r.to_json())
    return 0 if r.ok else 1


def cmd_inv(args, out: Output) -> int:
    theory = inv.SimpleTheorySpec.from_json(inv.load_json(args.theory_file))
    a = inv.SimpleModelSpec.from_json(inv.load_json(args.model))
    if args.action == "smooth":
        out.emit(inv.smooth_invariant(theory, a).to_json())
    elif args.action == "f2":
        out.emit(inv.f2_to_json(inv.f2_invariant(theory, a)))
    else:
        if args.other is None:
            raise UsageError("inv appiso needs two model files")
        b = inv.SimpleModelSpec.from_json(inv.load_json(args.other))
        out.emit({"apparently_isomorphic": inv.apparent_iso(theory, a, b)})
    return 0


def cmd_verify(args, out: Output) -> int:
    if args.list:
        for name in sorted(SUITES):
            out.lines.append(name)
        return 0
    if args.all:
        names = sorted(SUITES)
    elif args.suite:
        names = args.suite
    else:
        raise UsageError("verify needs --suite NAME or --all")
    missing = [n for n in names if n not in SUITES]
    if missing:
        raise UsageError(f"unknown suite(s): {', '.join(missing)}; try verify --list")
    results = run_suites(names, args.seed)
    doc = report(results, args.seed)
    if args.json:
        out.lines.append(_dump(doc))
    else:
        for r in results:
            fails = [c.id for c in r.checks if c.status == "fail"]
            out.lines.append(f"{r.status.upper():4}  {r.name:16} {r.elapsed:7.2f}s"
                             + (f"  failed: {', '.join(fails)}" if fails else ""))
    return 0 if doc["status"] == "pass" else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS,
                        help=f"maximum EF depth (default {DEFAULT_MAX_DEPTH})")

    parser = argparse.ArgumentParser(prog="omintail", parents=[common],
                                     description="Countable linear orders, class-T reductions and "
                                                 "o-minimal ladder models.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("parse", parents=[common], help="parse and print a term")
    p.add_argument("term")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("classify", parents=[common], help="classify a point, or scan a term")
    p.add_argument("term", nargs="?")
    p.add_argument("point", nargs="?")
    p.add_argument("--scan", metavar="TERM")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--from", dest="base", metavar="POINT", help="scan the tail starting at POINT")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("iso", parents=[common], help="isomorphism verdict as JSON")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("reduce", parents=[common], help="apply f, g or T = g o f")
    p.add_argument("map", choices=["f", "g", "T"])
    p.add_argument("term")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("tailiso", parents=[common], help="tail isomorphism of T(a) and T(b)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--base-a")
    p.add_argument("--base-b")
    p.add_argument("--label-free", action="store_true", help="locate separators by classification only")
    p.set_defaults(func=cmd_tailiso)

    p = sub.add_parser("model", parents=[common], help="o-minimal model operations")
    msub = p.add_subparsers(dest="action", required=True, metavar="action")
    q = msub.add_parser("build", parents=[common])
    q.add_argument("theory")
    q.add_argument("term")
    q = msub.add_parser("ladder", parents=[common])
    q.add_argument("theory")
    q.add_argument("term")
    q.add_argument("--params", nargs="*", metavar="VEC", help="vectors as '<point>:<coeff>;...'")
    q.add_argument("--count", type=int, default=10)
    q = msub.add_parser("nonsimple", parents=[common])
    q.add_argument("theory")
    q.add_argument("--nmax", type=int, default=3)
    q.add_argument("--height", type=int, default=8)
    q = msub.add_parser("cantail", parents=[common])
    q.add_argument("term")
    q.add_argument("--trials", type=int, default=1000)
    q = msub.add_parser("faithful", parents=[common])
    q.add_argument("theory")
    q.add_argument("--samples", type=int, default=500)
    q.add_argument("--mode", choices=["inequivalent", "arbitrary"], default="inequivalent")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("inv", parents=[common], help="invariants of simple-theory models")
    p.add_argument("action", choices=["smooth", "f2", "appiso"])
    p.add_argument("theory_file")
    p.add_argument("model")
    p.add_argument("other", nargs="?")
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", action="append", metavar="NAME")
    p.add_argument("--all", action="store_true")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str]) -> "tuple[int, str]":
    """Run one command; returns the exit code and the text written to stdout."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0), ""
    for name, default in (("json", False), ("seed", 0), ("depth", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.depth is not None and args.depth < 0:
        print("error: --depth must be non-negative", file=sys.stderr)
        return 2, ""
    out = Output(args.json)
    try:
        code = args.func(args, out)
    except (UsageError, TermSyntaxError, InvalidPoint, DepthLimitExceeded, NotClassT,
            RecoveryError, inv.UnknownCut, inv.MixedTheories, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, "\n".join(out.lines)
    return code, "\n".join(out.lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
