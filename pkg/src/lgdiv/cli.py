"""Command line front end: ``lgdiv verify|search|local|cover``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import verify as vf
from .diagcubic import (
    CoveringMap,
    DegenerateError,
    DiagonalCubic,
    ProjPoint,
    contains,
    covering_eval,
)
from .localfields import Place, as_rational, is_cube_local, is_square_local
from .search import point_search

USAGE_ERROR = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which here means "inconclusive"
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_ERROR)


def _ints(text: str, n: int) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated integers, got {text!r}")
    if len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated integers, got {text!r}")
    return vals


def _triple(text):
    return _ints(text, 3)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lgdiv", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="run verification scenarios")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--scenario", metavar="ID")
    which.add_argument("--all", action="store_true")
    which.add_argument("--list", action="store_true", help="list scenario ids")
    p.add_argument("--seed", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--precision", type=int)
    p.add_argument("--report", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config", metavar="PATH", help="JSON file overriding the default config")
    p.add_argument("--canonical", action="store_true", help="omit timings from the report")

    p = sub.add_parser("search", help="rational points of bounded height on aX^3 + bY^3 + cZ^3 = 0")
    p.add_argument("--curve", type=_triple, required=True, metavar="a,b,c")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("local", help="is a rational a square or cube in Q_v")
    p.add_argument("--op", choices=["square", "cube"], required=True)
    p.add_argument("--value", required=True, metavar="Q")
    p.add_argument("--place", required=True, metavar="p|real")

    p = sub.add_parser("cover", help="image of a point under the 3-covering map")
    p.add_argument("--abc", type=_triple, required=True, metavar="a,b,c")
    p.add_argument("--point", type=_triple, required=True, metavar="X,Y,Z")
    return ap


def cmd_verify(args) -> int:
    cfg = vf.Config.load(args.config) if args.config else vf.Config()
    cfg = cfg.replace(seed=args.seed, height=args.height, precision=args.precision)
    from .scenarios import build_registry

    registry = build_registry(cfg)
    if args.list:
        for sid, sc in registry.items():
            print(f"{sid:<16} {sc.description}")
        return 0
    if args.scenario:
        if args.scenario not in registry:
            print(f"unknown scenario {args.scenario!r}; known: {', '.join(registry)}", file=sys.stderr)
            return USAGE_ERROR
        reports = [vf.execute(registry[args.scenario], cfg)]
    else:
        reports, _ = vf.run_all(cfg, jobs=args.jobs)
    code = vf.exit_code(reports)
    text = vf.dumps(vf.report_document(reports, cfg, canonical=args.canonical))
    if args.report == "-":
        sys.stdout.write(text)
    else:
        for r in reports:
            print(r.summary())
        if args.report:
            with open(args.report, "w") as fh:
                fh.write(text)
    return code


def cmd_search(args) -> int:
    if args.height < 1:
        print("height must be positive", file=sys.stderr)
        return USAGE_ERROR
    curve = DiagonalCubic(*args.curve)
    rep = point_search(curve, args.height, jobs=args.jobs)
    print(f"{curve}: {len(rep.points)} point(s) with height <= {args.height} ({rep.elapsed:.2f}s)")
    for pt in rep.points:
        print(f"  {pt}")
    return 0


def cmd_local(args) -> int:
    value = as_rational(args.value)
    place = Place.parse(args.place)
    test = is_square_local if args.op == "square" else is_cube_local
    ans = test(value, place)
    print(f"{args.value} is {'' if ans else 'not '}a {args.op} in "
          f"{'R' if place.is_real else f'Q_{place.p}'}")
    return 0


def cmd_cover(args) -> int:
    cov = CoveringMap(DiagonalCubic(*args.abc))
    pt = ProjPoint(*args.point)
    if not contains(cov.source, pt):
        print(f"{pt} is not on {cov.source}", file=sys.stderr)
        return USAGE_ERROR
    try:
        image = covering_eval(cov, pt)
    except DegenerateError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"source": list(args.abc), "point": list(pt), "d": cov.d, "image": list(image)}))
    return 0


COMMANDS = {"verify": cmd_verify, "search": cmd_search, "local": cmd_local, "cover": cmd_cover}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ValueError, TypeError, ZeroDivisionError, OSError) as exc:
        print(f"lgdiv {args.command}: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
