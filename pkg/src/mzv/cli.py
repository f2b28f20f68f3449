"""Command-line interface: ``mzv dual | eval | prove | check``.

Exit codes: 0 success, 1 verification failure, 2 input or domain error,
3 divergent series requested.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import ConvergenceError, DomainError
from .index import Index, dual
from .scalar import DEFAULT_PRECISION, Params
from .series import (
    EvalConfig,
    eval_connected,
    eval_generating,
    eval_ohno_sum,
    eval_qmzv,
)
from .suites import (
    DEFAULT_XGRID,
    run_duality,
    run_ohno,
    run_sumformula,
    run_telescope,
)
from .transport import prove_duality, verify_trace_numeric

EXIT_OK, EXIT_FAIL, EXIT_DOMAIN, EXIT_DIVERGENT = 0, 1, 2, 3


def default_precision() -> int:
    raw = os.environ.get("MZV_DEFAULT_PREC")
    if not raw:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"MZV_DEFAULT_PREC must be an integer, got {raw!r}") from None


def parse_index(text: str) -> Index:
    k = Index.parse(text)
    if not k:
        raise DomainError("the empty index is not accepted on the command line")
    return k


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"cannot parse rational number {text!r}") from None


def parse_grid(text: str) -> list[tuple[Fraction, Fraction]]:
    """``"1:0,1/2:1/3"`` -> ``[(1, 0), (1/2, 1/3)]``."""
    grid = []
    for item in text.split(","):
        q, sep, x = item.partition(":")
        grid.append((parse_rational(q), parse_rational(x) if sep else Fraction(0)))
    return grid


def _config(args) -> EvalConfig:
    prec = args.prec if args.prec is not None else default_precision()
    return EvalConfig(trunc=args.trunc, prec=prec, exact=getattr(args, "exact", False))


def _add_numeric_flags(p: argparse.ArgumentParser, q_default: str | None = "1") -> None:
    p.add_argument("--q", default=q_default, help="q in (0, 1], e.g. 1/2")
    p.add_argument("--x", default="0", help="x in (-1, 1), e.g. 1/4")
    p.add_argument("--trunc", type=int, default=None, help="truncation M")
    p.add_argument("--prec", type=int, default=None, help="float precision in bits")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mzv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dual", help="print the dual of an admissible index")
    p.add_argument("index")

    p = sub.add_parser("eval", help="evaluate a truncated series")
    p.add_argument("kind", choices=["zeta", "qzeta", "conn", "gen", "ohno"])
    p.add_argument("indices", nargs="+", metavar="INDEX")
    _add_numeric_flags(p)
    p.add_argument("--c", type=int, default=0, help="weight increase for ohno")
    p.add_argument("--exact", action="store_true", help="exact rational arithmetic")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("prove", help="emit the duality proof trace as JSON")
    p.add_argument("index")
    p.add_argument("--verify", action="store_true", help="also evaluate every state")
    _add_numeric_flags(p)
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("suite", choices=["duality", "ohno", "telescope", "sumformula"])
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--max-c", type=int, default=3)
    p.add_argument("--weight", type=int, default=None, help="sumformula: single weight")
    p.add_argument("--depth", type=int, default=None, help="sumformula: single depth")
    p.add_argument("--grid", default=None, help="(q, x) points as q:x,q:x,...")
    _add_numeric_flags(p, q_default=None)
    p.add_argument("--a-max", type=int, default=30, help="telescope: largest a")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--json", action="store_true")
    return parser


def cmd_dual(args) -> int:
    k = parse_index(args.index)
    print(dual(k))
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _config(args)
    q, x = parse_rational(args.q), parse_rational(args.x)
    params = Params(q, x)
    indices = [parse_index(t) for t in args.indices]
    expected = 2 if args.kind == "conn" else 1
    if len(indices) != expected:
        raise DomainError(f"eval {args.kind} takes {expected} index argument(s)")
    k = indices[0]
    if args.kind == "zeta":
        result = eval_qmzv(k, 1, cfg)
    elif args.kind == "qzeta":
        result = eval_qmzv(k, q, cfg)
    elif args.kind == "conn":
        result = eval_connected(indices[0], indices[1], params, cfg)
    elif args.kind == "gen":
        result = eval_generating(k, params, cfg)
    else:
        result = eval_ohno_sum(k, args.c, q, cfg)
    if args.json:
        out = {"kind": args.kind, "indices": [list(i) for i in indices],
               "q": str(params.q), "x": str(params.x)}
        if args.kind == "ohno":
            out["c"] = args.c
        out.update(result.to_dict())
        print(json.dumps(out))
    else:
        print(f"value           {result.value}")
        print(f"tail_estimate   {result.tail_estimate}")
        print(f"truncation_used {result.truncation_used}")
        how = "extrapolated" if result.extrapolated else "value + tail"
        print(f"limit           {result.limit}  (± {float(result.limit_error):.3e}, {how})")
    return EXIT_OK


def cmd_prove(args) -> int:
    trace = prove_duality(parse_index(args.index))
    print(trace.dumps())
    if not args.verify:
        return EXIT_OK
    params = Params(parse_rational(args.q), parse_rational(args.x))
    report = verify_trace_numeric(trace, params, _config(args), tol=args.tol)
    print(json.dumps(report.to_json()))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_check(args) -> int:
    cfg = _config(args)
    if args.grid is not None:
        grid = parse_grid(args.grid)
    elif args.q is not None or args.x != "0":
        grid = [(parse_rational(args.q or "1"), parse_rational(args.x))]
    else:
        grid = None
    if args.suite == "duality":
        report = run_duality(args.max_weight or 6, grid or [(1, 0)], cfg, args.tol)
    elif args.suite == "ohno":
        qs = [q for q, _ in grid] if grid else [Fraction(1, 2), 1]
        report = run_ohno(args.max_weight or 5, args.max_c, qs, cfg, args.tol)
    elif args.suite == "telescope":
        report = run_telescope(grid or DEFAULT_XGRID, a_max=args.a_max)
    else:
        if (args.weight is None) != (args.depth is None):
            raise DomainError("--weight and --depth must be given together")
        if args.weight is not None:
            if not 1 <= args.depth < args.weight:
                raise DomainError("sumformula needs 1 <= depth < weight")
            pairs = [(args.weight, args.depth)]
        else:
            pairs = None
        report = run_sumformula(pairs, args.max_weight or 6, cfg, args.tol)
    print(report.dumps() if args.json else report.render())
    return EXIT_OK if report.passed else EXIT_FAIL


_COMMANDS = {"dual": cmd_dual, "eval": cmd_eval, "prove": cmd_prove, "check": cmd_check}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"mzv: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except DomainError as exc:
        print(f"mzv: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
