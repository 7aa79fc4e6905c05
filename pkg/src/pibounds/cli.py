"""Command-line frontend.

Subcommands: pi, psi, bound list/eval, scan, crossover, verify, table.
Exit codes: 0 when the invoked check fully passed or matched, 1 on a
FAIL/MISMATCH outcome, 2 on usage, unknown-name, or domain errors.
"""

from __future__ import annotations

import argparse
import sys

from . import claims, primes, scan
from .bounds import builtin_bounds, evaluate
from .errors import (
    ConfigurationError,
    CrossoverNotFoundError,
    DomainError,
    MonotonicityError,
    ResourceLimitError,
    UnknownNameError,
)
from .primes import DEFAULT_CAP
from .scan import Direction, Status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pibounds",
        description="Exact prime counting and verification of explicit pi/psi bounds.",
    )
    parser.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="scan cap (default %(default)s)")
    parser.add_argument("--threads", type=int, default=0,
                        help="worker threads for scans; 0 = auto (default)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_pi = sub.add_parser("pi", help="prime count pi(floor(x))")
    p_pi.add_argument("x", type=float)
    p_pi.add_argument("--method", choices=("auto", "sieve", "legendre"), default="auto")

    p_psi = sub.add_parser("psi", help="Chebyshev psi(x)")
    p_psi.add_argument("x", type=int)

    p_bound = sub.add_parser("bound", help="bound registry operations")
    bound_sub = p_bound.add_subparsers(dest="bound_command", required=True)
    bound_sub.add_parser("list", help="list registered bounds")
    p_eval = bound_sub.add_parser("eval", help="evaluate a bound at x")
    p_eval.add_argument("name")
    p_eval.add_argument("x", type=float)

    p_scan = sub.add_parser("scan", help="verify a pi inequality over a range")
    p_scan.add_argument("--bound", required=True)
    p_scan.add_argument("--dir", required=True, choices=("upper", "lower"))
    p_scan.add_argument("--from", dest="start", type=int, required=True)
    p_scan.add_argument("--to", dest="end", type=int, required=True)

    p_cross = sub.add_parser("crossover", help="locate where one bound drops below another")
    p_cross.add_argument("--left", required=True)
    p_cross.add_argument("--right", required=True)
    p_cross.add_argument("--from", dest="start", type=int, required=True)
    p_cross.add_argument("--to", dest="end", type=int, required=True)

    p_verify = sub.add_parser("verify", help="run the builtin claim suite")
    p_verify.add_argument("--claims", dest="claim_ids", default=None,
                          help="comma-separated claim ids (default: all)")
    p_verify.add_argument("--format", choices=("text", "json"), default="text")

    p_table = sub.add_parser("table", help="CSV table of pi and bound values")
    p_table.add_argument("--from", dest="start", type=int, required=True)
    p_table.add_argument("--to", dest="end", type=int, required=True)
    p_table.add_argument("--step", type=int, default=1)
    p_table.add_argument("--bounds", default=None, help="comma-separated bound names")

    return parser


def _lookup_bound(name: str):
    registry = builtin_bounds()
    if name not in registry:
        raise UnknownNameError(
            f"unknown bound {name!r}; valid names: {', '.join(registry)}"
        )
    return registry[name]


def _cmd_pi(args) -> int:
    if args.x < 0:
        raise DomainError("pi requires x >= 0")
    if args.method == "legendre":
        n = int(args.x)
        value = primes.pi_point_legendre(n) if n >= 2 else 0
    elif args.method == "sieve":
        n = int(args.x)
        value = primes.pi_table(0, max(n, 0), cap=args.cap).counts[-1] if n >= 2 else 0
        value = int(value)
    else:
        value = primes.pi_at(args.x, cap=args.cap)
    print(value)
    return 0


def _cmd_psi(args) -> int:
    res = primes.psi_at(args.x, cap=args.cap)
    print(res.value)
    return 0


def _cmd_bound(args) -> int:
    if args.bound_command == "list":
        for name, b in builtin_bounds().items():
            print(f"{name}\tvalid_from={b.valid_from:g}\t{b.formula()}")
        return 0
    b = _lookup_bound(args.name)
    res = evaluate(b, args.x)
    print(res.value)
    return 0


def _threads(args) -> int:
    return args.threads if args.threads > 0 else 0


def _cmd_scan(args) -> int:
    b = _lookup_bound(args.bound)
    direction = Direction.UPPER_STRICT if args.dir == "upper" else Direction.LOWER_STRICT
    verdict = scan.verify_pi(b, direction, args.start, args.end,
                             cap=args.cap, threads=_threads(args))
    print(
        f"{verdict.status.value} witness={verdict.witness} "
        f"min_margin={verdict.min_margin!r} points={verdict.points_checked} "
        f"ambiguous={len(verdict.ambiguous_points)}"
    )
    return 0 if verdict.status is Status.PASS else 1


def _cmd_crossover(args) -> int:
    f = _lookup_bound(args.left)
    g = _lookup_bound(args.right)
    res = scan.analytic_crossover(f, g, args.start, args.end, threads=_threads(args))
    print(
        f"threshold={res.threshold} last_failure={res.last_failure} "
        f"sign_changes={res.sign_changes} ambiguous={len(res.ambiguous_points)}"
    )
    return 0


def _cmd_verify(args) -> int:
    ids = None
    if args.claim_ids:
        ids = [t.strip() for t in args.claim_ids.split(",") if t.strip()]
    report = claims.run_all(ids, cap=args.cap, threads=_threads(args))
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.all_match else 1


def _cmd_table(args) -> int:
    names = []
    if args.bounds:
        names = [t.strip() for t in args.bounds.split(",") if t.strip()]
    registry = builtin_bounds()
    for name in names:
        if name not in registry:
            raise UnknownNameError(
                f"unknown bound {name!r}; valid names: {', '.join(registry)}"
            )
    if args.step < 1:
        raise DomainError("table step must be >= 1")
    header = "x,pi," + ",".join(names) if names else "x,pi"
    print(header)
    for x in range(args.start, args.end + 1, args.step):
        row = [str(x), str(primes.pi_at(x, cap=args.cap))]
        for name in names:
            row.append(repr(evaluate(registry[name], float(x)).value))
        print(",".join(row))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    handlers = {
        "pi": _cmd_pi,
        "psi": _cmd_psi,
        "bound": _cmd_bound,
        "scan": _cmd_scan,
        "crossover": _cmd_crossover,
        "verify": _cmd_verify,
        "table": _cmd_table,
    }
    try:
        return handlers[args.command](args)
    except (DomainError, UnknownNameError, ConfigurationError,
            ResourceLimitError, MonotonicityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CrossoverNotFoundError as exc:
        print(f"no crossover: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
