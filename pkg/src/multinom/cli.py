"""Command-line surface: every operation, with text/json/csv output.

Exit codes: 0 success (and no witness for scan), 1 failed verification,
2 usage error, 3 scan found a witness, 4 scan left weights inconclusive.
Integers that can outgrow 64 bits (multinomial values, gcds, orbit sizes)
are rendered as decimal strings in JSON; weights, primes, parts, and
exponents stay plain numbers.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import verify as verify_mod
from .binom_bounds import gcd_bound_report, orbit_spectrum
from .kummer import Decomposition, carry_count, ch_value, is_p_acceptable, p_threshold
from .orbit_lab import enumerate_orbits
from .wasserman_search import (
    digit_sum_survivors,
    gap_candidates,
    gap_records,
    scan_range,
    witness_acceptability,
)

FORMATS = ("text", "json", "csv")


def _emit(fmt: str, text_lines, payload, csv_header=None, csv_rows=None) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        for line in text_lines:
            print(line)


def _big(x: int) -> str:
    """Decimal-string rendering for integers that may exceed 64 bits."""
    return str(x)


def _frac(f) -> str:
    return f"{f.numerator}/{f.denominator}"


def _usage_error(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)
    raise SystemExit(2)


def _parse_shapes(spec: str):
    try:
        return [tuple(int(x) for x in part.split(",")) for part in spec.split(";") if part]
    except ValueError:
        _usage_error(f"bad --shapes spec {spec!r}")


def _cmd_ch(args, fmt: str) -> int:
    factored, value = ch_value(args.parts)
    _emit(
        fmt,
        [str(value)],
        {
            "parts": args.parts,
            "weight": sum(args.parts),
            "value": _big(value),
            "factors": [{"p": f.p, "e": f.e} for f in factored.factors],
        },
        ["parts", "value"],
        [[" ".join(map(str, args.parts)), _big(value)]],
    )
    return 0


def _cmd_carries(args, fmt: str) -> int:
    c = carry_count(args.parts, args.p)
    _emit(
        fmt,
        [str(c)],
        {"p": args.p, "parts": args.parts, "carries": c},
        ["p", "parts", "carries"],
        [[args.p, " ".join(map(str, args.parts)), c]],
    )
    return 0


def _cmd_acceptable(args, fmt: str) -> int:
    ok = is_p_acceptable(Decomposition(tuple(args.parts)), args.p)
    _emit(
        fmt,
        ["true" if ok else "false"],
        {"p": args.p, "parts": args.parts, "acceptable": ok},
        ["p", "parts", "acceptable"],
        [[args.p, " ".join(map(str, args.parts)), ok]],
    )
    return 0


def _cmd_threshold(args, fmt: str) -> int:
    t = p_threshold(args.N, args.p, args.k)
    _emit(
        fmt,
        ["none" if t is None else str(t)],
        {"N": args.N, "p": args.p, "k": args.k, "threshold": t},
        ["N", "p", "k", "threshold"],
        [[args.N, args.p, args.k, "" if t is None else t]],
    )
    return 0


def _cmd_gcd_bound(args, fmt: str) -> int:
    rep = gcd_bound_report(args.N, args.i, args.j)
    _emit(
        fmt,
        [
            f"gcd {rep.gcd}",
            f"lcm {rep.lcm}",
            f"bound_exact_sq {_frac(rep.bound_exact_sq)}",
            f"bound_rough_sq {_frac(rep.bound_rough_sq)}",
            f"satisfied {'true' if rep.satisfied else 'false'}",
        ],
        {
            "N": rep.N,
            "i": rep.i,
            "j": rep.j,
            "gcd": _big(rep.gcd),
            "lcm": _big(rep.lcm),
            "bound_exact_sq": _frac(rep.bound_exact_sq),
            "bound_rough_sq": _frac(rep.bound_rough_sq),
            "satisfied": rep.satisfied,
        },
        ["N", "i", "j", "gcd", "lcm", "bound_exact_sq", "bound_rough_sq", "satisfied"],
        [[rep.N, rep.i, rep.j, _big(rep.gcd), _big(rep.lcm),
          _frac(rep.bound_exact_sq), _frac(rep.bound_rough_sq), rep.satisfied]],
    )
    return 0


def _cmd_orbits(args, fmt: str) -> int:
    if args.shapes is not None:
        shapes = _parse_shapes(args.shapes)
        weights = {sum(s) for s in shapes}
        if len(weights) != 1:
            _usage_error(f"shapes must share one weight, got {sorted(weights)}")
        n = weights.pop()
        classes = enumerate_orbits(n, shapes)
        _emit(
            fmt,
            [f"{cls.invariant} size={cls.size}" for cls in classes],
            {
                "N": n,
                "shapes": [list(s) for s in shapes],
                "classes": [
                    {"invariant": cls.invariant, "size": _big(cls.size)} for cls in classes
                ],
            },
            ["invariant", "size"],
            [[str(cls.invariant), _big(cls.size)] for cls in classes],
        )
        return 0
    if args.N is None or args.i is None or args.j is None:
        _usage_error("orbits needs either N i j or --shapes")
    spec = orbit_spectrum(args.N, args.i, args.j)
    _emit(
        fmt,
        [f"h={h} size={size}" for h, size in sorted(spec.sizes.items())],
        {
            "N": spec.N,
            "i": spec.i,
            "j": spec.j,
            "sizes": {str(h): _big(size) for h, size in sorted(spec.sizes.items())},
        },
        ["h", "size"],
        [[h, _big(size)] for h, size in sorted(spec.sizes.items())],
    )
    return 0


def _cmd_survivors(args, fmt: str) -> int:
    vals = digit_sum_survivors(args.nmax, args.k)
    _emit(
        fmt,
        [str(v) for v in vals],
        {"nmax": args.nmax, "k": args.k, "survivors": vals},
        ["n"],
        [[v] for v in vals],
    )
    return 0


def _cmd_gaps(args, fmt: str) -> int:
    if args.candidates:
        vals = gap_candidates(args.limit)
        _emit(
            fmt,
            [str(v) for v in vals],
            {"limit": args.limit, "candidates": vals},
            ["n"],
            [[v] for v in vals],
        )
        return 0
    recs = gap_records(args.limit, args.min)
    _emit(
        fmt,
        [f"{r.lower.value} {r.upper.value} {r.length}" for r in recs],
        [{"lower": r.lower.value, "upper": r.upper.value, "length": r.length} for r in recs],
        ["lower", "upper", "length"],
        [[r.lower.value, r.upper.value, r.length] for r in recs],
    )
    return 0


def _cmd_scan(args, fmt: str) -> int:
    report = scan_range(
        args.n_from,
        args.n_to,
        k=args.k,
        use_filters=not args.no_filters,
        jobs=args.jobs,
        checkpoint_path=args.checkpoint,
        node_limit=args.node_limit,
    )
    counts: dict[str, int] = {}
    for rec in report.records:
        counts[rec.status] = counts.get(rec.status, 0) + 1

    def audit(rec):
        return {
            str(p): flags
            for p, flags in witness_acceptability(rec.n, rec.witness).items()
        }

    lines = [f"scan [{report.n_lo},{report.n_hi}] k={report.k} "
             f"filters={'on' if report.use_filters else 'off'}"]
    for rec in report.records:
        line = f"n={rec.n} {rec.status}"
        if rec.p is not None:
            line += f" p={rec.p}"
        if rec.witness is not None:
            line += " witness=" + " | ".join("+".join(map(str, w)) for w in rec.witness)
        lines.append(line)
        if rec.witness is not None:
            for p, flags in audit(rec).items():
                lines.append("  p=" + p + " acceptable " + "".join("1" if f else "0" for f in flags))
    lines.append("totals " + " ".join(f"{s}={c}" for s, c in sorted(counts.items())))
    lines.append(f"witnesses {len(report.witnesses)} inconclusive {len(report.inconclusive)}")
    _emit(
        fmt,
        lines,
        report.to_payload(),
        ["n", "status", "p", "witness", "acceptability"],
        [
            [rec.n, rec.status, "" if rec.p is None else rec.p,
             "" if rec.witness is None else json.dumps([list(w) for w in rec.witness]),
             "" if rec.witness is None else json.dumps(audit(rec))]
            for rec in report.records
        ],
    )
    if report.witnesses:
        return 3
    if report.inconclusive:
        return 4
    return 0


def _cmd_verify_paper(args, fmt: str) -> int:
    only = args.only.split(",") if args.only else None
    if only:
        known = {c[0] for c in verify_mod.CRITERIA}
        bad = [k for k in only if k not in known]
        if bad:
            _usage_error(f"unknown criteria: {', '.join(bad)}")
    results = verify_mod.run_criteria(only)
    _emit(
        fmt,
        [
            f"{'PASS' if r.ok else 'FAIL'} {r.key} ({r.millis:.0f} ms) - {r.detail}"
            for r in results
        ],
        [
            {"criterion": r.key, "status": "pass" if r.ok else "fail", "millis": round(r.millis, 3)}
            for r in results
        ],
        ["criterion", "status", "millis"],
        [[r.key, "pass" if r.ok else "fail", round(r.millis, 3)] for r in results],
    )
    return 0 if all(r.ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multinom",
        description="Divisibility structure of multinomial coefficients.",
    )
    parser.add_argument("--format", choices=FORMATS, default=None,
                        help="output format (default: text)")
    fmt_parent = argparse.ArgumentParser(add_help=False)
    fmt_parent.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS,
                            help="output format (default: text)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ch", parents=[fmt_parent],
                       help="multinomial coefficient of the given parts")
    p.add_argument("parts", type=int, nargs="+")
    p.set_defaults(fn=_cmd_ch)

    p = sub.add_parser("carries", parents=[fmt_parent],
                       help="base-p carries when the parts are added")
    p.add_argument("p", type=int)
    p.add_argument("parts", type=int, nargs="+")
    p.set_defaults(fn=_cmd_carries)

    p = sub.add_parser("acceptable", parents=[fmt_parent],
                       help="whether the parts add without carrying in base p")
    p.add_argument("p", type=int)
    p.add_argument("parts", type=int, nargs="+")
    p.set_defaults(fn=_cmd_acceptable)

    p = sub.add_parser("threshold", parents=[fmt_parent],
                       help="largest part in any p-acceptable k-part decomposition of N")
    p.add_argument("N", type=int)
    p.add_argument("p", type=int)
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(fn=_cmd_threshold)

    p = sub.add_parser("gcd-bound", parents=[fmt_parent],
                       help="gcd of C(N,i), C(N,j) with its exact lower bounds")
    p.add_argument("N", type=int)
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.set_defaults(fn=_cmd_gcd_bound)

    p = sub.add_parser("orbits", parents=[fmt_parent],
                       help="orbit sizes: formula for a pair (N i j) or brute force (--shapes)")
    p.add_argument("N", type=int, nargs="?")
    p.add_argument("i", type=int, nargs="?")
    p.add_argument("j", type=int, nargs="?")
    p.add_argument("--shapes", help="block sizes, e.g. '2,4;3,3'")
    p.set_defaults(fn=_cmd_orbits)

    p = sub.add_parser("survivors", parents=[fmt_parent],
                       help="weights the digit-sum filter cannot exclude")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(fn=_cmd_survivors)

    p = sub.add_parser("gaps", parents=[fmt_parent],
                       help="prime-power gaps (or, with --candidates, weights far above one)")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--min", type=int, default=12)
    p.add_argument("--candidates", action="store_true",
                   help="list weights exceeding the prime power below them by >= 12")
    p.set_defaults(fn=_cmd_gaps)

    p = sub.add_parser("scan", parents=[fmt_parent],
                       help="filter and exhaustively search a range of weights")
    p.add_argument("--from", dest="n_from", type=int, required=True)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--no-filters", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--node-limit", type=int, default=None)
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("verify-paper", parents=[fmt_parent],
                       help="run the published-value reproduction suite")
    p.add_argument("--only", default=None,
                   help="comma-separated criterion keys to run")
    p.set_defaults(fn=_cmd_verify_paper)

    return parser


def run(argv=None) -> int:
    """Parse argv and dispatch; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or "text"
    return args.fn(args, fmt)


def main(argv=None) -> None:
    try:
        code = run(argv)
    except SystemExit:
        raise
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2) from exc
    sys.exit(code)


if __name__ == "__main__":
    main()
