"""Command-line front end.

    harmonic-bounds gamma --n 100 --q 8
    harmonic-bounds bounds --n 1 --family sharp
    harmonic-bounds phi --x 2
    harmonic-bounds residual --n 10
    harmonic-bounds table --from 1 --to 20 --format csv
    harmonic-bounds verify theorem --from 1 --to 100000 --jobs 4

Exit codes: 0 ok / all checks passed, 1 a verification failed,
2 a verification was inconclusive, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .bounds import BoundFamily, bounds_for, phi, residual, sharp_bounds
from .exact import to_rational
from .psi import PrecisionError, euler_gamma_enclosure, gamma_enclosure
from .realnum import Interval, decimal_string
from .verify import (
    SUITES,
    random_rationals,
    verify_integrand_signs,
    verify_lemma_brackets,
    verify_phi_derivative_sign,
    verify_phi_monotone,
    verify_series_coefficients,
    verify_theorem,
)

EX_USAGE = 64

CSV_TABLE_HEADER = [
    "n", "residual_lo", "residual_hi", "franel_lo", "franel_hi", "tm_lo", "tm_hi",
    "sharp_lo_lo", "sharp_lo_hi", "sharp_hi", "phi_lo", "phi_hi",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _bits(s: str) -> int:
    v = int(s)
    if v < 16:
        raise argparse.ArgumentTypeError("--bits must be >= 16")
    return v


def _positive_rational(s: str) -> Fraction:
    try:
        v = to_rational(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {s}")
    return v


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {s}")
    return v


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    # shared by the top-level parser and every subcommand, so flags work on either side
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--bits", type=_bits, default=d(128), help="working precision in bits (>= 16)")
    p.add_argument("--width", type=_positive_rational, default=d(Fraction(1, 10**20)),
                   help="target enclosure width, parsed exactly (default 1e-20)")
    p.add_argument("--format", choices=("json", "csv", "text"), default=d("text"))
    p.add_argument("--digits", type=_positive_int, default=d(25), help="significant digits printed")
    p.add_argument("--jobs", type=_positive_int, default=d(1), help="worker processes for verify sweeps")
    p.add_argument("--out", default=d(None), help="write output to this file instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="harmonic-bounds", description=__doc__.split("\n")[0],
                     parents=[_global_options(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_global_options(True)]

    p = sub.add_parser("gamma", parents=common, help="enclose Euler's constant")
    p.add_argument("--n", type=_positive_int, default=100)
    p.add_argument("--q", type=_positive_int, default=8)

    p = sub.add_parser("bounds", parents=common, help="bound pair for H_n - ln n - gamma")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--family", choices=[f.value for f in BoundFamily] + ["all"], default="all")

    p = sub.add_parser("phi", parents=common, help="enclose phi(x) = 1/(psi(x+1) - ln x) - 2x")
    p.add_argument("--x", type=_positive_rational, required=True)

    p = sub.add_parser("residual", parents=common, help="enclose H_n - ln n - gamma")
    p.add_argument("--n", type=_positive_int, required=True)

    p = sub.add_parser("table", parents=common, help="one row per n with all families, residual and phi")
    p.add_argument("--from", dest="start", type=_positive_int, default=1)
    p.add_argument("--to", dest="stop", type=_positive_int, default=10)

    p = sub.add_parser("verify", parents=common, help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--from", dest="start", type=_positive_int, default=1)
    p.add_argument("--to", dest="stop", type=_positive_int, default=100)
    p.add_argument("--samples", type=_positive_int, default=1000,
                   help="sample count for the lemma and integrand suites")
    p.add_argument("--seed", type=int, default=0)
    return parser


# formatting ----------------------------------------------------------------------


def _lo(r, digits):
    return decimal_string(r, digits, up=False)


def _hi(r, digits):
    return decimal_string(r, digits, up=True)


def _ival(iv: Interval, digits: int) -> dict:
    return {"lo": _lo(iv.lo, digits), "hi": _hi(iv.hi, digits)}


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _table_row(n: int, gamma: Interval, width, bits: int, digits: int) -> dict:
    r = residual(n, width, bits)
    sharp = sharp_bounds(n, gamma, bits)
    fr = bounds_for("franel", n, precision_bits=bits)
    tm = bounds_for("toth_mare", n, precision_bits=bits)
    # phi at an integer is 1/residual - 2n; tighten the residual for it
    p = phi(n, width, bits)
    return {
        "n": n,
        "residual": _ival(r, digits),
        "franel": [_lo(fr.lower.lo, digits), _hi(fr.upper.hi, digits)],
        "toth_mare": [_lo(tm.lower.lo, digits), _hi(tm.upper.hi, digits)],
        "sharp": [_ival(sharp.lower, digits), _ival(sharp.upper, digits)],
        "phi": _ival(p, digits),
    }


def _row_to_csv(row: dict) -> list:
    return [
        row["n"], row["residual"]["lo"], row["residual"]["hi"],
        row["franel"][0], row["franel"][1], row["toth_mare"][0], row["toth_mare"][1],
        row["sharp"][0]["lo"], row["sharp"][0]["hi"], row["sharp"][1]["hi"],
        row["phi"]["lo"], row["phi"]["hi"],
    ]


def _cmd_gamma(args) -> tuple[str, int]:
    enc = euler_gamma_enclosure(args.n, args.q, args.bits)
    g = _ival(enc.value, args.digits)
    if args.format == "json":
        doc = {"gamma": g, "n": args.n, "q": args.q, "method": enc.method, "bits": args.bits}
        return json.dumps(doc, indent=2) + "\n", 0
    if args.format == "csv":
        return _csv(["n", "q", "gamma_lo", "gamma_hi"], [[args.n, args.q, g["lo"], g["hi"]]]), 0
    return f"gamma in [{g['lo']}, {g['hi']}]  (n={args.n}, q={args.q}, euler_maclaurin)\n", 0


def _cmd_bounds(args) -> tuple[str, int]:
    families = [f.value for f in BoundFamily] if args.family == "all" else [args.family]
    gamma = gamma_enclosure(Fraction(1, 10**40), args.bits).value
    pairs = [bounds_for(f, args.n, gamma, args.bits) for f in families]
    if args.format == "json":
        doc = [
            {"family": p.family.value, "n": p.n, "lower": _ival(p.lower, args.digits),
             "upper": _ival(p.upper, args.digits), "lower_strict": p.lower_strict,
             "upper_strict": p.upper_strict}
            for p in pairs
        ]
        return json.dumps(doc if len(doc) > 1 else doc[0], indent=2) + "\n", 0
    rows = [[p.family.value, p.n, _lo(p.lower.lo, args.digits), _hi(p.lower.hi, args.digits),
             _lo(p.upper.lo, args.digits), _hi(p.upper.hi, args.digits)] for p in pairs]
    if args.format == "csv":
        return _csv(["family", "n", "lower_lo", "lower_hi", "upper_lo", "upper_hi"], rows), 0
    lines = []
    for p, row in zip(pairs, rows):
        lop = "<=" if not p.lower_strict else "<"
        uop = "<" if p.upper_strict else "<="
        lines.append(f"{row[0]:>9}  [{row[2]}, {row[3]}] {lop} r_{p.n} {uop} [{row[4]}, {row[5]}]")
    return "\n".join(lines) + "\n", 0


def _cmd_phi(args) -> tuple[str, int]:
    p = phi(args.x, args.width, args.bits)
    x = args.x
    xs = str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    v = _ival(p, args.digits)
    if args.format == "json":
        return json.dumps({"x": xs, "phi": v, "bits": args.bits}, indent=2) + "\n", 0
    if args.format == "csv":
        return _csv(["x", "phi_lo", "phi_hi"], [[xs, v["lo"], v["hi"]]]), 0
    return f"phi({xs}) in [{v['lo']}, {v['hi']}]\n", 0


def _cmd_residual(args) -> tuple[str, int]:
    r = residual(args.n, args.width, args.bits)
    v = _ival(r, args.digits)
    if args.format == "json":
        return json.dumps({"n": args.n, "residual": v, "bits": args.bits}, indent=2) + "\n", 0
    if args.format == "csv":
        return _csv(["n", "residual_lo", "residual_hi"], [[args.n, v["lo"], v["hi"]]]), 0
    return f"H_{args.n} - ln {args.n} - gamma in [{v['lo']}, {v['hi']}]\n", 0


def _cmd_table(args) -> tuple[str, int]:
    if args.start > args.stop:
        raise UsageError("--from must not exceed --to")
    gamma = gamma_enclosure(Fraction(1, 10**40), args.bits).value
    rows = [_table_row(n, gamma, args.width, args.bits, args.digits) for n in range(args.start, args.stop + 1)]
    if args.format == "json":
        return json.dumps(rows, indent=2) + "\n", 0
    if args.format == "csv":
        return _csv(CSV_TABLE_HEADER, [_row_to_csv(r) for r in rows]), 0
    lines = ["  ".join(f"{h:>12}" for h in ("n", "residual_lo", "residual_hi", "phi_lo", "phi_hi"))]
    for r in rows:
        lines.append("  ".join(f"{v:>12}" for v in (
            str(r["n"]), r["residual"]["lo"], r["residual"]["hi"], r["phi"]["lo"], r["phi"]["hi"])))
    return "\n".join(lines) + "\n", 0


def _cmd_verify(args) -> tuple[str, int]:
    if args.start > args.stop:
        raise UsageError("--from must not exceed --to")
    suite = args.suite
    if suite == "theorem":
        rep = verify_theorem(args.start, args.stop, args.width, args.bits, args.jobs)
    elif suite == "phi-monotone":
        rep = verify_phi_monotone(args.start, args.stop, args.width, args.bits, args.jobs)
    elif suite == "phi-derivative":
        lo = max(args.start, 3)
        if lo > args.stop:
            raise UsageError("phi-derivative needs --to >= 3 (samples must exceed 12/5)")
        xs = [Fraction(n) for n in range(lo, args.stop + 1)] + [Fraction(2 * n + 1, 2) for n in range(lo, args.stop)]
        rep = verify_phi_derivative_sign(xs, args.width, args.bits)
    elif suite == "series":
        if args.stop < 7:
            raise UsageError("series needs --to >= 7")
        rep = verify_series_coefficients(args.stop)
    elif suite == "integrands":
        ts = [50 * (i + 1) / args.samples for i in range(args.samples)]
        rep = verify_integrand_signs(ts)
    else:
        rep = verify_lemma_brackets(random_rationals(args.samples, seed=args.seed), precision_bits=args.bits)

    doc = rep.to_json()
    if args.format == "json":
        return json.dumps(doc, indent=2) + "\n", rep.exit_code
    if args.format == "csv":
        rows = [[f["subject"], f["relation"], f["kind"], json.dumps(f["witness"])] for f in doc["failures"]]
        return _csv(["subject", "relation", "kind", "witness"], rows), rep.exit_code
    lines = [
        f"suite {doc['suite']} range {doc['range'][0]}..{doc['range'][1]}: {doc['status'].upper()}",
        f"  checked {doc['checked']} ({'certified' if doc['certified'] else 'sampled, not certified'})",
    ]
    for rel, cnt in doc["relations"].items():
        lines.append(f"  {cnt:>8}  {rel}")
    for f in doc["failures"][:20]:
        lines.append(f"  {f['kind']}: {f['subject']}: {f['relation']} {f['witness']}")
    if len(doc["failures"]) > 20:
        lines.append(f"  ... {len(doc['failures']) - 20} more")
    return "\n".join(lines) + "\n", rep.exit_code


_COMMANDS = {
    "gamma": _cmd_gamma,
    "bounds": _cmd_bounds,
    "phi": _cmd_phi,
    "residual": _cmd_residual,
    "table": _cmd_table,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = _COMMANDS[args.command](args)
    except (UsageError, PrecisionError, ValueError) as exc:
        print(f"harmonic-bounds: error: {exc}", file=sys.stderr)
        return EX_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
