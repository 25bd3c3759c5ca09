"""Command-line interface.

Subcommands: ``closed-form``, ``sample``, ``lloyd``, ``contiguous``,
``examples`` and ``dimension``. Exit status is 0 on success, 1 on invalid
input and 2 when a solver fails to converge under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings


from . import __version__
from .asymptotics import ErrorSequence, estimate_coefficient, fit_dimension
from .continuous import closed_form_error
from .discrete import CENTROID_MODES, METRICS, circular_contiguous_dp, contiguous_dp, lloyd
from .errors import SphQuantError
from .supports import CurveSupport, DiscreteMeasure, sample_equally_spaced

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERIC = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _angle(args, value: float) -> float:
    return math.radians(value) if args.degrees else value


def _add_support_args(p: argparse.ArgumentParser) -> None:
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--great-circle", action="store_true", help="the equator of the sphere")
    kind.add_argument("--small-circle", action="store_true", help="circle of latitude --lat")
    kind.add_argument("--arc", action="store_true", help="great-circle arc of length --length")
    p.add_argument("--lat", type=float, help="latitude of the small circle")
    p.add_argument("--length", type=float, help="arc length (in units of rho)")
    p.add_argument("--rho", type=float, default=1.0, help="sphere radius (default 1)")
    p.add_argument("--degrees", action="store_true", help="read --lat in degrees")


def _support_from_args(args) -> CurveSupport:
    if args.small_circle:
        if args.lat is None:
            raise UsageError("--small-circle needs --lat")
        return CurveSupport.small_circle(_angle(args, args.lat), rho=args.rho)
    if args.arc:
        if args.length is None:
            raise UsageError("--arc needs --length")
        return CurveSupport.great_arc(args.length, rho=args.rho)
    return CurveSupport.great_circle(rho=args.rho)


def _parse_range(text: str) -> list[int]:
    """``"5"`` or ``"1:64"`` (inclusive)."""
    try:
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":", 1))
            values = list(range(lo, hi + 1))
        else:
            values = [int(text)]
    except ValueError:
        raise UsageError(f"bad n value {text!r}") from None
    if not values or min(values) < 1:
        raise UsageError("n must be >= 1")
    return values


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_measure(path: str) -> DiscreteMeasure:
    try:
        with open(path, encoding="utf-8") if path != "-" else sys.stdin as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict) or "points" not in data:
        raise UsageError(f"{path}: expected an object with 'points'")
    try:
        return DiscreteMeasure.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: malformed measure ({exc})") from None


def cmd_closed_form(args) -> int:
    support = _support_from_args(args)
    L = support.length
    rows = [(n, L, closed_form_error(L, n, args.r)) for n in _parse_range(args.n)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "L", "V_n"])
    for n, length, v in rows:
        writer.writerow([n, fmt(length), fmt(v)])
    if args.csv:
        _write_text(args.csv, buf.getvalue())
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.m < 1:
        raise UsageError("--m must be >= 1")
    mu = sample_equally_spaced(_support_from_args(args), args.m)
    _write_text(args.output, _dump_json(mu.to_dict()))
    return EXIT_OK


def _report(res, args) -> int:
    out = res.to_dict()
    if args.output:
        _write_text(args.output, _dump_json(out))
    print(f"distortion {fmt(res.distortion)}")
    print(f"iterations {res.iterations}")
    print(f"converged {str(res.converged).lower()}")
    if args.strict and not res.converged:
        print("error: solver did not converge", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_lloyd(args) -> int:
    mu = _load_measure(args.input)
    if args.restarts < 1:
        raise UsageError("--restarts must be >= 1")
    res = lloyd(mu, args.n, centroid_mode=args.mode, seed=args.seed, tol=args.tol,
                max_iter=args.max_iter, r=args.r, metric=args.metric, restarts=args.restarts)
    return _report(res, args)


def cmd_contiguous(args) -> int:
    mu = _load_measure(args.input)
    if mu.support is None:
        raise UsageError("contiguous clustering needs a measure with a curve support")
    solver = circular_contiguous_dp if mu.support.is_closed else contiguous_dp
    res = solver(mu, args.n)
    return _report(res, args)


def _read_error_csv(path: str, default_r: float) -> ErrorSequence:
    try:
        with open(path, encoding="utf-8", newline="") if path != "-" else sys.stdin as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    rows = [row for row in rows if row and any(c.strip() for c in row)]
    if not rows:
        raise UsageError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    try:
        float(header[0])
        body, header = rows, None
    except ValueError:
        body = rows[1:]
    if header is None:
        cols = {"n": 0, "V": 1, "r": 2}
    else:
        names = {name: i for i, name in enumerate(header)}
        v_col = names.get("V", names.get("V_n"))
        if "n" not in names or v_col is None:
            raise UsageError(f"{path}: header needs columns n and V (or V_n)")
        cols = {"n": names["n"], "V": v_col, "r": names.get("r")}
    entries = []
    try:
        for row in body:
            r = default_r if cols["r"] is None or cols["r"] >= len(row) else float(row[cols["r"]])
            entries.append((int(float(row[cols["n"]])), float(row[cols["V"]]), r))
    except (ValueError, IndexError):
        raise UsageError(f"{path}: malformed row") from None
    return ErrorSequence.from_rows(entries)


def cmd_dimension(args) -> int:
    seq = _read_error_csv(args.input, args.r)
    fit = fit_dimension(seq)
    s = fit.dimension if args.s is None else args.s
    lo, hi = estimate_coefficient(seq, s)
    print(f"dimension {fmt(fit.dimension)}")
    print(f"r_squared {fmt(fit.r_squared)}")
    print(f"s {fmt(s)}")
    print(f"coefficient_lower {fmt(lo)}")
    print(f"coefficient_upper {fmt(hi)}")
    return EXIT_OK


def cmd_examples(args) -> int:
    from .examples import run_examples

    rows = run_examples()
    width = max(len(r.name) for r in rows)
    for row in rows:
        status = "PASS" if row.passed else "FAIL"
        print(f"{status}  {row.name:<{width}}  computed={row.computed}  expected={row.expected}"
              f"  tol={row.tol}")
    failed = sum(not r.passed for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} passed")
    return EXIT_OK if failed == 0 else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sphquant", description="Geodesic optimal quantization on spheres.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("closed-form", help="optimal error for a uniform law on a curve")
    _add_support_args(p)
    p.add_argument("--n", required=True, help="number of codepoints, or a range lo:hi")
    p.add_argument("--r", type=float, default=2.0, help="distortion order (>= 1)")
    p.add_argument("--csv", help="also write the table to this CSV file")
    p.set_defaults(func=cmd_closed_form)

    p = sub.add_parser("sample", help="equally spaced discrete measure on a curve")
    _add_support_args(p)
    p.add_argument("--m", type=int, required=True, help="number of points")
    p.add_argument("--output", "-o", help="JSON output path (default stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("lloyd", help="Lloyd iteration on a measure file")
    p.add_argument("--input", "-i", required=True, help="measure JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=CENTROID_MODES, default="extrinsic")
    p.add_argument("--metric", choices=METRICS, default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--output", "-o", help="result JSON path")
    p.add_argument("--strict", action="store_true", help="exit 2 if the solver does not converge")
    p.set_defaults(func=cmd_lloyd)

    p = sub.add_parser("contiguous", help="exact contiguous clustering on a curve measure")
    p.add_argument("--input", "-i", required=True, help="measure JSON with a support")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output", "-o", help="result JSON path")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=cmd_contiguous)

    p = sub.add_parser("examples", help="reproduce the worked examples")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("dimension", help="estimate dimension and coefficient from errors")
    p.add_argument("--input", "-i", required=True, help="CSV with columns n,V,r or n,L,V_n")
    p.add_argument("--r", type=float, default=2.0, help="order when the CSV has no r column")
    p.add_argument("--s", type=float, help="dimension for the coefficient (default: fitted)")
    p.set_defaults(func=cmd_dimension)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except (UsageError, SphQuantError) as exc:
        print(f"sphquant {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"sphquant {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
