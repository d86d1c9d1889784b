"""Command-line entry point, configuration, and report emission.

One verification per invocation; reports are JSON (CSV/SVG for the table
and tiling emitters) with deterministic bytes for a given configuration.
Rationals are emitted as "p/q" strings, floats with 17 significant digits.
Exit codes: 0 pass, 1 fail, 2 indeterminate, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import gw, kahler, tropical
from .fukaya import functor_check
from .lattice import MomentPoint

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INDETERMINATE = 2
EXIT_USAGE = 64

_STATUS_CODE = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "indeterminate": EXIT_INDETERMINATE}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors carry a dedicated exit code
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _fmt(value):
    """Canonical JSON-safe rendering: Fractions as p/q, floats at 17 digits."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    return value


def emit(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(_fmt(report), indent=2) + "\n").encode()
    raise ValueError(f"cannot emit a report as {fmt!r}")


def _parse_rational_list(text: str, n: int) -> list[Fraction]:
    parts = text.split(",")
    if len(parts) != n:
        raise ValueError(f"expected {n} comma-separated rationals, got {text!r}")
    return [Fraction(p.strip()) for p in parts]


def _load_config(path: str) -> dict[str, str]:
    """key=value lines; '#' starts a comment; later keys win."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {raw.rstrip()}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def build_parser() -> _Parser:
    parser = _Parser(prog="mirrorlab", description=__doc__)
    parser.add_argument("--config", help="key=value file overriding defaults")
    parser.add_argument("--out", help="write the report to this path")
    parser.add_argument("--timing", action="store_true",
                        help="include wall-clock timing (breaks byte stability)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("functor", help="theta structure constants vs triangle counts")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cutoff", default="20")

    p = sub.add_parser("trop", help="tropical tiling as SVG")
    p.add_argument("--window", default="-3,-3,3,3")
    p.add_argument("--format", default="svg", choices=("svg",))

    p = sub.add_parser("facets", help="facet table as CSV")
    p.add_argument("--radius", default="1")
    p.add_argument("--format", default="csv", choices=("csv",))

    p = sub.add_parser("disc-series", help="disc areas at an interior basepoint")
    p.add_argument("--A", required=True, help="xi1,xi2,eta as rationals")
    p.add_argument("--cutoff", default="15")

    p = sub.add_parser("sphere-c", help="sphere-correction series")
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--window", default="9")

    p = sub.add_parser("differential", help="multiplication-by-section table")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--cutoff", default="15")

    p = sub.add_parser("leibniz", help="numeric Leibniz identity check")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--x", default="1,1")
    p.add_argument("--tau", type=float, default=0.1)
    p.add_argument("--cutoff", default="15")
    p.add_argument("--c-order", type=int, default=3)

    p = sub.add_parser("metric-check", help="sampled positive-definiteness certificate")
    p.add_argument("--T", type=float, default=kahler.DEFAULT_T)
    p.add_argument("--l", type=int, default=kahler.DEFAULT_L)
    p.add_argument("--p", type=int, default=kahler.DEFAULT_P)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--c-base", default="auto")

    p = sub.add_parser("monodromy", help="corner classes and antisymmetry")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=None)
    return parser


def _seed_from(args, config: dict[str, str]) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    if "MIRRORLAB_SEED" in os.environ:
        return int(os.environ["MIRRORLAB_SEED"])
    if "seed" in config:
        return int(config["seed"])
    return kahler.DEFAULT_SEED


def run(argv: list[str]) -> tuple[bytes, int]:
    """Execute one command; returns (output bytes, exit code)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    out, code = _dispatch(args)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(out)
    return out, code


def _dispatch(args: argparse.Namespace) -> tuple[bytes, int]:
    config = _load_config(args.config) if args.config else {}
    started = time.monotonic()

    if args.command == "trop":
        window = tuple(float(v) for v in _parse_rational_list(args.window, 4))
        return tropical.svg_tiling(window).encode(), EXIT_PASS

    if args.command == "facets":
        return tropical.facet_csv(Fraction(args.radius)).encode(), EXIT_PASS

    if args.command == "functor":
        rep = functor_check(args.i, args.j, args.k, Fraction(args.cutoff))
        body = rep.to_json()
        status = "pass" if rep.all_match else "fail"
    elif args.command == "disc-series":
        a = MomentPoint(*_parse_rational_list(args.A, 3))
        series = gw.disc_series(a, Fraction(args.cutoff))
        body = {
            "A": [a.xi1, a.xi2, a.eta],
            "cutoff": Fraction(args.cutoff),
            "series": series.to_json(),
        }
        status = "pass"
    elif args.command == "sphere-c":
        series = gw.sphere_count_C(args.max_order, Fraction(args.window))
        body = {
            "max_order": args.max_order,
            "window": Fraction(args.window),
            "series": series.to_json(),
            "note": "terms beyond the constant depend on the wall window",
        }
        status = "pass" if series.coefficient(0) == 1 else "fail"
    elif args.command == "differential":
        table = gw.differential_table(args.i, args.j, Fraction(args.cutoff))
        body = table.to_json()
        status = "pass"
    elif args.command == "leibniz":
        x = tuple(float(v) for v in _parse_rational_list(args.x, 2))
        rep = gw.leibniz_check(
            args.i, args.j, x, args.tau, Fraction(args.cutoff), args.c_order
        )
        body = rep.to_json()
        status = "pass" if rep.passed else "fail"
    elif args.command == "metric-check":
        seed = _seed_from(args, config)
        c_base = (
            kahler.calibrate_c_base(args.T, args.l, args.p, seed=seed)
            if args.c_base == "auto"
            else float(args.c_base)
        )
        body = kahler.metric_certificate(
            args.T, args.l, args.p, args.samples, seed, c_base
        )
        status = body["status"]
    elif args.command == "monodromy":
        seed = _seed_from(args, config)
        body = _monodromy_report(args.samples, seed)
        status = body["status"]
    else:  # pragma: no cover - argparse enforces the choices
        raise AssertionError(args.command)

    report = {"command": args.command, "status": status}
    report.update(body)
    if args.timing:
        report["timing_s"] = time.monotonic() - started
    return emit(report), _STATUS_CODE[status]


def _monodromy_report(samples: int, seed: int) -> dict:
    import numpy as np

    corners = kahler.monodromy_corner_table()
    corner_rows = []
    ok = True
    for cls, xi in sorted(corners.items()):
        got = kahler.monodromy_class(xi)
        corner_rows.append({"xi": [xi[0], xi[1]], "expected": list(cls), "got": list(got)})
        ok = ok and got == cls
    anti = []
    rng = np.random.default_rng(seed)
    count = 0
    while count < samples:
        xi = (
            Fraction(int(rng.integers(-4000, 4000)), 1000),
            Fraction(int(rng.integers(-4000, 4000)), 1000),
        )
        try:
            plus = kahler.monodromy_class(xi)
            minus = kahler.monodromy_class((-xi[0], -xi[1]))
        except ValueError:
            continue  # on the tropical curve; resample
        anti.append(plus == (-minus[0], -minus[1]))
        count += 1
    ok = ok and all(anti)
    fracs = kahler.transport_fractions(kahler.FiberPoint(1.0, 1.0, 1.0))
    ok = ok and abs(sum(fracs) - 1.0) <= 1e-14
    return {
        "status": "pass" if ok else "fail",
        "corners": corner_rows,
        "antisymmetry_samples": samples,
        "antisymmetry_all": all(anti) if anti else None,
        "fractions_sum_error": abs(sum(fracs) - 1.0),
    }


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(sys.argv[1:] if argv is None else argv)
    out, code = _dispatch(args)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(out)
    else:
        sys.stdout.buffer.write(out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
