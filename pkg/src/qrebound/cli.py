"""Command line front end.

Three subcommands:

    montecarlo   sample random qubit triples, write a table of
                 uncertainty values against both bounds
    saturation   evaluate the closed-form saturating family on a
                 list of asymmetry parameters
    verify       run one of the randomized invariant suites

Exit codes: 0 success, 1 scientific failure (a bound violated or a
suite check failed), 2 I/O failure, 64 usage error.

Output files are deterministic: identical flags give identical bytes,
so the metadata header carries versions and seeds but no wall-clock
field.  CSV uses CRLF line endings, a leading block of "# key: value"
comment lines, then a header row; floats are printed with 17
significant digits.  JSON mirrors the same content as an object with
"metadata" and "rows"; non-finite floats are encoded as the strings
"inf", "-inf" and "nan" to stay inside strict JSON.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__
from .montecarlo import ExperimentResult, run_experiment, saturation_family
from .verify import SUITE_CHOICES, run_suite

EXIT_OK = 0
EXIT_SCIENTIFIC = 1
EXIT_IO = 2
EXIT_USAGE = 64

_SCHEMA = "qrebound/1"
_SEED_MAX = (1 << 64) - 1
_SATURATION_GAP = 1e-8


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; we reserve that for
    I/O and use 64 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed_value(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value <= _SEED_MAX:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _eps_list(text: str) -> list:
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            eps = float(part)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {part!r}")
        if not eps > 0.0 or math.isinf(eps):
            raise argparse.ArgumentTypeError(
                f"asymmetry parameters must be finite and > 0, got {part}"
            )
        values.append(eps)
    if not values:
        raise argparse.ArgumentTypeError("need at least one value")
    return values


def _omega_value(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value == 0.0 or not math.isfinite(value):
        raise argparse.ArgumentTypeError("omega must be finite and nonzero")
    return value


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _json_value(x: float):
    if math.isfinite(x):
        return x
    if math.isnan(x):
        return "nan"
    return "inf" if x > 0 else "-inf"


def _write_csv(stream, metadata: dict, header: list, rows: list) -> None:
    for key, value in metadata.items():
        stream.write(f"# {key}: {value}\r\n")
    writer = csv.writer(stream, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)


def _emit(path, write_fn) -> None:
    """Run write_fn on the output stream; path None or '-' is stdout."""
    if path is None or path == "-":
        write_fn(sys.stdout)
    else:
        with open(path, "w", newline="", encoding="utf-8") as stream:
            write_fn(stream)


def _say(path, message: str) -> None:
    """Summary lines go to stderr when the table itself is on stdout."""
    out = sys.stderr if path is None or path == "-" else sys.stdout
    print(message, file=out)


def _montecarlo_metadata(args, result: ExperimentResult) -> dict:
    return {
        "schema": _SCHEMA,
        "command": "montecarlo",
        "n": args.n,
        "seed": args.seed,
        "package": __version__,
        "numpy": np.__version__,
        "redraws": result.redraws,
    }


def cmd_montecarlo(args) -> int:
    result = run_experiment(args.n, args.seed)
    metadata = _montecarlo_metadata(args, result)
    header = ["index", "u", "s_tilde", "s_cl", "bound", "bound_cl", "classical_violated"]
    if args.format == "csv":
        rows = [
            [
                r.index,
                _fmt(r.u),
                _fmt(r.s_tilde),
                _fmt(r.s_cl),
                _fmt(r.bound),
                _fmt(r.bound_cl),
                "true" if r.classical_violated else "false",
            ]
            for r in result.records
        ]
        _emit(args.out, lambda s: _write_csv(s, metadata, header, rows))
    else:
        rows = [
            {
                "index": r.index,
                "params": {
                    "p1": r.params.p1,
                    "q1": r.params.q1,
                    "abs_c_sq": r.params.abs_c_sq,
                    "phi1": r.params.phi1,
                    "omega": r.params.omega,
                    "abs_d_sq": r.params.abs_d_sq,
                    "phi2": r.params.phi2,
                },
                "u": _json_value(r.u),
                "s_tilde": _json_value(r.s_tilde),
                "s_cl": _json_value(r.s_cl),
                "bound": _json_value(r.bound),
                "bound_cl": _json_value(r.bound_cl),
                "satisfied": r.satisfied,
                "classical_violated": r.classical_violated,
                "seed": r.seed,
            }
            for r in result.records
        ]
        document = {"metadata": metadata, "rows": rows}
        _emit(
            args.out,
            lambda s: s.write(json.dumps(document, indent=2, allow_nan=False) + "\n"),
        )
    _say(args.out, f"records: {len(result.records)}")
    _say(args.out, f"redraws: {result.redraws}")
    _say(args.out, f"violations: {result.violations}")
    _say(args.out, f"classical violations: {result.classical_violations}")
    return EXIT_SCIENTIFIC if result.violations else EXIT_OK


def cmd_saturation(args) -> int:
    records = saturation_family(args.eps_list, omega=args.omega, check=False)
    metadata = {
        "schema": _SCHEMA,
        "command": "saturation",
        "eps": ",".join(_fmt(e) for e in args.eps_list),
        "omega": _fmt(args.omega),
        "package": __version__,
        "numpy": np.__version__,
    }
    gaps = [r.u - r.bound for r in records]
    rows = [
        [_fmt(eps), _fmt(r.u), _fmt(r.s_tilde), _fmt(r.bound), _fmt(gap)]
        for eps, r, gap in zip(args.eps_list, records, gaps)
    ]
    _emit(
        args.out,
        lambda s: _write_csv(s, metadata, ["eps", "u", "s_tilde", "bound", "gap"], rows),
    )
    worst = max(abs(g) for g in gaps)
    _say(args.out, f"rows: {len(rows)}")
    _say(args.out, f"worst gap: {worst:.3e}")
    return EXIT_SCIENTIFIC if worst > _SATURATION_GAP else EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite, draws=args.draws, seed=args.seed)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.name:<{width}}  worst {r.worst:.3e}"
        if r.note:
            line += f"  [{r.note}]"
        print(line)
    passed = sum(r.passed for r in results)
    print(f"passed {passed}/{len(results)} checks")
    return EXIT_OK if passed == len(results) else EXIT_SCIENTIFIC


def build_parser() -> _Parser:
    parser = _Parser(prog="qrebound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    mc = sub.add_parser("montecarlo", help="sample random qubit triples")
    mc.add_argument("--n", type=_positive_int, default=10000, help="number of records")
    mc.add_argument("--seed", type=_seed_value, default=42, help="base RNG seed")
    mc.add_argument("--out", default=None, help="output path (default stdout)")
    mc.add_argument("--format", choices=("csv", "json"), default="csv")
    mc.set_defaults(func=cmd_montecarlo)

    sat = sub.add_parser("saturation", help="closed-form saturating family")
    sat.add_argument(
        "--eps-list",
        type=_eps_list,
        default=[0.1, 0.5, 1.0, 2.0, 4.0],
        help="comma-separated asymmetry parameters, all > 0",
    )
    sat.add_argument("--omega", type=_omega_value, default=1.0, help="observable scale")
    sat.add_argument("--out", default=None, help="output path (default stdout)")
    sat.set_defaults(func=cmd_saturation)

    ver = sub.add_parser("verify", help="run an invariant suite")
    ver.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    ver.add_argument("--draws", type=_positive_int, default=1000)
    ver.add_argument("--seed", type=_seed_value, default=7)
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"qrebound: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
