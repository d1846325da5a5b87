"""Command-line front end.

    harmonium point boson -N 2 -r 1
    harmonium point fermion-spinned --pairs 2 -r 4 --csv
    harmonium sweep fermion-spinless -N 2:6 --grid=-1/15:22:50 --out sl.csv --jobs 4
    harmonium figure fig4 --out fig4.csv
    harmonium verify --level full

Values that start with '-' but are not plain decimals (-1/15, grids) must be
attached with '=', e.g. ``--ratio=-1/15``.

Exit codes: 0 success, 1 verify failure, 2 domain error, 64 usage error.
"""
from __future__ import annotations

import argparse
import contextlib
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import DomainError, UnboundSystem
from .report import VARIANTS, report_csv, report_json

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(text: str) -> float:
    """Float or exact fraction such as -1/15."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="harmonium", description="Entanglement of the N-particle harmonium.")
    parser.add_argument("--version", action="version", version=f"harmonium {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("point", help="evaluate one parameter point")
    p.add_argument("variant", choices=VARIANTS)
    p.add_argument("-N", "--particles", type=int, help="particle count (total; even for fermion-spinned)")
    p.add_argument("--pairs", type=int, help="pair count for fermion-spinned")
    p.add_argument("-r", "--ratio", type=_number, required=True, help="coupling ratio delta/k")
    p.add_argument("--bits", action="store_true", help="boson entropy in bits instead of nats")
    p.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    p.add_argument("--out", type=Path, help="write to this file instead of stdout")

    s = sub.add_parser("sweep", help="Cartesian sweep over particle counts and coupling ratios")
    s.add_argument("variant", choices=VARIANTS)
    s.add_argument("-N", "--particles", nargs="+", help="counts or inclusive ranges a:b")
    s.add_argument("--pairs", nargs="+", help="pair counts or ranges for fermion-spinned")
    s.add_argument("-r", "--ratio", type=_number, nargs="*", default=None, help="explicit coupling ratios")
    s.add_argument("--grid", help="coupling grid start:stop:steps[:log]")
    s.add_argument("--bits", action="store_true")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--csv", action="store_true", help="same as --format csv")
    s.add_argument("--out", type=Path)
    s.add_argument("--jobs", type=int, default=1, help="worker processes")

    f = sub.add_parser("figure", help="write the sampled data behind a figure")
    f.add_argument("id", help="fig2, fig3, fig4, fig5, fig6, fig8, fig9 or fig10")
    f.add_argument("--out", type=Path, help="output file or directory (default stdout)")

    v = sub.add_parser("verify", help="run the oracle cross-checks")
    v.add_argument("--level", choices=("quick", "full"), default="quick")
    v.add_argument("--tolerance-scale", type=float, default=1.0,
                   help="multiply every tolerance; 0 forces failures (harness self-test)")
    return parser


@contextlib.contextmanager
def _output(path: Path | None):
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        yield fh


def _point_count(args) -> int:
    if args.variant == "fermion-spinned":
        if args.pairs is not None:
            return args.pairs
        if args.particles is None:
            raise UsageError("fermion-spinned needs --pairs or an even -N")
        if args.particles % 2:
            raise UsageError(f"closed-shell spinned fermions need an even particle count, got {args.particles}")
        return args.particles // 2
    if args.pairs is not None:
        raise UsageError("--pairs only applies to fermion-spinned")
    if args.particles is None:
        raise UsageError("-N/--particles is required")
    return args.particles


def cmd_point(args) -> int:
    from .report import evaluate_point

    n = _point_count(args)
    rep = evaluate_point(args.variant, n, args.ratio, "2" if args.bits else "e")
    with _output(args.out) as fh:
        fh.write(report_csv([rep]) if args.csv else report_json(rep) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .sweep import SweepSpec, parse_counts, parse_grid, write_sweep

    if args.variant == "fermion-spinned":
        tokens = args.pairs
        if tokens is None and args.particles is not None:
            totals = parse_counts(args.particles)
            if any(n % 2 for n in totals):
                raise UsageError("closed-shell spinned fermions need even particle counts")
            tokens = [str(n // 2) for n in totals]
    else:
        if args.pairs is not None:
            raise UsageError("--pairs only applies to fermion-spinned")
        tokens = args.particles
    if not tokens:
        raise UsageError("no particle counts given")
    try:
        counts = parse_counts(tokens)
        ratios: list[float] = list(args.ratio or [])
        if args.grid:
            ratios.extend(parse_grid(args.grid))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not ratios:
        raise UsageError("empty coupling-ratio list: give -r values or --grid")
    fmt = "csv" if args.csv else args.format
    spec = SweepSpec(args.variant, counts, tuple(ratios), fmt, "2" if args.bits else "e")
    with _output(args.out) as fh:
        skipped = write_sweep(spec, fh, max(1, args.jobs))
    if skipped:
        print(f"{skipped} point(s) skipped; see the error column", file=sys.stderr)
    return EXIT_OK


def cmd_figure(args) -> int:
    from .figures import FIGURES, write_figure

    if args.id not in FIGURES:
        raise UsageError(f"unknown figure {args.id!r}; choose from {', '.join(FIGURES)}")
    out = args.out
    if out is not None and (out.is_dir() or str(out).endswith("/")):
        out = out / f"{args.id}.csv"
    data = FIGURES[args.id]()
    with _output(out) as fh:
        write_figure(data, fh)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import main as verify_main

    code = verify_main(args.level, args.tolerance_scale, sys.stdout)
    return EXIT_OK if code == 0 else EXIT_VERIFY_FAILED


COMMANDS = {"point": cmd_point, "sweep": cmd_sweep, "figure": cmd_figure, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"harmonium: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnboundSystem, DomainError) as exc:
        print(f"harmonium: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"harmonium: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    try:
        code = main()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the final flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    entry()
