"""Command-line entry point: ``relgauss {sweep2,sweep3,twirl-demo,audit}``.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

from . import sweep
from .entanglement import audit_purity_formulas

EXIT_CONFIG = 2
EXIT_IO = 3

_PI_TOKEN = re.compile(r"^(?:([0-9.eE+-]+)\s*\*?\s*)?pi(?:\s*/\s*([0-9.eE+-]+))?$")


def parse_number(token: str) -> float:
    """Float, or a multiple of pi such as ``pi/4``, ``3pi/8`` or ``2*pi``."""
    token = token.strip()
    m = _PI_TOKEN.match(token)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        value = float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {token!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {token!r}")
    return value


def parse_grid(text: str) -> list[float]:
    """``lo:hi:step`` (inclusive) or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be lo:hi:step, got {text!r}")
        lo, hi, step = (parse_number(p) for p in parts)
        try:
            return sweep.inclusive_range(lo, hi, step)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    values = [parse_number(t) for t in text.split(",") if t.strip()]
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relgauss",
        description="Centre-of-mass/relative entanglement sweeps, twirl demo and formula audit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p2 = sub.add_parser("sweep2", help="two-particle sweep (log-negativity of V_CMR, relational purity)")
    p2.add_argument("--masses", type=parse_grid, default=list(sweep.DEFAULT_MASS_RATIOS),
                    help="m1/M grid, lo:hi:step or list (default 0.01:0.99:0.01)")
    p2.add_argument("--r", type=parse_grid, default=list(sweep.DEFAULT_R),
                    help="squeezing r1 grid (default 0:2:0.05)")
    p2.add_argument("--theta", type=parse_grid, default=list(sweep.DEFAULT_THETA),
                    help="common rotation angle list (default 0,pi/32,pi/8,pi/4)")
    p2.add_argument("--purity", type=parse_grid, default=[1.0], help="purity list for particle 1")
    p2.add_argument("--purity2", type=parse_grid, default=None,
                    help="purity list for particle 2 (default: same as particle 1)")
    p2.add_argument("--alpha", type=parse_grid, default=list(sweep.DEFAULT_ALPHA),
                    help="squeezing asymmetry list, r2 = alpha * r1 (default 0,0.5,1)")
    p2.add_argument("--out", type=Path, default=None, help="CSV path (default: stdout)")

    p3 = sub.add_parser("sweep3", help="three identical pure particles")
    p3.add_argument("--masses", type=parse_grid, default=list(sweep.DEFAULT_MASS_RATIOS),
                    help="m1/M grid (default 0.01:0.99:0.01)")
    p3.add_argument("--masses2", type=parse_grid, default=None,
                    help="m2/M grid (default: m2 = m3)")
    p3.add_argument("--r", type=parse_grid, default=list(sweep.DEFAULT_R))
    p3.add_argument("--theta", type=parse_grid, default=[0.0, math.pi / 4])
    p3.add_argument("--out", type=Path, default=None)

    pt = sub.add_parser("twirl-demo", help="finite translation/boost twirl identity and divergence scan")
    pt.add_argument("--d-cm", type=int, default=4)
    pt.add_argument("--d-r", type=int, default=3)
    pt.add_argument("--seed", type=int, default=7)
    pt.add_argument("--dims", type=parse_ints, default=None,
                    help="centre-of-mass dimensions for the divergence scan (default 2..d_cm)")
    pt.add_argument("--max-dim", type=int, default=256)
    pt.add_argument("--out", type=Path, default=None, help="divergence CSV path (default: stdout)")

    pa = sub.add_parser("audit", help="check closed-form purity expressions against the matrix pipeline")
    pa.add_argument("--seed", type=int, default=1)
    pa.add_argument("--samples", type=int, default=1000)
    pa.add_argument("--out", type=Path, default=None, help="CSV path (default: stdout)")
    pa.add_argument("--table", type=Path, default=None,
                    help="text table path (default: --out with .txt suffix)")
    return parser


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _emit(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        _write(path, text)


def _run(args) -> None:
    if args.command == "sweep2":
        cfg = sweep.SweepConfig(2, args.masses, None, args.r, args.theta, args.purity,
                                args.purity2, args.alpha)
        rows = list(sweep.run_sweep2(cfg))
        _emit(args.out, sweep.rows_to_csv(sweep.SWEEP2_COLUMNS, rows))
        if args.out is not None:
            print(f"sweep2: {len(rows)} rows -> {args.out}")
            print(f"max logneg_cmr = {max(r[7] for r in rows):.6g}, "
                  f"min purity_rel = {min(r[8] for r in rows):.6g}")
    elif args.command == "sweep3":
        cfg = sweep.SweepConfig(3, args.masses, args.masses2, args.r, args.theta)
        rows = list(sweep.run_sweep3(cfg))
        _emit(args.out, sweep.rows_to_csv(sweep.SWEEP3_COLUMNS, rows))
        if args.out is not None:
            print(f"sweep3: {len(rows)} rows -> {args.out}")
            print(f"max logneg_cmr = {max(r[4] for r in rows):.6g}, "
                  f"max logneg_rel = {max(r[5] for r in rows):.6g}")
    elif args.command == "twirl-demo":
        text, table = sweep.run_twirl_demo(args.d_cm, args.d_r, args.seed, args.dims, args.max_dim)
        _emit(args.out, table)
        (sys.stdout if args.out is not None else sys.stderr).write(text)
    elif args.command == "audit":
        report = audit_purity_formulas(args.seed, args.samples)
        _emit(args.out, report.to_csv())
        table_path = args.table or (args.out.with_suffix(".txt") if args.out is not None else None)
        if table_path is not None:
            _write(table_path, report.to_text())
        if args.out is not None:
            sys.stdout.write(report.to_text())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        parser.error("--samples must be at least 1")
    try:
        _run(args)
    except ValueError as exc:
        print(f"relgauss: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"relgauss: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
