"""Command-line front end: generate, solve, validate, bench.

Exit codes: 0 ok, 1 input or limit error, 2 usage error, 3 time-limited
best-effort result, 4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from pathlib import Path

from . import kernels
from .model import (
    Instance,
    SolverConfig,
    TspcnError,
    generate_instance,
    load_instance,
    load_solution,
    save_instance,
)
from .pipeline import lower_bound, save_report, solve_two_phase, validate_solution
from .render import RenderStyle, render_svg

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_TIME_LIMIT = 3
EXIT_INVALID = 4

BENCH_SIZES = (12, 20, 40, 75)
BENCH_CSV_HEADER = (
    "n,seed,method,k,sector_mode,length,lower_bound,gap,proven,wall_s"
)


def thread_cap() -> int:
    """Honor TSPCN_THREADS; the solvers are sequential, so this is a cap of 1+."""
    raw = os.environ.get("TSPCN_THREADS", "").strip()
    if not raw:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise TspcnError(f"TSPCN_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise TspcnError("TSPCN_THREADS must be >= 1")
    return cap


def _parse_floats(text: str, count: int, flag: str) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != count:
        raise argparse.ArgumentTypeError(f"{flag} needs {count} comma-separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{flag}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tspcn",
        description="Shortest closed tours visiting one point inside each of N circles.",
        epilog=f"kernel backend: {kernels.backend_name()}; "
        "set TSPCN_PURE_PYTHON=1 to force the fallback, TSPCN_THREADS to cap parallelism.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random instance file")
    g.add_argument("--n", type=int, required=True, help="number of circles (>= 2)")
    g.add_argument("--box", default="0,0,100,100", help="center box xmin,ymin,xmax,ymax")
    g.add_argument("--radius", default="2,6", help="radius range min,max")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--min-gap", type=float, default=None, help="minimum center distance")
    g.add_argument("--name", default=None)
    g.add_argument("--out", required=True, help="output instance JSON path")

    s = sub.add_parser("solve", help="solve an instance and write the solution file")
    s.add_argument("instance", help="instance JSON path")
    s.add_argument("--method", choices=("exact-dp", "cutting-plane", "heuristic"),
                   default="exact-dp")
    s.add_argument("--k", type=int, default=4, help="discretization slots per circle")
    s.add_argument("--sector", choices=("full-disk", "sector-box"), default="sector-box",
                   help="phase-2 feasible region per circle")
    s.add_argument("--seed", type=int, default=0, help="heuristic seed")
    s.add_argument("--exact-limit", type=int, default=16)
    s.add_argument("--time-limit", type=float, default=None,
                   help="cutting-plane wall-clock budget in seconds")
    s.add_argument("--out", required=True, help="output solution JSON path")
    s.add_argument("--plot", default=None, help="also render the tour to this SVG path")
    s.add_argument("--timings", action="store_true",
                   help="embed wall-clock timings in the solution file")

    v = sub.add_parser("validate", help="check a solution file against its instance")
    v.add_argument("instance")
    v.add_argument("solution")
    v.add_argument("--tolerance", type=float, default=1e-9)

    b = sub.add_parser("bench", help="run seeded solve suites and print a table")
    b.add_argument("--sizes", default=",".join(str(s) for s in BENCH_SIZES),
                   help="comma-separated instance sizes")
    b.add_argument("--seeds", type=int, default=3, help="seeds 0..S-1 per size")
    b.add_argument("--k", type=int, default=4)
    b.add_argument("--time-limit", type=float, default=60.0,
                   help="cutting-plane budget per run")
    b.add_argument("--csv", action="store_true", help="machine-readable output")
    return parser


def cmd_generate(args: argparse.Namespace) -> int:
    if args.n < 2:
        print("error: --n must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    try:
        box = _parse_floats(args.box, 4, "--box")
        radius = _parse_floats(args.radius, 2, "--radius")
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        instance = generate_instance(
            args.n, box, radius, args.seed, min_center_gap=args.min_gap, name=args.name
        )
    except (TspcnError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    save_instance(instance, args.out)
    print(f"wrote {args.out}: {instance.n} circles (seed {args.seed})")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        instance = load_instance(args.instance)
    except TspcnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    config = SolverConfig(
        k=args.k,
        method=args.method,
        sector_mode=args.sector,
        exact_limit=args.exact_limit,
        seed=args.seed,
        time_limit=args.time_limit,
    )
    try:
        report = solve_two_phase(instance, config)
    except TspcnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    save_report(report, args.out, include_timings=args.timings)
    if args.plot:
        Path(args.plot).write_text(
            render_svg(instance, report.solution), encoding="utf-8"
        )
    print(
        f"{args.method} total {report.solution.total:.9f} "
        f"(phase-1 {report.phase1.length:.9f}, lower bound {report.lower_bound:.9f}) "
        f"-> {args.out}"
    )
    if args.method == "cutting-plane" and not report.proven_optimal_discrete:
        print("time limit hit: best-effort incumbent written", file=sys.stderr)
        return EXIT_TIME_LIMIT
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        instance = load_instance(args.instance)
        solution, _meta = load_solution(args.solution)
    except TspcnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if len(solution.points) != instance.n:
        print(
            f"error: instance has {instance.n} circles but the solution "
            f"carries {len(solution.points)} points",
            file=sys.stderr,
        )
        return EXIT_INPUT
    report = validate_solution(instance, solution, tolerance=args.tolerance)
    for check in report.checks:
        mark = "PASS" if check.ok else "FAIL"
        print(f"[{mark}] {check.family}: {check.detail} (residual {check.residual:.3e})")
    if report.passed:
        print("solution is feasible and consistent")
        return EXIT_OK
    print("solution failed validation", file=sys.stderr)
    return EXIT_INVALID


def _bench_method(n: int, exact_limit: int = 16) -> str:
    if n <= exact_limit:
        return "exact-dp"
    if n <= 24:
        return "cutting-plane"
    return "heuristic"


def cmd_bench(args: argparse.Namespace) -> int:
    thread_cap()
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        print("error: --sizes must be comma-separated integers", file=sys.stderr)
        return EXIT_USAGE
    if any(n < 2 for n in sizes) or args.seeds < 1:
        print("error: sizes must be >= 2 and --seeds >= 1", file=sys.stderr)
        return EXIT_USAGE

    rows = []
    for n in sizes:
        for seed in range(args.seeds):
            side = max(20.0, 4.0 * n)
            instance = generate_instance(
                n,
                (0.0, 0.0, side, side),
                (1.0, 4.0),
                seed,
                min_center_gap=8.0,
                name=f"bench-n{n}-s{seed}",
            )
            method = _bench_method(n)
            # full-disk so the reported gap measures the solver against the
            # bound, not against the sector restriction
            config = SolverConfig(
                k=args.k, method=method, sector_mode="full-disk",
                time_limit=args.time_limit if method == "cutting-plane" else None,
            )
            start = time.perf_counter()
            report = solve_two_phase(instance, config)
            wall = time.perf_counter() - start
            gap = max(0.0, report.solution.total - report.lower_bound)
            rows.append(
                {
                    "n": n,
                    "seed": seed,
                    "method": method,
                    "k": args.k,
                    "sector_mode": config.sector_mode,
                    "length": f"{report.solution.total:.9f}",
                    "lower_bound": f"{report.lower_bound:.9f}",
                    "gap": f"{gap:.6f}",
                    "proven": str(report.proven_optimal_discrete).lower(),
                    "wall_s": f"{wall:.3f}",
                }
            )

    if args.csv:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_CSV_HEADER.split(","))
        writer.writeheader()
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        header = BENCH_CSV_HEADER.split(",")
        widths = [max(len(h), max((len(str(r[h])) for r in rows), default=0)) for h in header]
        print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        for r in rows:
            print("  ".join(str(r[h]).ljust(w) for h, w in zip(header, widths)))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "bench":
            return cmd_bench(args)
    except TspcnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    raise AssertionError("unreachable")


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
