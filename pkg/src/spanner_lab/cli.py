"""Command-line entry point: generate, build, verify, bench, fit."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import bench
from .analysis import FitResult, fit_exponent, verify_stretch
from .formats import pointset_to_json, read_graph, read_pointset, write_graph
from .geometry import UsageError
from .instances import KINDS, InstanceSpec

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
SEED_ENV = "SPANNER_LAB_SEED"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def parse_eps(text: str) -> float:
    """Accepts decimals and fractions such as ``1/64``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_eps_list(text: str) -> list[float]:
    parts = [p for p in text.split(",") if p.strip()]
    return [parse_eps(p) for p in parts]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    spec = InstanceSpec(args.kind, args.eps, d=args.d, copies=args.copies, c=args.c, seed=seed, n=args.n)
    _emit(pointset_to_json(spec.generate()), args.out)
    return EXIT_OK


def cmd_build(args) -> int:
    P = read_pointset(args.input)
    seed = args.seed if args.seed is not None else default_seed()
    rec, G = bench.measure(P, args.algo, args.eps, P.kind, args.eps, seed, timing=args.timing)
    write_graph(G, args.out)
    sys.stdout.write(bench.record_row(rec))
    return EXIT_OK if rec.status == "ok" else EXIT_FAILED


def cmd_verify(args) -> int:
    G = read_graph(args.graph)
    P = read_pointset(args.points)
    if G.terminals != P.n or G.dim != P.dim or not (G.terminal_points() == P.coords).all():
        raise UsageError("graph terminals do not match the point file")
    rep = verify_stretch(G, args.eps, mode=args.mode, seed=args.seed if args.seed is not None else default_seed())
    sys.stdout.write(json.dumps(rep.to_dict()) + "\n")
    if not rep.passed:
        sys.stderr.write(f"stretch {rep.max_stretch!r} exceeds 1+eps at pair {rep.argmax}\n")
        return EXIT_FAILED
    return EXIT_OK


def cmd_bench(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    c_values = args.c if args.c else bench.SQUARE_C_SWEEP
    cells, notes = bench.suite_cells(args.suite, args.eps, args.copies, seed, args.timing, c_values)
    for note in notes:
        sys.stderr.write(note + "\n")
    records = bench.run_cells(cells, args.jobs)
    _emit(bench.records_to_csv(records), args.out)
    failed = [r for r in records if r.status != "ok"]
    for r in failed:
        sys.stderr.write(f"verification failed: {r.kind} eps={r.eps} {r.algorithm} stretch={r.max_stretch!r}\n")
    return EXIT_FAILED if failed else EXIT_OK


def _column(rows: list[dict], spec: str) -> list[float]:
    names = spec.split("/")
    if len(names) > 2:
        raise UsageError(f"column expression {spec!r}: use NAME or NAME/NAME")
    for name in names:
        if rows and name not in rows[0]:
            raise UsageError(f"no column {name!r} in CSV")
    try:
        vals = [[float(r[name]) for name in names] for r in rows]
    except ValueError:
        raise UsageError(f"column {spec!r} holds non-numeric values") from None
    return [v[0] / v[1] if len(v) == 2 else v[0] for v in vals]


def cmd_fit(args) -> int:
    rows = bench.read_table(Path(args.csv).read_text())
    if args.algorithm:
        if rows and "algorithm" not in rows[0]:
            raise UsageError("no column 'algorithm' to filter on")
        rows = [r for r in rows if r["algorithm"] == args.algorithm]
    fit: FitResult = fit_exponent(_column(rows, args.x), _column(rows, args.y))
    sys.stdout.write(json.dumps(fit.to_dict()) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spanner-lab", description="Euclidean spanner constructions and experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated point set as JSON")
    g.add_argument("--kind", required=True, choices=KINDS)
    g.add_argument("--eps", type=parse_eps, default=0.125)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--copies", type=int, default=1)
    g.add_argument("--c", type=float, default=1.0)
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("build", help="build a spanner; graph JSON to --out, record row to stdout")
    b.add_argument("--in", dest="input", required=True)
    b.add_argument("--algo", required=True, choices=bench.ALGORITHMS)
    b.add_argument("--eps", type=parse_eps, required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--seed", type=int)
    b.add_argument("--timing", action="store_true", help="fill build_millis (makes output run-dependent)")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check stretch of a graph; exit 0 iff it passes")
    v.add_argument("--graph", required=True)
    v.add_argument("--points", required=True)
    v.add_argument("--eps", type=parse_eps, required=True)
    v.add_argument("--mode", choices=("auto", "all-pairs", "sampled"), default="auto")
    v.add_argument("--seed", type=int)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="run an experiment suite and write CSV")
    s.add_argument("--suite", required=True, choices=bench.SUITES)
    s.add_argument("--eps", type=parse_eps_list, required=True, help="comma-separated, e.g. 1/8,1/16")
    s.add_argument("--copies", type=int, default=1)
    s.add_argument("--c", type=parse_eps_list, help="spacing constants for steiner-size (default 1,2,4)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seed", type=int)
    s.add_argument("--timing", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)

    f = sub.add_parser("fit", help="fit ln(y) against ln(1/x) from a bench CSV")
    f.add_argument("--csv", required=True)
    f.add_argument("--x", default="instance_eps")
    f.add_argument("--y", required=True, help="column name or NAME/NAME ratio")
    f.add_argument("--algorithm")
    f.set_defaults(func=cmd_fit)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, IsADirectoryError) as exc:
        sys.stderr.write(f"spanner-lab: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
