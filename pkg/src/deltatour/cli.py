"""Command-line entry point: ``deltatour {solve,validate,exact,bench,gen}``.

Exit codes: 0 success, 1 tour rejected by ``validate``, 2 unreadable input,
3 internal validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .coverage import UNCOVERED, edge_verdicts, is_delta_tour
from .discrete import exact_shortest_tour
from .generators import FAMILIES, generate
from .graph import GraphError, ParseError, format_graph, parse_graph, read_graph, to_fraction
from .regimes import ValidationFailure, shipped_ratio, solve
from .tours import TourError, tour_from_records, tour_length, tour_to_records

EXIT_OK, EXIT_REJECTED, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3

BENCH_FIELDS = [
    "instance", "n", "m", "delta", "regime", "length", "best_lower_bound", "exact_length",
    "exact_ratio", "certified_ratio", "shipped_bound", "ratio_approx", "wall_time_s",
]
DEFAULT_GRID = "1/10,1/6,1/4,1/2,3/5,33/40,9/10,1,5/4,3/2,2"


def _delta(text: str) -> Fraction:
    d = to_fraction(text)
    if d < 0:
        raise ParseError("delta must be non-negative")
    return d


def _emit(payload: str, out: str | None) -> None:
    if out:
        Path(out).write_text(payload)
    else:
        sys.stdout.write(payload)


def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    report = solve(g, _delta(args.delta), mode=args.mode)
    _emit(json.dumps(report.to_json(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    g = read_graph(args.graph)
    with open(args.tour) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"tour file is not JSON: {exc}") from exc
    if isinstance(data, dict) and "tour" in data:
        data = data["tour"]  # accept a solve report directly
    t = tour_from_records(data, g)
    delta = _delta(args.delta)
    verdicts = edge_verdicts(t, delta)
    lines = [f"{'edge':>10}  {'max distance':>14}  {'witness':>22}  mode"]
    for v in verdicts:
        a, b = v.edge
        w = v.witness
        where = f"vertex {w.u + 1}" if w.is_vertex else f"({w.u + 1},{w.v + 1},{w.lam})"
        lines.append(f"{f'{a + 1}-{b + 1}':>10}  {str(v.max_distance):>14}  {where:>22}  {v.mode}")
    ok = all(v.mode != UNCOVERED for v in verdicts)
    if args.route == "cases":
        cases_ok = is_delta_tour(t, delta, route="cases")
        lines.append(f"case-analysis route: {'covered' if cases_ok else 'not covered'}")
    lines.append(f"{'valid' if ok else 'NOT'} a {delta}-tour (length {tour_length(t)})")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_REJECTED


def cmd_exact(args) -> int:
    g = read_graph(args.graph)
    delta = _delta(args.delta)
    res = exact_shortest_tour(g, delta, max_stops=args.max_stops)
    payload = {
        "delta": str(delta),
        "length": None if res.length is None else str(res.length),
        "stops": res.stops,
        "max_stops": res.max_stops,
        "cap_binding": res.cap_binding,
        "structures": res.structures,
        "tour": None if res.tour is None else tour_to_records(res.tour),
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def _bench_row(job) -> dict:
    name, text, delta, exact_cap, timing = job
    g = parse_graph(text)
    start = time.perf_counter()
    row = {"instance": name, "n": g.n, "m": g.m, "delta": str(delta)}
    try:
        rep = solve(g, delta)
    except Exception as exc:  # recorded per row, never fatal
        row.update(regime="error", length=f"{type(exc).__name__}: {exc}")
        return row
    elapsed = time.perf_counter() - start
    lb = rep.best_lower_bound
    row.update(regime=rep.regime, length=str(rep.length), best_lower_bound="" if lb is None else str(lb))
    shipped = shipped_ratio(delta) if g.n > 2 else Fraction(1)
    row["shipped_bound"] = str(shipped)
    ratio = None
    if exact_cap and g.n <= exact_cap:
        ex = exact_shortest_tour(g, delta)
        row["exact_length"] = str(ex.length)
        if ex.length > 0:
            ratio = rep.length / ex.length
            row["exact_ratio"] = str(ratio)
        else:
            row["exact_ratio"] = "1" if rep.length == 0 else "inf"
    cert = rep.certified_ratio
    row["certified_ratio"] = "" if cert is None else str(cert)
    shown = ratio if ratio is not None else cert
    row["ratio_approx"] = "" if shown is None else f"{float(shown):.6f}"
    row["wall_time_s"] = f"{elapsed:.4f}" if timing else ""
    return row


def _corpus(args) -> list[tuple[str, str]]:
    items: list[tuple[str, str]] = []
    if args.corpus:
        for path in sorted(Path(args.corpus).glob("*.g")):
            items.append((path.stem, path.read_text()))
    else:
        p = to_fraction(args.p) if args.p is not None else None
        for k in range(args.count):
            for i, g in enumerate(generate(args.family, args.n, p=p, seed=args.seed + k)):
                items.append((f"{args.family}-n{args.n}-s{args.seed + k}-{i:03d}", format_graph(g)))
    return items


def _threads() -> int:
    raw = os.environ.get("DELTA_TOUR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ParseError(f"DELTA_TOUR_THREADS must be an integer, got {raw!r}")


def cmd_bench(args) -> int:
    grid = [_delta(x) for x in args.deltas.split(",") if x.strip()]
    jobs = [(name, text, d, args.exact_cap, not args.no_timing) for name, text in _corpus(args) for d in grid]
    workers = _threads()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_row, jobs))
    else:
        rows = [_bench_row(j) for j in jobs]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, restval="", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    p = to_fraction(args.p) if args.p is not None else None
    try:
        graphs = generate(args.family, args.n, p=p, seed=args.seed)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if args.out and len(graphs) > 1:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, g in enumerate(graphs):
            (out / f"{args.family}-n{args.n}-{i:03d}.g").write_text(format_graph(g))
        return EXIT_OK
    text = "\n".join(format_graph(g, f"{args.family} n={args.n} #{i}") for i, g in enumerate(graphs))
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="deltatour", description="Shortest and approximate delta-tours on graphs.")
    sub = parser.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("solve", help="approximate shortest delta-tour with a certificate report")
    s.add_argument("--graph", required=True)
    s.add_argument("--delta", required=True, help="p/q or terminating decimal")
    s.add_argument("--mode", choices=["fixed", "input-delta"], default="fixed")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("validate", help="per-edge coverage verdicts for a tour")
    v.add_argument("--graph", required=True)
    v.add_argument("--tour", required=True, help="JSON list of stops or a solve report")
    v.add_argument("--delta", required=True)
    v.add_argument("--route", choices=["geometric", "cases"], default="geometric")
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("exact", help="exact shortest delta-tour (small graphs)")
    e.add_argument("--graph", required=True)
    e.add_argument("--delta", required=True)
    e.add_argument("--max-stops", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_exact)

    b = sub.add_parser("bench", help="CSV of solve results over a corpus and a delta grid")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="directory of .g files")
    src.add_argument("--family", choices=FAMILIES)
    b.add_argument("--n", type=int, default=5)
    b.add_argument("--p")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--count", type=int, default=1, help="generated instances (consecutive seeds)")
    b.add_argument("--deltas", default=DEFAULT_GRID)
    b.add_argument("--exact-cap", type=int, default=5, help="run the exact oracle when n <= cap; 0 disables")
    b.add_argument("--no-timing", action="store_true", help="leave wall_time_s empty for byte-stable output")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    gn = sub.add_parser("gen", help="write graph files")
    gn.add_argument("--family", required=True, choices=FAMILIES)
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--p")
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--out", help="file, or directory when several graphs are produced")
    gn.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GraphError, TourError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationFailure, AssertionError) as exc:
        print(f"internal validation failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
