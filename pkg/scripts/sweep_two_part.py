#!/usr/bin/env python3
"""Exhaustive two-part sweep: run the engine, the verifier, and the
brute-force oracle over every filtered small host, and report any
disagreement. The default reproduces the n=6 slice of the acceptance
corpus in a few seconds; pass --n 6,7 for the full run.

Usage:
  python scripts/sweep_two_part.py --n 6 --delta 5 --workers 2 --out results/
"""

import argparse
import os
import sys
import time
from pathlib import Path

from freesplit import FreenessSpec, complete_graph
from freesplit.oracle import GraphFilters, HuntTask, ParamPoint, hunt


def build_grid() -> tuple[ParamPoint, ...]:
    return (
        ParamPoint(p=2, q=4, spec=FreenessSpec.patterns_of([complete_graph(2)])),
        ParamPoint(p=3, q=3, spec=FreenessSpec.patterns_of([complete_graph(3)])),
        ParamPoint(p=3, q=3, spec=FreenessSpec.min_degree_core(2), note="acyclic"),
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", default="6", help="comma-separated host sizes")
    parser.add_argument("--delta", type=int, default=5)
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--out", default=None, help="directory for NDJSON records")
    args = parser.parse_args()

    task = HuntTask(
        claim="theorem1",
        n_values=tuple(int(x) for x in args.n.split(",")),
        filters=GraphFilters(connected=True, delta_exact=args.delta,
                             kd_minus_e_free=True),
        grid=build_grid(),
    )
    sink = None
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        sink = out / "two_part_records.ndjson"
        if sink.exists():
            sink.unlink()
    start = time.time()
    summary = hunt(task, parallelism=args.workers, out=sink)
    elapsed = time.time() - start

    print(f"hosts: {summary.hosts}  cells: {summary.cells}  time: {elapsed:.0f}s")
    for label, slot in summary.by_params.items():
        print(f"  {label}: {slot['engine_ok']}/{slot['cells']} engine-verified")
    print(f"counterexample candidates: {len(summary.counterexample_candidates)}")
    print(f"engine gaps: {len(summary.engine_gaps)}")
    if args.out:
        (out / "two_part_summary.json").write_text(summary.to_json())
        print(f"wrote {sink} and two_part_summary.json")
    bad = summary.counterexample_candidates or summary.engine_gaps
    return 2 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
