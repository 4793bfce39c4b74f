#!/usr/bin/env python3
"""Empirical probing of the two open decomposition questions on small
hosts with clique number at most max degree - 2.

Problem one asks for a maximum family-free part whose residue avoids a
second regular family; problem two asks for a maximum (p-2)-degenerate
part with a (q-2)-degenerate residue. Problem two's constraint is
printed inconsistently at the source (p+q = d+1 in the preamble, d =
p+q+1 in the body), so both readings run as separate grids; results are
evidence tables, never refutations.

Usage:
  python scripts/probe_open_problems.py --n 7 --delta 5 --sample 300 --seed 7
"""

import argparse
import sys

from freesplit import FreenessSpec, complete_graph
from freesplit.oracle import GraphFilters, HuntTask, ParamPoint, hunt


def problem1_grid(delta: int) -> tuple[ParamPoint, ...]:
    points = []
    for p in range(2, delta):
        q = delta + 1 - p
        if q < 3:
            continue
        points.append(ParamPoint(
            p=p, q=q,
            spec=FreenessSpec.patterns_of([complete_graph(p)]),
            spec2=FreenessSpec.patterns_of([complete_graph(q)]),
            note=f"regular-families-K{p}-K{q}"))
    return tuple(points)


def problem2_grid(delta: int) -> tuple[ParamPoint, ...]:
    points = []
    for p in range(2, delta):
        q = delta + 1 - p  # preamble reading: p + q = d + 1
        if q >= 4 and p >= 2:
            points.append(ParamPoint(p=p, q=q, note="reading-p+q=d+1"))
        q = delta - 1 - p  # body reading: d = p + q + 1
        if q >= 4 and p >= 2:
            points.append(ParamPoint(p=p, q=q, note="reading-d=p+q+1"))
    return tuple(points)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=7)
    parser.add_argument("--delta", type=int, default=5)
    parser.add_argument("--sample", type=int, default=None,
                        help="random hosts instead of the exhaustive sweep")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    filters = GraphFilters(connected=True, delta_exact=args.delta,
                           omega_max=args.delta - 2)
    for claim, grid in (("problem1", problem1_grid(args.delta)),
                        ("problem2", problem2_grid(args.delta))):
        task = HuntTask(claim=claim, n_values=(args.n,), filters=filters,
                        grid=grid, sample=args.sample,
                        seed=args.seed if args.sample else None)
        summary = hunt(task, parallelism=args.workers)
        print(f"\n{claim}: {summary.hosts} hosts")
        for label, slot in sorted(summary.by_params.items()):
            print(f"  {label}: decomposition exists on "
                  f"{slot['oracle_holds']}/{slot['cells']} hosts")
        if summary.counterexample_candidates:
            sample = summary.counterexample_candidates[:5]
            print(f"  hosts where the claimed decomposition is absent "
                  f"({len(summary.counterexample_candidates)} total):")
            for cand in sample:
                print(f"    {cand['graph6']}  [{cand['params']}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
