"""Desk-scale ground truth: exhaustive enumeration, brute-force
decomposition search, canonical forms, and the claim-probing hunter.

Labeled graphs are streamed as edge bitmasks and filtered before any
object is built, so exhaustive sweeps at n = 7 stay affordable. The
hunter records, per (host, parameter point), whether the claimed
decomposition exists at all (oracle) and whether the engine finds it;
disagreements surface as counterexample candidates or engine gaps.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

from .conditions import mask_edge_count, two_part_tail_violation
from .decomposition import Decomposition
from .errors import (
    BudgetExhausted,
    FallbackExceeded,
    PreconditionViolated,
    RangeExceeded,
    SpecError,
    Stalled,
    UnsupportedCase,
)
from .graphs import Graph, VertexSet, component_masks, from_graph6, iter_bits, to_graph6
from .patterns import (
    FreenessSpec,
    mask_clique_number,
    mask_free_with_vertex,
    mask_is_free,
    mask_t_core,
)

MAX_ENUM_N = 10
MAX_TWO_PART_N = 16
MAX_K_PART_N = 10

CLAIMS = ("theorem1", "corollary1", "lemma2", "problem1", "problem2")


# -- filters and enumeration ----------------------------------------------------


@dataclass(frozen=True)
class GraphFilters:
    """Host-side hypotheses applied before any claim is tested."""

    connected: bool = False
    delta_exact: int | None = None
    delta_min: int | None = None
    delta_max: int | None = None
    kd_minus_e_free: bool = False
    omega_min: int | None = None
    omega_max: int | None = None

    def matches(self, g: Graph) -> bool:
        return _mask_passes(g.adj, g.n, self)


def _near_clique_free(adj: tuple[int, ...], n: int, d: int) -> bool:
    """No d-subset spanning K_d minus at most one edge (d >= 2)."""
    threshold = d * (d - 1) - 2  # doubled edge count
    for sub in itertools.combinations(range(n), d):
        smask = 0
        for v in sub:
            smask |= 1 << v
        doubled = 0
        for v in sub:
            doubled += (adj[v] & smask).bit_count()
        if doubled >= threshold:
            return False
    return True


def _mask_passes(adj: tuple[int, ...], n: int, f: GraphFilters) -> bool:
    if n == 0:
        return not (f.connected or f.delta_exact or f.delta_min or f.omega_min)
    delta = max(row.bit_count() for row in adj)
    if f.delta_exact is not None and delta != f.delta_exact:
        return False
    if f.delta_min is not None and delta < f.delta_min:
        return False
    if f.delta_max is not None and delta > f.delta_max:
        return False
    if f.connected and len(component_masks(adj, (1 << n) - 1)) != 1:
        return False
    if f.omega_min is not None or f.omega_max is not None:
        omega = mask_clique_number(adj, (1 << n) - 1)
        if f.omega_min is not None and omega < f.omega_min:
            return False
        if f.omega_max is not None and omega > f.omega_max:
            return False
    if f.kd_minus_e_free and delta >= 2 and not _near_clique_free(adj, n, delta):
        return False
    return True


def _edge_positions(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _adj_from_edge_mask(emask: int, pairs: list[tuple[int, int]], n: int
                        ) -> tuple[int, ...]:
    adj = [0] * n
    m = emask
    while m:
        i = (m & -m).bit_length() - 1
        u, v = pairs[i]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        m &= m - 1
    return tuple(adj)


def enumerate_graphs(n: int, filters: GraphFilters = GraphFilters(),
                     dedup: bool = False):
    """Stream all labeled graphs on n vertices passing ``filters``; with
    ``dedup``, one representative per isomorphism class."""
    if not 1 <= n <= MAX_ENUM_N:
        raise RangeExceeded(f"enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}")
    pairs = _edge_positions(n)
    seen_keys: set = set()
    for emask in range(1 << len(pairs)):
        adj = _adj_from_edge_mask(emask, pairs, n)
        if not _mask_passes(adj, n, filters):
            continue
        g = Graph(n, adj)
        if dedup:
            key = canonical_key(g)
            if key in seen_keys:
                continue
            seen_keys.add(key)
        yield g


# -- canonical forms and isomorphism --------------------------------------------


def _stable_coloring(g: Graph) -> list[int]:
    colors = [g.adj[v].bit_count() for v in range(g.n)]
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in iter_bits(g.adj[v]))))
            for v in range(g.n)
        ]
        palette = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = [palette[sig] for sig in sigs]
        if new == colors:
            return colors
        colors = new


def canonical_key(g: Graph) -> tuple[int, int]:
    """Isomorphism-invariant key: (n, minimum upper-triangle bitstring over
    vertex orders compatible with the stable degree refinement)."""
    if g.n == 0:
        return (0, 0)
    colors = _stable_coloring(g)
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    groups = [classes[c] for c in sorted(classes)]
    best = None
    for perm_parts in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        order = [v for part in perm_parts for v in part]
        pos = {v: i for i, v in enumerate(order)}
        key = 0
        bit = 0
        for j in range(1, g.n):
            vj = order[j]
            for i in range(j):
                if g.adj[vj] >> order[i] & 1:
                    key |= 1 << bit
                bit += 1
        if best is None or key < best:
            best = key
    return (g.n, best)


def brute_force_isomorphic(g: Graph, h: Graph) -> bool:
    """Backtracking isomorphism test, independent of canonical_key."""
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    degs_g = sorted(row.bit_count() for row in g.adj)
    degs_h = sorted(row.bit_count() for row in h.adj)
    if degs_g != degs_h:
        return False
    image: dict[int, int] = {}
    used = 0

    def place(v: int) -> bool:
        nonlocal used
        if v == g.n:
            return True
        for hv in range(h.n):
            if used >> hv & 1:
                continue
            if g.adj[v].bit_count() != h.adj[hv].bit_count():
                continue
            ok = True
            for u in range(v):
                if bool(g.adj[v] >> u & 1) != bool(h.adj[hv] >> image[u] & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = hv
            used |= 1 << hv
            if place(v + 1):
                return True
            used &= ~(1 << hv)
            del image[v]
        return False

    return place(0)


# -- random hosts ---------------------------------------------------------------


def random_graph(n: int, rng: random.Random) -> Graph:
    """Uniform labeled graph on n vertices (every edge with probability 1/2)."""
    pairs = _edge_positions(n)
    emask = rng.getrandbits(len(pairs)) if pairs else 0
    return Graph(n, _adj_from_edge_mask(emask, pairs, n))


def random_regular_graph(n: int, d: int, rng: random.Random) -> Graph:
    """Random d-regular simple graph by incremental pairing with restarts."""
    if n * d % 2 or d >= n:
        raise SpecError(f"no {d}-regular graph on {n} vertices")
    while True:
        rem = [d] * n
        adj = [0] * n
        stuck = False
        while any(rem):
            candidates = [
                (u, v)
                for u in range(n) if rem[u]
                for v in range(u + 1, n) if rem[v] and not adj[u] >> v & 1
            ]
            if not candidates:
                stuck = True
                break
            u, v = candidates[rng.randrange(len(candidates))]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            rem[u] -= 1
            rem[v] -= 1
        if not stuck:
            return Graph(n, tuple(adj))


# -- brute-force decomposition search --------------------------------------------


def _iter_free_masks(adj: tuple[int, ...], n: int, spec: FreenessSpec):
    """DFS over all free subsets with incremental feasibility; every free
    mask is yielded exactly once."""
    yield 0
    stack = [(0, 0)]  # (mask, next vertex to consider)
    while stack:
        mask, start = stack.pop()
        for v in range(start, n):
            cand = mask | 1 << v
            if mask_free_with_vertex(adj, cand, v, spec):
                yield cand
                stack.append((cand, v + 1))


def brute_force_max_free_size(g: Graph, spec: FreenessSpec) -> int:
    if g.n > MAX_TWO_PART_N:
        raise RangeExceeded(f"brute force supports n <= {MAX_TWO_PART_N}")
    return max(m.bit_count() for m in _iter_free_masks(g.adj, g.n, spec))


def _scan_two_part(adj: tuple[int, ...], n: int, spec: FreenessSpec, q: int,
                   tail) -> tuple[int, int | None]:
    """One pass over all free subsets: returns (max free size, best subset
    whose complement passes ``tail``)."""
    full = (1 << n) - 1
    alpha = 0
    best_mask = None
    best_size = -1
    for mask in _iter_free_masks(adj, n, spec):
        size = mask.bit_count()
        if size > alpha:
            alpha = size
        if size > best_size and tail(adj, full & ~mask) is None:
            best_size = size
            best_mask = mask
    return alpha, best_mask


def _lemma2_tail(q: int):
    from .conditions import clique_overlap_violation

    def tail(adj, mask):
        return clique_overlap_violation(adj, mask, q)

    return tail


def brute_force_best_decomposition(g: Graph, claim: str, params: dict
                                   ) -> Decomposition | None:
    """Exhaustively find a partition satisfying the named claim's full
    conclusion, maximizing the first part; None when no partition works."""
    if claim not in CLAIMS:
        raise SpecError(f"unknown claim {claim!r}")
    n = g.n
    if claim == "corollary1":
        if n > MAX_K_PART_N:
            raise RangeExceeded(f"k-part brute force supports n <= {MAX_K_PART_N}")
        return _brute_k_part(g, params["specs"], params["ps"])
    if n > MAX_TWO_PART_N:
        raise RangeExceeded(f"two-part brute force supports n <= {MAX_TWO_PART_N}")
    adj = g.adj
    if claim == "theorem1":
        spec, q = params["spec"], params["q"]
        _, best = _scan_two_part(adj, n, spec, q,
                                 lambda a, m: two_part_tail_violation(a, m, q))
    elif claim == "lemma2":
        from .graphs import complete_graph
        spec = FreenessSpec.patterns_of([complete_graph(params["p"])])
        _, best = _scan_two_part(adj, n, spec, params["q"], _lemma2_tail(params["q"]))
    elif claim == "problem1":
        spec, spec2 = params["spec"], params["spec2"]
        _, best = _scan_two_part(
            adj, n, spec, 0,
            lambda a, m: None if mask_is_free(a, m, spec2) else {"kind": "not-free"})
    else:  # problem2
        p, q = params["p"], params["q"]
        spec = FreenessSpec.min_degree_core(max(p - 1, 1))
        _, best = _scan_two_part(
            adj, n, spec, 0,
            lambda a, m: None if not mask_t_core(a, m, max(q - 1, 1)) else
            {"kind": "core-nonempty"})
    if best is None:
        return None
    s = VertexSet(n, best)
    return Decomposition.of(s, s.complement())


def _brute_k_part(g: Graph, specs, ps) -> Decomposition | None:
    from .conditions import clique_overlap_violation, degree_bound_violation

    k = len(ps)
    n = g.n
    adj = g.adj
    best: tuple[int, tuple[int, ...]] | None = None
    for assign in itertools.product(range(k), repeat=n):
        masks = [0] * k
        for v, part in enumerate(assign):
            masks[part] |= 1 << v
        if best is not None and masks[0].bit_count() <= best[0]:
            continue
        if any(not mask_is_free(adj, masks[i], specs[i]) for i in range(k - 1)):
            continue
        if degree_bound_violation(adj, masks[-1], ps[-1]) is not None:
            continue
        if clique_overlap_violation(adj, masks[-1], ps[-1]) is not None:
            continue
        best = (masks[0].bit_count(), tuple(masks))
    if best is None:
        return None
    return Decomposition(tuple(VertexSet(n, m) for m in best[1]))


# -- the hunter -----------------------------------------------------------------


@dataclass(frozen=True)
class ParamPoint:
    """One cell of a hunt grid; unused fields stay at their defaults."""

    p: int = 0
    q: int = 0
    ps: tuple[int, ...] = ()
    spec: FreenessSpec | None = None
    specs: tuple[FreenessSpec, ...] = ()
    spec2: FreenessSpec | None = None
    note: str = ""

    def label(self) -> str:
        bits = []
        if self.ps:
            bits.append("ps=" + ",".join(map(str, self.ps)))
        elif self.p or self.q:
            bits.append(f"p={self.p},q={self.q}")
        if self.spec is not None:
            bits.append("family=" + self.spec.describe())
        if self.specs:
            bits.append("families=" + "|".join(s.describe() for s in self.specs))
        if self.spec2 is not None:
            bits.append("family2=" + self.spec2.describe())
        if self.note:
            bits.append(self.note)
        return ";".join(bits)


@dataclass(frozen=True)
class HuntTask:
    claim: str
    n_values: tuple[int, ...]
    filters: GraphFilters
    grid: tuple[ParamPoint, ...]
    dedup: bool = False
    sample: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.claim not in CLAIMS:
            raise SpecError(f"unknown claim {self.claim!r}")
        if self.sample is not None and self.seed is None:
            raise SpecError("sampling mode requires an explicit seed")
        bound = MAX_K_PART_N if self.claim == "corollary1" else MAX_TWO_PART_N
        for n in self.n_values:
            if self.sample is None and not 1 <= n <= MAX_ENUM_N:
                raise RangeExceeded(
                    f"exhaustive hunt supports n <= {MAX_ENUM_N}, got {n}")
            if n > bound:
                raise RangeExceeded(
                    f"claim {self.claim} oracle supports n <= {bound}, got {n}")


@dataclass
class HuntSummary:
    claim: str
    hosts: int = 0
    cells: int = 0
    oracle_holds: int = 0
    oracle_absent: int = 0
    engine_ok: int = 0
    engine_failed: int = 0
    engine_na: int = 0
    engine_skipped: int = 0
    trace_violations: int = 0
    counterexample_candidates: list[dict] = field(default_factory=list)
    engine_gaps: list[dict] = field(default_factory=list)
    by_params: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "claim": self.claim,
            "hosts": self.hosts,
            "cells": self.cells,
            "oracle_holds": self.oracle_holds,
            "oracle_absent": self.oracle_absent,
            "engine_ok": self.engine_ok,
            "engine_failed": self.engine_failed,
            "engine_na": self.engine_na,
            "engine_skipped": self.engine_skipped,
            "trace_violations": self.trace_violations,
            "counterexample_candidates": self.counterexample_candidates,
            "engine_gaps": self.engine_gaps,
            "by_params": self.by_params,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True, indent=2) + "\n"


def _oracle_verdict(g: Graph, claim: str, point: ParamPoint) -> tuple[bool, dict]:
    adj, n = g.adj, g.n
    if claim == "theorem1":
        alpha, best = _scan_two_part(adj, n, point.spec, point.q,
                                     lambda a, m: two_part_tail_violation(a, m, point.q))
        return best is not None and best.bit_count() == alpha, {
            "alpha": alpha, "best": best.bit_count() if best is not None else None}
    if claim == "lemma2":
        from .graphs import complete_graph
        spec = FreenessSpec.patterns_of([complete_graph(point.p)])
        _, best = _scan_two_part(adj, n, spec, point.q, _lemma2_tail(point.q))
        return best is not None, {"best": best.bit_count() if best is not None else None}
    if claim == "corollary1":
        d = _brute_k_part(g, list(point.specs), list(point.ps))
        if d is None:
            return False, {"best": None}
        alpha = brute_force_max_free_size(g, point.specs[0])
        return len(d.parts[0]) == alpha, {"alpha": alpha, "best": len(d.parts[0])}
    if claim == "problem1":
        alpha, best = _scan_two_part(
            adj, n, point.spec, 0,
            lambda a, m: None if mask_is_free(a, m, point.spec2) else {"k": 1})
        return best is not None and best.bit_count() == alpha, {
            "alpha": alpha, "best": best.bit_count() if best is not None else None}
    # problem2
    p, q = point.p, point.q
    spec = FreenessSpec.min_degree_core(max(p - 1, 1))
    alpha, best = _scan_two_part(
        adj, n, spec, 0,
        lambda a, m: None if not mask_t_core(a, m, max(q - 1, 1)) else {"k": 1})
    return best is not None and best.bit_count() == alpha, {
        "alpha": alpha, "best": best.bit_count() if best is not None else None}


def _engine_verdict(g: Graph, claim: str, point: ParamPoint,
                    oracle_info: dict) -> tuple[str, dict]:
    from .decomposer import clique_split, decompose_k, decompose_two
    from .verifier import verify_k, verify_two

    detail: dict = {}
    try:
        if claim == "theorem1":
            from .decomposer import trace_discipline

            result = decompose_two(g, point.spec, point.p, point.q, verify=False)
            if result.counterexample is not None:
                return "counterexample", {"certificates": len(
                    result.counterexample.certificates)}
            report = verify_two(g, result.decomposition, point.spec, point.p,
                                point.q, check_maximality=True)
            discipline = trace_discipline(g, point.spec, point.q,
                                          result.refined, result.trace)
            detail = {"size": len(result.decomposition.parts[0]),
                      "verified": report.overall,
                      "trace_len": len(result.trace),
                      "trace_ok": all(v for k, v in discipline.items() if k != "steps"),
                      "fallback": result.fallback_used}
            ok = report.overall and detail["size"] == oracle_info.get("alpha")
            return ("ok" if ok else "mismatch"), detail
        if claim == "corollary1":
            d = decompose_k(g, list(point.specs), list(point.ps))
            report = verify_k(g, d, list(point.specs), list(point.ps))
            detail = {"sizes": list(d.sizes()), "verified": report.overall}
            return ("ok" if report.overall else "mismatch"), detail
        if claim == "lemma2":
            d = clique_split(g, point.p, point.q)
            from .conditions import clique_overlap_violation
            from .decomposition import partition_violation
            from .graphs import complete_graph
            spec = FreenessSpec.patterns_of([complete_graph(point.p)])
            ok = (partition_violation(g, d) is None
                  and mask_is_free(g.adj, d.parts[0].mask, spec)
                  and clique_overlap_violation(g.adj, d.parts[1].mask, point.q) is None)
            detail = {"sizes": list(d.sizes())}
            return ("ok" if ok else "mismatch"), detail
        return "n/a", {}
    except PreconditionViolated as exc:
        return "precondition", {"reason": exc.reason}
    except UnsupportedCase as exc:
        return "unsupported", {"reason": str(exc)}
    except (Stalled, FallbackExceeded, BudgetExhausted) as exc:
        return "stalled", {"reason": str(exc)}


def _hunt_cell(g6: str, claim: str, point: ParamPoint,
               probe_engine: bool) -> dict:
    g = from_graph6(g6)
    oracle_ok, info = _oracle_verdict(g, claim, point)
    if probe_engine:
        engine, detail = _engine_verdict(g, claim, point, info)
    else:
        engine, detail = "skipped", {}
    return {
        "graph6": g6,
        "n": g.n,
        "params": point.label(),
        "oracle": oracle_ok,
        "engine": engine,
        "detail": {**info, **detail},
        "cost": {"edges": mask_edge_count(g.adj, g.full_mask)},
    }


_WORKER_TASK: dict = {}


def _init_hunt_worker(claim: str, grid, probe_engine: bool) -> None:
    _WORKER_TASK["claim"] = claim
    _WORKER_TASK["grid"] = grid
    _WORKER_TASK["probe"] = probe_engine


def _hunt_host_records(g6: str) -> list[dict]:
    return [_hunt_cell(g6, _WORKER_TASK["claim"], point, _WORKER_TASK["probe"])
            for point in _WORKER_TASK["grid"]]


def _hunt_hosts(task: HuntTask):
    if task.sample is None:
        for n in task.n_values:
            yield from enumerate_graphs(n, task.filters, dedup=task.dedup)
        return
    rng = random.Random(task.seed)
    for n in task.n_values:
        found = 0
        attempts = 0
        limit = max(200 * task.sample, 1000)
        while found < task.sample and attempts < limit:
            attempts += 1
            g = random_graph(n, rng)
            if task.filters.matches(g):
                found += 1
                yield g


def hunt(task: HuntTask, parallelism: int = 1, out=None,
         probe_engine: bool = True) -> HuntSummary:
    """Probe one claim over every filtered host and grid point; write one
    NDJSON record per cell to ``out`` (path or file-like) and return the
    aggregated summary. Deterministic given the task (and seed)."""
    summary = HuntSummary(claim=task.claim)
    sink = None
    close_sink = False
    if out is not None:
        if hasattr(out, "write"):
            sink = out
        else:
            sink = open(out, "a", encoding="utf-8")
            close_sink = True
    try:
        jobs = (to_graph6(g) for g in _hunt_hosts(task))
        if parallelism > 1:
            import multiprocessing

            with multiprocessing.Pool(
                    parallelism, initializer=_init_hunt_worker,
                    initargs=(task.claim, task.grid, probe_engine)) as pool:
                for records in pool.imap(_hunt_host_records, jobs, chunksize=64):
                    _absorb(summary, records, sink)
        else:
            _init_hunt_worker(task.claim, task.grid, probe_engine)
            for g6 in jobs:
                _absorb(summary, _hunt_host_records(g6), sink)
    finally:
        if close_sink:
            sink.close()
    return summary


def _absorb(summary: HuntSummary, records: list[dict], sink) -> None:
    summary.hosts += 1
    for rec in records:
        summary.cells += 1
        slot = summary.by_params.setdefault(
            rec["params"], {"cells": 0, "oracle_holds": 0, "engine_ok": 0})
        slot["cells"] += 1
        if rec["oracle"]:
            summary.oracle_holds += 1
            slot["oracle_holds"] += 1
        else:
            summary.oracle_absent += 1
            summary.counterexample_candidates.append(
                {"graph6": rec["graph6"], "params": rec["params"]})
        engine = rec["engine"]
        if engine == "ok":
            summary.engine_ok += 1
            slot["engine_ok"] += 1
        elif engine in ("n/a", "precondition", "unsupported"):
            summary.engine_na += 1
        elif engine == "skipped":
            summary.engine_skipped += 1
        else:
            summary.engine_failed += 1
            if rec["oracle"]:
                summary.engine_gaps.append(
                    {"graph6": rec["graph6"], "params": rec["params"],
                     "engine": engine})
        if rec["detail"].get("trace_ok") is False:
            summary.trace_violations += 1
        if sink is not None:
            sink.write(json.dumps(rec, sort_keys=True) + "\n")
