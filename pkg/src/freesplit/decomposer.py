"""Decomposition pipelines: swap refinement under the lexicographic
potential, two-part and k-part peeling, degree/degeneracy splits, clique
splits, and hitting independent sets.

The refinement walks inside the family of maximum free sets: each step
swaps one vertex in from a near-clique's candidate pool and one vertex
out of the violating component, accepting the first swap that strictly
lowers (near-clique copies in the residue, residue edge count). Stalls
fall back to exhaustive enumeration of all maximum free sets at desk
scale; if none works the instance is packaged as a counterexample.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .conditions import (
    degree_bound_violation,
    mask_edge_count,
    two_part_tail_violation,
)
from .decomposition import Decomposition
from .errors import (
    EmptyGraph,
    FallbackExceeded,
    NotOptimalSeed,
    PreconditionViolated,
    RepairLoopExceeded,
    Stalled,
    UnsupportedCase,
)
from .graphs import (
    Graph,
    VertexSet,
    component_masks,
    degrees,
    induced_subgraph,
    is_connected,
    iter_bits,
    to_graph6,
)
from .maxfree import DEFAULT_NODE_BUDGET, MaxFreeResult, max_free_set
from .patterns import (
    FreenessSpec,
    clique_number,
    find_kd_minus_e,
    mask_is_free,
    mask_k_cliques,
    mask_near_clique_count,
    mask_near_cliques,
    mask_t_core,
)

DEFAULT_FALLBACK_BOUND = 16
MAXIMALITY_CHECK_MAX_N = 24


@dataclass(frozen=True, order=True)
class Potential:
    """Lexicographic descent measure: near-clique copies in the residue
    first, residue edge count second."""

    g_copies: int
    comp_edges: int


@dataclass(frozen=True)
class SwapStep:
    v_in: int
    y_out: int
    b_set: VertexSet
    r_component: VertexSet
    potential_before: Potential
    potential_after: Potential


@dataclass(frozen=True)
class TheoremCounterexample:
    """A host where no maximum free set has a residue satisfying the
    two-part conclusion; carries one violation certificate per set."""

    graph6: str
    spec: str
    p: int
    q: int
    optimal_size: int
    certificates: tuple[dict, ...]


@dataclass
class TwoPartResult:
    decomposition: Decomposition | None
    report: object | None
    trace: list[SwapStep] = field(default_factory=list)
    fallback_used: bool = False
    counterexample: TheoremCounterexample | None = None
    refined: VertexSet | None = None  # refine's final state, before any fallback


def trace_discipline(g: Graph, spec: FreenessSpec, q: int,
                     refined: VertexSet, trace: list[SwapStep]) -> dict:
    """Independently replay a swap trace backwards from its final state:
    strict lexicographic descent, constant set size, freeness of every
    intermediate set, and the descent-length cap."""
    adj = g.adj
    full = g.full_mask
    cap = (mask_near_clique_count(adj, full, q) + 1) * (g.edge_count + 1)
    states = [refined.mask]
    for step in reversed(trace):
        states.append(states[-1] & ~(1 << step.v_in) | 1 << step.y_out)
    states.reverse()
    size0 = states[0].bit_count()
    descent_ok = True
    for i, step in enumerate(trace):
        before = _potential(adj, full & ~states[i], q)
        after = _potential(adj, full & ~states[i + 1], q)
        if not (after < before and step.potential_before == before
                and step.potential_after == after):
            descent_ok = False
    return {
        "cap_ok": len(trace) <= cap,
        "size_ok": all(s.bit_count() == size0 for s in states),
        "free_ok": all(mask_is_free(adj, s, spec) for s in states),
        "descent_ok": descent_ok,
        "steps": len(trace),
    }


def _b_set_mask(wmask: int, missing: tuple[int, int] | None) -> int:
    if missing is not None:
        return wmask & ~(1 << missing[0]) & ~(1 << missing[1])
    members = list(iter_bits(wmask))
    return wmask & ~(1 << members[-1]) & ~(1 << members[-2])


def _articulation_points(adj: tuple[int, ...], mask: int) -> int:
    """Bitmask of cut vertices of the (connected) subgraph on ``mask``."""
    verts = list(iter_bits(mask))
    if len(verts) <= 2:
        return 0
    index = {}
    low = {}
    cut = 0
    counter = itertools.count()

    def dfs(v: int, parent: int) -> None:
        nonlocal cut
        index[v] = low[v] = next(counter)
        children = 0
        for u in iter_bits(adj[v] & mask):
            if u == parent:
                continue
            if u in index:
                low[v] = min(low[v], index[u])
                continue
            children += 1
            dfs(u, v)
            low[v] = min(low[v], low[u])
            if parent != -1 and low[u] >= index[v]:
                cut |= 1 << v
        if parent == -1 and children > 1:
            cut |= 1 << v

    for v in verts:
        if v not in index:
            dfs(v, -1)
    return cut


def _potential(adj: tuple[int, ...], comp_mask: int, q: int) -> Potential:
    return Potential(mask_near_clique_count(adj, comp_mask, q),
                     mask_edge_count(adj, comp_mask))


def _refine_core(g: Graph, spec: FreenessSpec, p: int, q: int, s0_mask: int
                 ) -> tuple[int, list[SwapStep], Potential]:
    """First-improvement swap descent from a maximum free set; returns the
    local minimum, the accepted steps, and the final potential."""
    adj = g.adj
    full = g.full_mask
    cap = (mask_near_clique_count(adj, full, q) + 1) * (g.edge_count + 1)
    s = s0_mask
    trace: list[SwapStep] = []
    while True:
        comp = full & ~s
        witnesses = mask_near_cliques(adj, comp, q)
        pot = Potential(len(witnesses), mask_edge_count(adj, comp))
        if not witnesses:
            return s, trace, pot
        accepted = None
        for wmask, missing in witnesses:
            b_mask = _b_set_mask(wmask, missing)
            for v in iter_bits(b_mask):
                if (adj[v] & s).bit_count() != p - 1:
                    continue
                s_plus = s | 1 << v
                r_comp = next(m for m in component_masks(adj, s_plus) if m >> v & 1)
                pool = [y for y in iter_bits(r_comp & ~(1 << v))
                        if mask_is_free(adj, s_plus & ~(1 << y), spec)]
                if not pool:
                    continue
                cuts = _articulation_points(adj, r_comp)
                pool.sort(key=lambda y: (bool(cuts >> y & 1), y))
                for y in pool:
                    s_new = s_plus & ~(1 << y)
                    new_pot = _potential(adj, full & ~s_new, q)
                    if new_pot < pot:
                        accepted = SwapStep(v, y, VertexSet(g.n, b_mask),
                                            VertexSet(g.n, r_comp), pot, new_pot)
                        s = s_new
                        break
                if accepted:
                    break
            if accepted:
                break
        if accepted is None:
            return s, trace, pot
        trace.append(accepted)
        if len(trace) > cap:
            raise RuntimeError(
                f"swap trace exceeded its descent cap {cap}; potential ordering broken")


def refine(g: Graph, spec: FreenessSpec, p: int, q: int, s0: VertexSet,
           *, known_optimal_size: int | None = None,
           budget: int = DEFAULT_NODE_BUDGET) -> tuple[VertexSet, list[SwapStep]]:
    """Swap-refine a maximum free set until its residue carries no
    near-clique; raises Stalled when a local minimum still violates the
    two-part conclusion."""
    if g.n == 0:
        raise EmptyGraph("refine undefined on the empty graph")
    if p < 2 or q < 3:
        raise PreconditionViolated("refine needs p >= 2 and q >= 3", (p, q))
    if p + q != degrees(g)[1] + 1:
        raise PreconditionViolated("p + q must equal max degree + 1", (p, q))
    s0.bound_to(g)
    if not mask_is_free(g.adj, s0.mask, spec):
        raise NotOptimalSeed("seed set is not free")
    if known_optimal_size is None:
        known_optimal_size = len(max_free_set(g, spec, budget).s)
    if len(s0) != known_optimal_size:
        raise NotOptimalSeed(
            f"seed size {len(s0)} != maximum free size {known_optimal_size}")
    s, trace, pot = _refine_core(g, spec, p, q, s0.mask)
    comp = g.full_mask & ~s
    tail = two_part_tail_violation(g.adj, comp, q)
    if pot.g_copies or tail is not None:
        raise Stalled("refinement stalled with a violating residue",
                      s=VertexSet(g.n, s), trace=trace,
                      diagnostics={"near_clique_copies": pot.g_copies,
                                   "residue_edges": pot.comp_edges,
                                   "tail_violation": tail})
    return VertexSet(g.n, s), trace


def _iter_free_sets_of_size(g: Graph, spec: FreenessSpec, size: int):
    """All free vertex subsets of exactly ``size``, ascending lex order."""
    for combo in itertools.combinations(range(g.n), size):
        mask = 0
        for v in combo:
            mask |= 1 << v
        if mask_is_free(g.adj, mask, spec):
            yield mask


def _two_part_fallback(g: Graph, spec: FreenessSpec, q: int, size: int
                       ) -> tuple[int | None, list[dict]]:
    """Scan every maximum free set for one whose residue satisfies the
    tail conclusion; returns (winning mask, per-set violation certificates)."""
    certificates = []
    for mask in _iter_free_sets_of_size(g, spec, size):
        tail = two_part_tail_violation(g.adj, g.full_mask & ~mask, q)
        if tail is None:
            return mask, certificates
        certificates.append({"set": sorted(iter_bits(mask)), "violation": tail})
    return None, certificates


def _check_two_preconditions(g: Graph, spec: FreenessSpec, p: int, q: int) -> int:
    if g.n == 0:
        raise PreconditionViolated("empty graph", None)
    if not is_connected(g):
        first = component_masks(g.adj, g.full_mask)[0]
        raise PreconditionViolated("graph must be connected",
                                   {"component": sorted(iter_bits(first))})
    delta = degrees(g)[1]
    if delta < 5:
        raise PreconditionViolated("max degree must be at least 5", {"delta": delta})
    if p < 2 or q < 3 or p + q != delta + 1:
        raise PreconditionViolated("need p >= 2, q >= 3, p + q = max degree + 1",
                                   {"p": p, "q": q, "delta": delta})
    if spec.declared_min_degree < p - 1:
        raise PreconditionViolated("family min degree below p - 1",
                                   {"declared": spec.declared_min_degree, "p": p})
    witness = find_kd_minus_e(g, delta)
    if witness is not None:
        raise PreconditionViolated(
            "host contains a near-clique on max-degree-many vertices",
            {"members": list(witness.w.members()), "missing_pair": witness.missing_pair})
    return delta


def decompose_two(g: Graph, spec: FreenessSpec, p: int, q: int,
                  *, budget: int = DEFAULT_NODE_BUDGET,
                  fallback_bound: int = DEFAULT_FALLBACK_BOUND,
                  verify: bool = True) -> TwoPartResult:
    """Two-part decomposition: a refined maximum free part plus a residue
    with bounded degree and disjoint-or-absent q-cliques."""
    _check_two_preconditions(g, spec, p, q)
    seed = max_free_set(g, spec, budget)
    fallback_used = False
    try:
        s, trace = refine(g, spec, p, q, seed.s, known_optimal_size=len(seed.s))
        refined = s
    except Stalled as stall:
        if g.n > fallback_bound:
            raise FallbackExceeded("refinement stalled", g.n, fallback_bound) from stall
        winner, certificates = _two_part_fallback(g, spec, q, len(seed.s))
        if winner is None:
            counterexample = TheoremCounterexample(
                graph6=to_graph6(g), spec=spec.describe(), p=p, q=q,
                optimal_size=len(seed.s), certificates=tuple(certificates))
            return TwoPartResult(None, None, stall.trace, True, counterexample,
                                 refined=stall.s)
        s = VertexSet(g.n, winner)
        trace = stall.trace
        refined = stall.s
        fallback_used = True
    d = Decomposition.of(s, s.complement())
    report = None
    if verify:
        from .verifier import verify_two
        report = verify_two(g, d, spec, p, q,
                            check_maximality=g.n <= MAXIMALITY_CHECK_MAX_N,
                            budget=budget)
    return TwoPartResult(d, report, trace, fallback_used, None, refined=refined)


def _tail_schedule(ps: list[int]) -> list[int]:
    """Effective residue degree bound after each peel: q_i = sum of the
    remaining parameters minus (number remaining - 1)."""
    k = len(ps)
    return [sum(ps[i + 1:]) - (k - i - 2) for i in range(k - 1)]


def decompose_k(g: Graph, specs: list[FreenessSpec], ps: list[int],
                *, budget: int = DEFAULT_NODE_BUDGET,
                fallback_bound: int = DEFAULT_FALLBACK_BOUND) -> Decomposition:
    """Iterated peeling: part i is a refined maximum free part of the
    residue; the last part inherits bounded degree and disjoint cliques."""
    k = len(ps)
    if k < 3:
        raise PreconditionViolated("k-part mode needs k >= 3", {"k": k})
    if g.n == 0:
        raise PreconditionViolated("empty graph", None)
    if not is_connected(g):
        raise PreconditionViolated("graph must be connected", None)
    delta = degrees(g)[1]
    if delta < 9:
        raise PreconditionViolated("max degree must be at least 9", {"delta": delta})
    if any(ps[i] < ps[i + 1] for i in range(k - 1)) or ps[-1] < 3 or ps[1] < 4:
        raise PreconditionViolated(
            "parameters must be non-increasing with p1 >= p2 >= 4 and pk >= 3",
            {"ps": list(ps)})
    if sum(ps) != delta - 1 + k:
        raise PreconditionViolated("parameter sum must equal max degree - 1 + k",
                                   {"ps": list(ps), "delta": delta})
    if len(specs) != k - 1:
        raise PreconditionViolated("need one family per part except the last",
                                   {"specs": len(specs), "k": k})
    for i, spec in enumerate(specs):
        if spec.declared_min_degree < ps[i] - 1:
            raise PreconditionViolated("family min degree below its p - 1",
                                       {"part": i + 1, "declared": spec.declared_min_degree})
    witness = find_kd_minus_e(g, delta)
    if witness is not None:
        raise PreconditionViolated(
            "host contains a near-clique on max-degree-many vertices",
            {"members": list(witness.w.members()), "missing_pair": witness.missing_pair})

    qs = _tail_schedule(list(ps))
    parts: list[VertexSet] = []
    residue = g.full_mask
    for i in range(k - 1):
        if not residue:
            parts.append(VertexSet(g.n, 0))
            continue
        sub, vmap = induced_subgraph(g, VertexSet(g.n, residue))
        if mask_is_free(sub.adj, sub.full_mask, specs[i]):
            parts.append(VertexSet(g.n, residue))
            residue = 0
            continue
        seed = max_free_set(sub, specs[i], budget)
        chosen, _ = _peel_with_refine(sub, specs[i], ps[i], qs[i], seed,
                                      last=(i == k - 2), fallback_bound=fallback_bound)
        part_mask = 0
        for j in iter_bits(chosen):
            part_mask |= 1 << vmap[j]
        parts.append(VertexSet(g.n, part_mask))
        residue &= ~part_mask
    parts.append(VertexSet(g.n, residue))
    return Decomposition(tuple(parts))


def _peel_with_refine(sub: Graph, spec: FreenessSpec, p: int, q: int,
                      seed: MaxFreeResult, *, last: bool,
                      fallback_bound: int) -> tuple[int, list[SwapStep]]:
    s, trace, pot = _refine_core(sub, spec, p, q, seed.s.mask)
    tail = two_part_tail_violation(sub.adj, sub.full_mask & ~s, q)
    if pot.g_copies == 0 and tail is None:
        return s, trace
    if sub.n <= fallback_bound:
        winner, certificates = _two_part_fallback(sub, spec, q, len(seed.s))
        if winner is not None:
            return winner, trace
        if last:
            raise Stalled("no maximum free set of the final residue satisfies "
                          "the tail conclusion", s=VertexSet(sub.n, s), trace=trace,
                          diagnostics={"certificates": certificates}, definitive=True)
        return s, trace
    if last:
        raise FallbackExceeded("final peel stalled", sub.n, fallback_bound)
    return s, trace


# -- degree/degeneracy splits ---------------------------------------------------


def _descend(adj: tuple[int, ...], full: int, v1: int, p: int, q: int) -> int:
    """Single-vertex-move local search minimizing q*e(V1) + p*e(V2)."""
    improved = True
    while improved:
        improved = False
        for v in iter_bits(full):
            v2 = full & ~v1
            if v1 >> v & 1:
                delta = p * (adj[v] & v2).bit_count() - q * (adj[v] & v1).bit_count()
                if delta < 0:
                    v1 &= ~(1 << v)
                    improved = True
            else:
                delta = q * (adj[v] & v1).bit_count() - p * (adj[v] & v2).bit_count()
                if delta < 0:
                    v1 |= 1 << v
                    improved = True
    return v1


def _regular_component(adj: tuple[int, ...], mask: int, r: int) -> int | None:
    """Smallest-member r-regular component of the subgraph on ``mask``;
    callers pass r >= 1."""
    for comp in component_masks(adj, mask):
        if all((adj[v] & comp).bit_count() == r for v in iter_bits(comp)):
            return comp
    return None


def _split_bounds_ok(adj, full, v1, p, q) -> bool:
    v2 = full & ~v1
    if degree_bound_violation(adj, v1, p) or degree_bound_violation(adj, v2, q):
        return False
    return (_regular_component(adj, v1, p) is None
            and _regular_component(adj, v2, q) is None)


def degenerate_split(g: Graph, p: int, q: int,
                     *, repair_cap: int | None = None,
                     fallback_bound: int = DEFAULT_FALLBACK_BOUND) -> Decomposition:
    """Bipartition with induced max degrees <= p / <= q and degeneracies
    <= p-1 / <= q-1, by weighted-edge descent plus a repair pass that
    breaks p- and q-regular components."""
    if g.n == 0:
        raise PreconditionViolated("empty graph", None)
    delta = degrees(g)[1]
    if delta < 3:
        raise PreconditionViolated("max degree must be at least 3", {"delta": delta})
    omega = clique_number(g)
    if omega > delta:
        raise PreconditionViolated("clique number exceeds max degree",
                                   {"omega": omega, "delta": delta})
    if p < 1 or q < 1 or p + q != delta:
        raise PreconditionViolated("need p, q >= 1 with p + q = max degree",
                                   {"p": p, "q": q, "delta": delta})
    adj = g.adj
    full = g.full_mask
    cap = repair_cap if repair_cap is not None else 60 * (g.n + 1)
    v1 = _descend(adj, full, 0, p, q)
    seen_states = {v1}
    steps = 0
    while True:
        bad1 = _regular_component(adj, v1, p)
        bad2 = _regular_component(adj, full & ~v1, q)
        if bad1 is None and bad2 is None:
            break
        steps += 1
        if steps > cap:
            v1 = _split_exhaustive(g, p, q, fallback_bound, v1)
            break
        moved = False
        if bad1 is not None:
            candidates = sorted(iter_bits(bad1),
                                key=lambda v: ((adj[v] & full & ~v1).bit_count(), v))
            for v in candidates:
                nxt = _descend(adj, full, v1 & ~(1 << v), p, q)
                if nxt not in seen_states:
                    v1 = nxt
                    seen_states.add(nxt)
                    moved = True
                    break
        if not moved and bad2 is not None:
            candidates = sorted(iter_bits(bad2),
                                key=lambda v: ((adj[v] & v1).bit_count(), v))
            for v in candidates:
                nxt = _descend(adj, full, v1 | 1 << v, p, q)
                if nxt not in seen_states:
                    v1 = nxt
                    seen_states.add(nxt)
                    moved = True
                    break
        if not moved:
            v1 = _split_exhaustive(g, p, q, fallback_bound, v1)
            break
    if not _split_bounds_ok(adj, full, v1, p, q):
        raise RepairLoopExceeded(
            "split repair finished without meeting every bound",
            partial={"v1": sorted(iter_bits(v1))})
    s = VertexSet(g.n, v1)
    return Decomposition.of(s, s.complement())


def _split_exhaustive(g: Graph, p: int, q: int, fallback_bound: int,
                      partial_v1: int) -> int:
    if g.n > fallback_bound:
        raise RepairLoopExceeded("split repair hit its cap",
                                 partial={"v1": sorted(iter_bits(partial_v1))})
    for mask in range(1 << g.n):
        if _split_bounds_ok(g.adj, g.full_mask, mask, p, q):
            return mask
    raise RepairLoopExceeded("no bipartition meets the degree/degeneracy bounds",
                             partial={"v1": sorted(iter_bits(partial_v1))})


def degenerate_max_split(g: Graph, p: int, q: int,
                         *, budget: int = DEFAULT_NODE_BUDGET,
                         fallback_bound: int = DEFAULT_FALLBACK_BOUND) -> Decomposition:
    """Maximum (p-1)-degenerate part plus a (q-1)-degenerate residue,
    via swap refinement on (q-core size of residue, residue edges)."""
    if g.n == 0:
        raise PreconditionViolated("empty graph", None)
    delta = degrees(g)[1]
    if delta < 3:
        raise PreconditionViolated("max degree must be at least 3", {"delta": delta})
    omega = clique_number(g)
    if omega > delta:
        raise PreconditionViolated("clique number exceeds max degree",
                                   {"omega": omega, "delta": delta})
    if p < 1 or q < 1 or p + q != delta:
        raise PreconditionViolated("need p, q >= 1 with p + q = max degree",
                                   {"p": p, "q": q, "delta": delta})
    spec = FreenessSpec.min_degree_core(p)
    seed = max_free_set(g, spec, budget)
    adj = g.adj
    full = g.full_mask
    s = seed.s.mask
    cap = (g.n + 1) * (g.edge_count + 1)
    steps = 0
    while True:
        comp = full & ~s
        core = mask_t_core(adj, comp, q)
        pot = (core.bit_count(), mask_edge_count(adj, comp))
        if pot[0] == 0:
            break
        order = sorted(iter_bits(comp), key=lambda v: (not core >> v & 1, v))
        accepted = False
        for v in order:
            s_plus = s | 1 << v
            viol = mask_t_core(adj, s_plus, p)
            for y in iter_bits(viol & ~(1 << v)):
                cand = s_plus & ~(1 << y)
                if mask_t_core(adj, cand, p):
                    continue
                new_comp = full & ~cand
                npot = (mask_t_core(adj, new_comp, q).bit_count(),
                        mask_edge_count(adj, new_comp))
                if npot < pot:
                    s = cand
                    accepted = True
                    break
            if accepted:
                break
        if not accepted:
            s = _degenerate_fallback(g, spec, q, len(seed.s), fallback_bound)
            break
        steps += 1
        if steps > cap:
            raise RuntimeError(f"split refinement exceeded its descent cap {cap}")
    v1 = VertexSet(g.n, s)
    return Decomposition.of(v1, v1.complement())


def _degenerate_fallback(g: Graph, spec: FreenessSpec, q: int, size: int,
                         fallback_bound: int) -> int:
    if g.n > fallback_bound:
        raise FallbackExceeded("degenerate split refinement stalled", g.n,
                               fallback_bound)
    for mask in _iter_free_sets_of_size(g, spec, size):
        if not mask_t_core(g.adj, g.full_mask & ~mask, q):
            return mask
    raise Stalled("no maximum degenerate part has a degenerate residue",
                  definitive=True)


# -- hitting independent sets and clique splits ---------------------------------


def hitting_independent_set(g: Graph) -> VertexSet | None:
    """An independent set meeting every maximum clique, by exact search
    over the clique system; None only after exhausting the space."""
    if g.n == 0:
        raise EmptyGraph("hitting set undefined on the empty graph")
    omega = clique_number(g)
    cliques = mask_k_cliques(g.adj, g.full_mask, omega)
    adj = g.adj

    def closed_nbhd(mask: int) -> int:
        out = mask
        for v in iter_bits(mask):
            out |= adj[v]
        return out

    def solve(chosen: int, remaining: tuple[int, ...]) -> int | None:
        live = [cm for cm in remaining if not cm & chosen]
        if not live:
            return chosen
        blocked = closed_nbhd(chosen)
        live.sort(key=lambda cm: (cm & ~blocked).bit_count())
        target = live[0]
        for v in iter_bits(target & ~blocked):
            got = solve(chosen | 1 << v, tuple(live[1:]))
            if got is not None:
                return got
        return None

    got = solve(0, tuple(cliques))
    return VertexSet(g.n, got) if got is not None else None


def clique_split(g: Graph, p: int, q: int,
                 *, budget: int = DEFAULT_NODE_BUDGET,
                 fallback_bound: int = DEFAULT_FALLBACK_BOUND) -> Decomposition:
    """Partition into a K_p-free part and a part that is K_q-free or has
    pairwise disjoint q-cliques. q >= 3 delegates to the two-part engine;
    q = 2 removes an independent set hitting every maximum clique."""
    if g.n == 0:
        raise PreconditionViolated("empty graph", None)
    if not is_connected(g):
        raise PreconditionViolated("graph must be connected", None)
    delta = degrees(g)[1]
    if delta < 5:
        raise PreconditionViolated("max degree must be at least 5", {"delta": delta})
    if p < 2 or q < 2 or p + q != delta + 1:
        raise PreconditionViolated("need p, q >= 2 with p + q = max degree + 1",
                                   {"p": p, "q": q, "delta": delta})
    witness = find_kd_minus_e(g, delta)
    if witness is not None:
        raise PreconditionViolated(
            "host contains a near-clique on max-degree-many vertices",
            {"members": list(witness.w.members()), "missing_pair": witness.missing_pair})
    if q >= 3:
        from .graphs import complete_graph as _complete
        spec = FreenessSpec.patterns_of([_complete(p)])
        result = decompose_two(g, spec, p, q, budget=budget,
                               fallback_bound=fallback_bound, verify=False)
        if result.counterexample is not None:
            raise Stalled("no maximum free set satisfies the split conclusion",
                          diagnostics={"certificates": result.counterexample.certificates},
                          definitive=True)
        return result.decomposition
    omega = clique_number(g)
    if omega != delta - 1:
        raise UnsupportedCase(
            f"q = 2 path needs clique number = max degree - 1, got {omega} != {delta - 1}")
    hit = hitting_independent_set(g)
    if hit is None:
        raise Stalled("no independent set meets every maximum clique",
                      diagnostics={"omega": omega}, definitive=True)
    return Decomposition.of(hit.complement(), hit)
