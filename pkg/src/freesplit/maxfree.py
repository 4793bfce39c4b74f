"""Exact and heuristic search for a maximum free induced subgraph.

Branch and bound over include/exclude decisions with two upper bounds:
the trivial |current| + |undecided| count, and for a single-clique
family a greedy clique-cover bound (at most k-1 picks per cover clique).
Ties among equal-size optima break to the lexicographically smallest
vertex set, certified by a second greedy fixing pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BudgetExhausted
from .graphs import Graph, VertexSet, iter_bits
from .patterns import FreenessSpec, mask_free_with_vertex, mask_is_free

DEFAULT_NODE_BUDGET = 5_000_000


@dataclass(frozen=True)
class MaxFreeResult:
    s: VertexSet
    optimal: bool
    nodes_explored: int
    bound_used: str


def greedy_free_set(g: Graph, spec: FreenessSpec, seed: int) -> VertexSet:
    """Maximal-by-inclusion free set from randomized insertion order."""
    order = list(range(g.n))
    random.Random(seed).shuffle(order)
    cur = 0
    for v in order:
        cand = cur | 1 << v
        if mask_free_with_vertex(g.adj, cand, v, spec):
            cur = cand
    return VertexSet(g.n, cur)


def _clique_cover_bound(adj: tuple[int, ...], cand: int, cap: int) -> int:
    """Greedy clique cover of ``cand``; a free set takes at most ``cap``
    vertices from each cover clique."""
    cliques: list[int] = []
    sizes: list[int] = []
    order = sorted(iter_bits(cand), key=lambda v: (-(adj[v] & cand).bit_count(), v))
    for v in order:
        row = adj[v]
        for i, cm in enumerate(cliques):
            if cm & ~row:
                continue
            cliques[i] = cm | 1 << v
            sizes[i] += 1
            break
        else:
            cliques.append(1 << v)
            sizes.append(1)
    return sum(min(s, cap) for s in sizes)


class _Search:
    """Shared branch-and-bound state with a node budget."""

    def __init__(self, g: Graph, spec: FreenessSpec, budget: int):
        self.adj = g.adj
        self.spec = spec
        self.budget = budget
        self.nodes = 0
        self.best_size = -1
        self.best_mask = 0
        self.cover_cap = None
        k = spec.single_clique_size
        if k is not None:
            self.cover_cap = k - 1

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhausted(f"node budget {self.budget} exhausted")

    def _pick(self, cur: int, cand: int) -> int:
        live = cur | cand
        return max(iter_bits(cand),
                   key=lambda v: ((self.adj[v] & live).bit_count(), -v))

    def _bound_beats(self, cur_size: int, cand: int, goal: int) -> bool:
        """Can cur + cand possibly exceed/reach ``goal``? (goal semantics
        handled by caller: pass best for strict-improve, target-1 for reach)."""
        if cur_size + cand.bit_count() <= goal:
            return False
        if self.cover_cap is not None and cand:
            if cur_size + _clique_cover_bound(self.adj, cand, self.cover_cap) <= goal:
                return False
        return True

    def optimize(self, cur: int, cand: int) -> None:
        """Grow the incumbent maximum free set (strict improvements only)."""
        self._tick()
        size = cur.bit_count()
        if size > self.best_size:
            self.best_size = size
            self.best_mask = cur
        if not cand or not self._bound_beats(size, cand, self.best_size):
            return
        v = self._pick(cur, cand)
        rest = cand & ~(1 << v)
        if mask_free_with_vertex(self.adj, cur | 1 << v, v, self.spec):
            self.optimize(cur | 1 << v, rest)
        self.optimize(cur, rest)

    def reachable(self, cur: int, cand: int, target: int) -> int | None:
        """A free superset of ``cur`` of exactly ``target`` vertices inside
        cur | cand, or None."""
        self._tick()
        size = cur.bit_count()
        if size == target:
            return cur
        if not self._bound_beats(size, cand, target - 1):
            return None
        v = self._pick(cur, cand)
        rest = cand & ~(1 << v)
        if mask_free_with_vertex(self.adj, cur | 1 << v, v, self.spec):
            got = self.reachable(cur | 1 << v, rest, target)
            if got is not None:
                return got
        return self.reachable(cur, rest, target)


def max_free_set(g: Graph, spec: FreenessSpec,
                 budget: int = DEFAULT_NODE_BUDGET) -> MaxFreeResult:
    """Maximum free induced-vertex set, exact within the node budget.

    Raises BudgetExhausted (carrying the non-optimal incumbent) when the
    tree cannot be exhausted in ``budget`` nodes.
    """
    if budget < 1:
        raise BudgetExhausted("budget must be >= 1",
                              incumbent=MaxFreeResult(VertexSet(g.n, 0), False, 0, "none"))
    bound_used = "size" if spec.single_clique_size is None else "size+clique-cover"
    if mask_is_free(g.adj, g.full_mask, spec):
        return MaxFreeResult(g.vertices(), True, 1, "whole-graph-free")
    search = _Search(g, spec, budget)
    if g.n > 10:
        # warm start pays only once the tree is nontrivial
        warm = max((greedy_free_set(g, spec, seed).mask for seed in (0, 1, 2)),
                   key=lambda m: m.bit_count())
        search.best_size = warm.bit_count()
        search.best_mask = warm
    try:
        search.optimize(0, g.full_mask)
        # fix membership vertex by vertex for the lex-smallest optimum
        target = search.best_size
        chosen = 0
        cand = g.full_mask
        witness = search.best_mask
        for v in range(g.n):
            if not cand >> v & 1:
                continue
            rest = cand & ~(1 << v)
            trial = chosen | 1 << v
            # invariant: chosen <= witness <= chosen | cand, |witness| = target
            if witness >> v & 1:
                chosen = trial
                cand = rest
                continue
            if mask_free_with_vertex(g.adj, trial, v, spec):
                got = search.reachable(trial, rest, target)
                if got is not None:
                    chosen = trial
                    cand = rest
                    witness = got
                    continue
            cand = rest
        result_mask = chosen
    except BudgetExhausted as exc:
        exc.incumbent = MaxFreeResult(VertexSet(g.n, search.best_mask), False,
                                      search.nodes, bound_used)
        raise
    return MaxFreeResult(VertexSet(g.n, result_mask), True, search.nodes, bound_used)
