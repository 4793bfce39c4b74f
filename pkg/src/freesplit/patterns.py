"""Forbidden-structure detection: freeness, cliques, cores, near-cliques.

Public operations take Graph/VertexSet values; the ``mask_*`` helpers are
the bitmask kernels behind them, shared with the search engines so hot
loops never build graph objects. ``mask`` arguments always denote the
vertex subset the check is restricted to.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyGraph, SpecError
from .graphs import Graph, VertexSet, component_masks, is_connected, iter_bits

# -- freeness specification ----------------------------------------------------


@dataclass(frozen=True)
class FreenessSpec:
    """The forbidden family: explicit connected patterns, or the implicit
    family of all graphs with minimum degree >= t (``core`` variant).

    ``declared_min_degree`` is the minimum degree every member of the
    family is promised to have; the two-part pipeline requires it to be
    at least p-1.
    """

    kind: str  # "patterns" | "core"
    declared_min_degree: int
    patterns: tuple[Graph, ...] = ()
    core_t: int = 0

    def __post_init__(self):
        if self.kind == "patterns":
            if not self.patterns:
                raise SpecError("patterns variant needs at least one pattern")
            for p in self.patterns:
                if p.n == 0:
                    raise SpecError("empty pattern graph")
                if not is_connected(p):
                    raise SpecError("pattern graphs must be connected")
                if p.n > 1 and min(row.bit_count() for row in p.adj) < self.declared_min_degree:
                    raise SpecError(
                        f"pattern min degree below declared {self.declared_min_degree}")
                if p.n == 1 and self.declared_min_degree > 0:
                    raise SpecError("single-vertex pattern has min degree 0")
        elif self.kind == "core":
            if self.core_t < 1:
                raise SpecError(f"core threshold must be >= 1, got {self.core_t}")
            if self.declared_min_degree != self.core_t:
                raise SpecError("core variant declares its own threshold")
        else:
            raise SpecError(f"unknown spec kind {self.kind!r}")
        clique = None
        if self.kind == "patterns" and len(self.patterns) == 1:
            p = self.patterns[0]
            if p.edge_count == p.n * (p.n - 1) // 2:
                clique = p.n
        object.__setattr__(self, "_single_clique", clique)

    @classmethod
    def patterns_of(cls, patterns, declared_min_degree: int | None = None) -> "FreenessSpec":
        pats = tuple(patterns)
        if declared_min_degree is None:
            if not pats:
                raise SpecError("patterns variant needs at least one pattern")
            declared_min_degree = min(
                min((row.bit_count() for row in p.adj), default=0) for p in pats)
        return cls("patterns", declared_min_degree, patterns=pats)

    @classmethod
    def min_degree_core(cls, t: int) -> "FreenessSpec":
        return cls("core", t, core_t=t)

    @property
    def single_clique_size(self) -> int | None:
        """k when the family is exactly {K_k}; None otherwise."""
        return self._single_clique

    def describe(self) -> str:
        if self.kind == "core":
            return f"core:{self.core_t}"
        k = self.single_clique_size
        if k is not None:
            return f"clique:{k}"
        from .graphs import to_graph6
        return "patterns:" + ",".join(to_graph6(p) for p in self.patterns)


@dataclass(frozen=True)
class NearCliqueWitness:
    """A (q+1)-subset inducing K_{q+1} or K_{q+1} minus exactly one edge.

    ``missing_pair`` is the unique absent edge, or None for a full clique.
    """

    w: VertexSet
    missing_pair: tuple[int, int] | None = None

    def b_set(self) -> VertexSet:
        """Members minus the non-adjacent (or, for full cliques, the two
        largest, as the distinguished) pair; the swap-in candidate pool."""
        if self.missing_pair is not None:
            u, v = self.missing_pair
            return VertexSet(self.w.n, self.w.mask & ~(1 << u) & ~(1 << v))
        members = self.w.members()
        drop = (1 << members[-1]) | (1 << members[-2])
        return VertexSet(self.w.n, self.w.mask & ~drop)


# -- subgraph (monomorphism) search ---------------------------------------------


def _pattern_order(pattern: Graph) -> list[tuple[int, tuple[int, ...], int]]:
    """Search order: (pattern vertex, earlier neighbors, degree), chosen so
    each vertex after the first in a component touches placed vertices."""
    n = pattern.n
    degs = [pattern.adj[v].bit_count() for v in range(n)]
    placed: list[int] = []
    placed_set = 0
    order: list[tuple[int, tuple[int, ...], int]] = []
    while len(placed) < n:
        best = None
        for v in range(n):
            if placed_set >> v & 1:
                continue
            anchored = (pattern.adj[v] & placed_set).bit_count()
            key = (anchored, degs[v], -v)
            if best is None or key > best[0]:
                best = (key, v)
        v = best[1]
        earlier = tuple(u for u in placed if pattern.adj[v] >> u & 1)
        order.append((v, earlier, degs[v]))
        placed.append(v)
        placed_set |= 1 << v
    return order


def mask_find_embedding(adj: tuple[int, ...], mask: int, pattern: Graph,
                        forced: tuple[int, int] | None = None) -> dict[int, int] | None:
    """First injective map of ``pattern`` into the subgraph on ``mask``
    preserving pattern edges, or None. ``forced`` pins one pattern vertex
    to one host vertex (used for incremental rechecks)."""
    if pattern.n == 0:
        return {}
    if pattern.n > mask.bit_count():
        return None
    order = _pattern_order(pattern)
    if forced is not None:
        fu, fv = forced
        order = sorted(order, key=lambda item: item[0] != fu)
        # recompute earlier-neighbor lists for the new order
        seq = [item[0] for item in order]
        order = [
            (v, tuple(u for u in seq[:i] if pattern.adj[v] >> u & 1),
             pattern.adj[v].bit_count())
            for i, v in enumerate(seq)
        ]
    host_deg = {v: (adj[v] & mask).bit_count() for v in iter_bits(mask)}
    image = {}
    used = 0

    def place(i: int) -> bool:
        nonlocal used
        if i == len(order):
            return True
        pv, earlier, pdeg = order[i]
        if forced is not None and pv == forced[0]:
            if not mask >> forced[1] & 1 or used >> forced[1] & 1:
                return False
            cand_mask = 1 << forced[1]
        else:
            cand_mask = mask & ~used
        for u in earlier:
            cand_mask &= adj[image[u]]
        for hv in iter_bits(cand_mask):
            if host_deg[hv] < pdeg:
                continue
            image[pv] = hv
            used |= 1 << hv
            if place(i + 1):
                return True
            used &= ~(1 << hv)
            del image[pv]
        return False

    return dict(image) if place(0) else None


def contains_subgraph(host: Graph, pattern: Graph) -> dict[int, int] | None:
    """Injective, edge-preserving (not necessarily induced) map of
    ``pattern`` into ``host``, or None; deterministic given vertex order."""
    return mask_find_embedding(host.adj, host.full_mask, pattern)


# -- cores and degeneracy -------------------------------------------------------


def mask_t_core(adj: tuple[int, ...], mask: int, t: int) -> int:
    """Maximal subset of ``mask`` whose induced subgraph has min degree >= t,
    by iterated deletion of low-degree vertices."""
    cur = mask
    stack = [v for v in iter_bits(cur) if (adj[v] & cur).bit_count() < t]
    while stack:
        v = stack.pop()
        if not cur >> v & 1:
            continue
        cur &= ~(1 << v)
        for u in iter_bits(adj[v] & cur):
            if (adj[u] & cur).bit_count() < t:
                stack.append(u)
    return cur


def t_core(g: Graph, t: int) -> VertexSet:
    if t < 1:
        raise SpecError(f"core threshold must be >= 1, got {t}")
    return VertexSet(g.n, mask_t_core(g.adj, g.full_mask, t))


def degeneracy(g: Graph) -> tuple[int, list[int]]:
    """Smallest d admitting an elimination order with <= d later-ordered
    neighbors per vertex; returns (d, such an order). Min-degree peeling
    with smallest-id tie-break."""
    if g.n == 0:
        raise EmptyGraph("degeneracy undefined for the empty graph")
    remaining = g.full_mask
    order = []
    d = 0
    while remaining:
        v = min(iter_bits(remaining), key=lambda u: ((g.adj[u] & remaining).bit_count(), u))
        d = max(d, (g.adj[v] & remaining).bit_count())
        order.append(v)
        remaining &= ~(1 << v)
    return d, order


# -- cliques --------------------------------------------------------------------


def mask_k_cliques(adj: tuple[int, ...], mask: int, k: int) -> list[int]:
    """Bitmasks of all k-subsets of ``mask`` inducing K_k, ascending."""
    out: list[int] = []
    if k < 1:
        return out

    def rec(chosen: int, size: int, cand: int) -> None:
        if size == k:
            out.append(chosen)
            return
        if size + cand.bit_count() < k:
            return
        for v in iter_bits(cand):
            rec(chosen | 1 << v, size + 1, cand & adj[v] & ~((1 << (v + 1)) - 1))

    rec(0, 0, mask)
    return out


def mask_find_clique(adj: tuple[int, ...], mask: int, k: int) -> int | None:
    """First k-clique bitmask within ``mask`` in ascending order, or None."""
    if k < 1:
        return 0

    def rec(chosen: int, size: int, cand: int) -> int | None:
        if size == k:
            return chosen
        if size + cand.bit_count() < k:
            return None
        for v in iter_bits(cand):
            got = rec(chosen | 1 << v, size + 1, cand & adj[v] & ~((1 << (v + 1)) - 1))
            if got is not None:
                return got
        return None

    return rec(0, 0, mask)


def mask_clique_number(adj: tuple[int, ...], mask: int) -> int:
    """Exact clique number of the subgraph on ``mask`` (pivoted expansion)."""
    best = 0

    def expand(size: int, p: int, x: int) -> None:
        nonlocal best
        if not p:
            if not x:
                best = max(best, size)
            return
        if size + p.bit_count() <= best:
            return
        pivot = max(iter_bits(p | x), key=lambda v: (adj[v] & p).bit_count())
        for v in iter_bits(p & ~adj[pivot]):
            expand(size + 1, p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, mask, 0)
    return best


def clique_number(g: Graph) -> int:
    if g.n == 0:
        raise EmptyGraph("clique number undefined for the empty graph")
    return mask_clique_number(g.adj, g.full_mask)


def list_k_cliques(g: Graph, k: int) -> list[VertexSet]:
    if k < 1:
        raise SpecError(f"clique size must be >= 1, got {k}")
    return [VertexSet(g.n, m) for m in mask_k_cliques(g.adj, g.full_mask, k)]


# -- near-cliques ---------------------------------------------------------------


def mask_near_cliques(adj: tuple[int, ...], mask: int, q: int
                      ) -> list[tuple[int, tuple[int, int] | None]]:
    """All (q+1)-subsets of ``mask`` spanning at least C(q+1,2)-1 induced
    edges, as (subset mask, missing pair or None). Full cliques come from
    (q+1)-clique listing; one-edge-short subsets from each non-edge {u,v}
    extended by a (q-1)-clique in the common neighborhood."""
    found = [(m, None) for m in mask_k_cliques(adj, mask, q + 1)]
    verts = list(iter_bits(mask))
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if adj[u] >> v & 1:
                continue
            common = adj[u] & adj[v] & mask
            if common.bit_count() < q - 1:
                continue
            for m in mask_k_cliques(adj, common, q - 1):
                found.append((m | 1 << u | 1 << v, (u, v)))
    found.sort(key=lambda item: sorted(iter_bits(item[0])))
    return found


def mask_near_clique_count(adj: tuple[int, ...], mask: int, q: int) -> int:
    count = len(mask_k_cliques(adj, mask, q + 1))
    verts = list(iter_bits(mask))
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if adj[u] >> v & 1:
                continue
            common = adj[u] & adj[v] & mask
            if common.bit_count() >= q - 1:
                count += len(mask_k_cliques(adj, common, q - 1))
    return count


def count_near_cliques(g: Graph, q: int) -> tuple[int, list[NearCliqueWitness]]:
    """Number and witnesses of (q+1)-vertex subsets inducing K_{q+1} or
    K_{q+1} minus one edge; a full clique counts once."""
    if q < 2:
        raise SpecError(f"near-clique order must be >= 2, got {q}")
    raw = mask_near_cliques(g.adj, g.full_mask, q)
    witnesses = [NearCliqueWitness(VertexSet(g.n, m), pair) for m, pair in raw]
    return len(witnesses), witnesses


def find_kd_minus_e(g: Graph, d: int) -> NearCliqueWitness | None:
    """A d-subset spanning K_d minus at most one edge, or None."""
    if d < 2:
        raise SpecError(f"near-clique order must be >= 2, got {d}")
    full = mask_find_clique(g.adj, g.full_mask, d)
    if full is not None:
        return NearCliqueWitness(VertexSet(g.n, full), None)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.adj[u] >> v & 1:
                continue
            common = g.adj[u] & g.adj[v]
            if common.bit_count() < d - 2:
                continue
            m = mask_find_clique(g.adj, common, d - 2)
            if m is not None:
                return NearCliqueWitness(VertexSet(g.n, m | 1 << u | 1 << v), (u, v))
    return None


# -- freeness -------------------------------------------------------------------


def mask_is_free(adj: tuple[int, ...], mask: int, spec: FreenessSpec) -> bool:
    if spec.kind == "core":
        return mask_t_core(adj, mask, spec.core_t) == 0
    k = spec.single_clique_size
    if k is not None:
        return mask_find_clique(adj, mask, k) is None
    return all(mask_find_embedding(adj, mask, p) is None for p in spec.patterns)


def mask_free_with_vertex(adj: tuple[int, ...], mask: int, v: int,
                          spec: FreenessSpec) -> bool:
    """Whether ``mask`` (containing v) stays free, assuming mask - v was
    free; only structures through v are rechecked."""
    if spec.kind == "core":
        comp = component_masks(adj, mask)
        for m in comp:
            if m >> v & 1:
                return mask_t_core(adj, m, spec.core_t) == 0
        return True
    k = spec.single_clique_size
    if k is not None:
        within = adj[v] & mask
        if k == 2:
            return within == 0
        if k == 3:
            for u in iter_bits(within):
                if adj[u] & within & ~((1 << (u + 1)) - 1):
                    return False
            return True
        return mask_find_clique(adj, within, k - 1) is None
    for p in spec.patterns:
        for pv in range(p.n):
            if mask_find_embedding(adj, mask, p, forced=(pv, v)) is not None:
                return False
    return True


def is_free(g: Graph, spec: FreenessSpec) -> bool:
    """True iff no member of the family embeds in ``g`` as a subgraph."""
    return mask_is_free(g.adj, g.full_mask, spec)


def spec_from_string(text: str) -> FreenessSpec:
    """Parse a family description: ``clique:k``, ``core:t``,
    ``cycle-family`` (all cycles, i.e. core:2), or ``file:PATH``.

    Pattern files hold one graph6 string per line; ``.dimacs``/``.col``
    and ``.edges`` files hold a single pattern in those formats.
    """
    from .graphs import complete_graph, from_dimacs, from_edge_list, from_graph6

    s = text.strip()
    if s == "cycle-family":
        return FreenessSpec.min_degree_core(2)
    if s.startswith("clique:"):
        k = int(s.split(":", 1)[1])
        if k < 2:
            raise SpecError(f"clique family needs k >= 2, got {k}")
        return FreenessSpec.patterns_of([complete_graph(k)])
    if s.startswith("core:"):
        return FreenessSpec.min_degree_core(int(s.split(":", 1)[1]))
    if s.startswith("file:"):
        path = s.split(":", 1)[1]
        with open(path, encoding="utf-8") as handle:
            body = handle.read()
        if path.endswith((".dimacs", ".col")):
            patterns = [from_dimacs(body)]
        elif path.endswith(".edges"):
            patterns = [from_edge_list(body)]
        else:
            patterns = [from_graph6(line) for line in body.splitlines() if line.strip()]
        return FreenessSpec.patterns_of(patterns)
    raise SpecError(f"cannot parse family {text!r}")
