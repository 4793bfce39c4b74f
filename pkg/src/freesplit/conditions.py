"""Structural conclusion predicates shared by the engines, the verifier,
and the exhaustive oracle.

Everything here is built from graph/pattern primitives only, never from
search-engine state, so verifier reports reconstructed from serialized
inputs match the originals. Each predicate returns None on success or a
small replayable witness dict on failure.
"""

from __future__ import annotations

from .graphs import iter_bits
from .patterns import mask_k_cliques, mask_near_cliques


def mask_edge_count(adj: tuple[int, ...], mask: int) -> int:
    return sum((adj[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def degree_bound_violation(adj: tuple[int, ...], mask: int, limit: int) -> dict | None:
    """Some vertex of ``mask`` with more than ``limit`` neighbors in mask."""
    for v in iter_bits(mask):
        d = (adj[v] & mask).bit_count()
        if d > limit:
            return {"kind": "degree", "vertex": v, "degree": d, "limit": limit}
    return None


def anchor_violation(adj: tuple[int, ...], outside: int, inside: int,
                     need: int) -> dict | None:
    """Some vertex of ``outside`` with fewer than ``need`` neighbors in
    ``inside``."""
    for v in iter_bits(outside):
        have = (adj[v] & inside).bit_count()
        if have < need:
            return {"kind": "anchors", "vertex": v, "have": have, "need": need}
    return None


def clique_overlap_violation(adj: tuple[int, ...], mask: int, k: int) -> dict | None:
    """Two intersecting k-cliques inside ``mask``, if any."""
    cliques = mask_k_cliques(adj, mask, k)
    seen = 0
    for cm in cliques:
        if seen & cm:
            other = next(o for o in cliques if o != cm and o & cm)
            return {"kind": "clique-overlap", "k": k,
                    "clique_a": sorted(iter_bits(other)),
                    "clique_b": sorted(iter_bits(cm))}
        seen |= cm
    return None


def near_clique_membership_violation(adj: tuple[int, ...], mask: int,
                                     q: int) -> dict | None:
    """Some vertex of ``mask`` lying in two or more near-clique subsets of
    the induced subgraph without being in a full K_{q+1} connected
    component."""
    witnesses = mask_near_cliques(adj, mask, q)
    if not witnesses:
        return None
    counts: dict[int, int] = {}
    for wm, _ in witnesses:
        for v in iter_bits(wm):
            counts[v] = counts.get(v, 0) + 1
    pair_edges = (q + 1) * q // 2
    for v in sorted(counts):
        if counts[v] <= 1:
            continue
        # exempt when v's component induces exactly K_{q+1}
        comp = _component_of(adj, mask, v)
        if comp.bit_count() == q + 1 and mask_edge_count(adj, comp) == pair_edges:
            continue
        return {"kind": "near-clique-membership", "vertex": v, "copies": counts[v]}
    return None


def _component_of(adj: tuple[int, ...], mask: int, v: int) -> int:
    seen = 1 << v
    frontier = seen
    while frontier:
        grow = 0
        for u in iter_bits(frontier):
            grow |= adj[u]
        frontier = grow & mask & ~seen
        seen |= frontier
    return seen


def two_part_tail_violation(adj: tuple[int, ...], v2_mask: int, q: int) -> dict | None:
    """The residue-side conclusion of the two-part guarantee: induced max
    degree at most q, and q-cliques absent or pairwise disjoint."""
    bad = degree_bound_violation(adj, v2_mask, q)
    if bad is not None:
        return bad
    return clique_overlap_violation(adj, v2_mask, q)
