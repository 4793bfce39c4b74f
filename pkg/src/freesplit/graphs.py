"""Immutable simple-graph representation and format codecs.

Vertices are dense integer ids 0..n-1. Adjacency is stored as one int
bitmask per vertex, which makes the subset algebra used by the search
engines (induced degrees, component scans, clique tests) a handful of
bit operations. Graphs and vertex sets are values: every "modification"
builds a new object, so they can be shared freely between workers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import BindingError, EmptyGraph, LoopOrDuplicateEdge, MalformedInput

GRAPH6_HEADER = ">>graph6<<"


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``adj[v]`` is the neighbor bitmask of v."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise MalformedInput(f"adjacency length {len(self.adj)} != n={self.n}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise MalformedInput(f"neighbor of {v} out of range")
            if row >> v & 1:
                raise LoopOrDuplicateEdge(f"self-loop at {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise MalformedInput(f"asymmetric edge {v}-{u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise MalformedInput(f"negative vertex count {n}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedInput(f"edge ({u},{v}) outside 0..{n - 1}")
            if u == v:
                raise LoopOrDuplicateEdge(f"self-loop at {u}")
            if adj[u] >> v & 1:
                raise LoopOrDuplicateEdge(f"duplicate edge ({u},{v})")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u]) if u < v]

    def vertices(self) -> "VertexSet":
        return VertexSet(self.n, self.full_mask)


@dataclass(frozen=True)
class VertexSet:
    """Subset of 0..n-1 bound to an n-vertex graph, stored as a bitmask."""

    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise BindingError(f"members outside 0..{self.n - 1}")

    @classmethod
    def from_members(cls, n: int, members: Iterable[int]) -> "VertexSet":
        mask = 0
        for v in members:
            if not (0 <= v < n):
                raise BindingError(f"member {v} outside 0..{n - 1}")
            mask |= 1 << v
        return cls(n, mask)

    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.mask >> v & 1)

    def _check(self, other: "VertexSet") -> None:
        if self.n != other.n:
            raise BindingError(f"sets bound to different ranges {self.n} != {other.n}")

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.mask | other.mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.mask & other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.mask & ~other.mask)

    def complement(self) -> "VertexSet":
        return VertexSet(self.n, ((1 << self.n) - 1) & ~self.mask)

    def add(self, v: int) -> "VertexSet":
        if not (0 <= v < self.n):
            raise BindingError(f"member {v} outside 0..{self.n - 1}")
        return VertexSet(self.n, self.mask | 1 << v)

    def remove(self, v: int) -> "VertexSet":
        return VertexSet(self.n, self.mask & ~(1 << v))

    def is_subset(self, other: "VertexSet") -> bool:
        self._check(other)
        return not (self.mask & ~other.mask)

    def bound_to(self, g: Graph) -> None:
        if self.n != g.n:
            raise BindingError(f"set over 0..{self.n - 1} used with {g.n}-vertex graph")


# -- elementary queries -------------------------------------------------------


def degrees(g: Graph) -> tuple[int, int, list[int]]:
    """(min degree, max degree, per-vertex degree list); errors on n=0."""
    if g.n == 0:
        raise EmptyGraph("degrees undefined for the empty graph")
    per = [row.bit_count() for row in g.adj]
    return min(per), max(per), per


def induced_subgraph(g: Graph, s: VertexSet) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on ``s``, relabeled 0..|s|-1.

    Returns the subgraph and the relabeling map: new id i corresponds to
    old id ``vmap[i]``.
    """
    s.bound_to(g)
    vmap = s.members()
    index = {v: i for i, v in enumerate(vmap)}
    adj = []
    for v in vmap:
        row = 0
        for u in iter_bits(g.adj[v] & s.mask):
            row |= 1 << index[u]
        adj.append(row)
    return Graph(len(vmap), tuple(adj)), vmap


def component_masks(adj: tuple[int, ...], within: int) -> list[int]:
    """Connected-component bitmasks of the subgraph induced on ``within``."""
    out = []
    todo = within
    while todo:
        start = todo & -todo
        seen = start
        frontier = start
        while frontier:
            grow = 0
            for v in iter_bits(frontier):
                grow |= adj[v]
            frontier = grow & within & ~seen
            seen |= frontier
        out.append(seen)
        todo &= ~seen
    return out


def connected_components(g: Graph) -> list[VertexSet]:
    """Maximal connected pieces, ordered by smallest member."""
    return [VertexSet(g.n, m) for m in component_masks(g.adj, g.full_mask)]


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(component_masks(g.adj, g.full_mask)) == 1


def join(g: Graph, h: Graph) -> Graph:
    """Disjoint union of ``g`` and ``h`` plus all edges between the sides."""
    n = g.n + h.n
    gmask = (1 << g.n) - 1
    hmask = ((1 << n) - 1) & ~gmask
    adj = [row | hmask for row in g.adj]
    adj += [(row << g.n) | gmask for row in h.adj]
    return Graph(n, tuple(adj))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    adj = list(g.adj) + [row << g.n for row in h.adj]
    return Graph(g.n + h.n, tuple(adj))


# -- named constructions ------------------------------------------------------


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise MalformedInput(f"cycle needs >= 3 vertices, got {n}")
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(u, a + v) for u in range(a) for v in range(b)])


# -- format codecs ------------------------------------------------------------


def _g6_size_bytes(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    raise MalformedInput(f"graph6 vertex count {n} beyond supported range")


def _g6_parse_size(data: bytes) -> tuple[int, int]:
    if not data:
        raise MalformedInput("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) < 4 or data[1] == 126:
        raise MalformedInput("unsupported graph6 size header")
    n = 0
    for b in data[1:4]:
        n = n << 6 | (b - 63)
    return n, 4


def to_graph6(g: Graph) -> str:
    """Encode in graph6: size bytes, then upper-triangle bits column-major,
    packed into 6-bit groups (most significant bit first), each + 63."""
    bits = []
    for j in range(1, g.n):
        col = g.adj[j]
        for i in range(j):
            bits.append(col >> i & 1)
    while len(bits) % 6:
        bits.append(0)
    body = bytearray(_g6_size_bytes(g.n))
    for k in range(0, len(bits), 6):
        group = 0
        for bit in bits[k:k + 6]:
            group = group << 1 | bit
        body.append(group + 63)
    return body.decode("ascii")


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):].strip()
    try:
        data = s.encode("ascii")
    except UnicodeEncodeError as exc:
        raise MalformedInput(f"non-ascii graph6 input: {exc}") from None
    n, off = _g6_parse_size(data)
    if n < 0:
        raise MalformedInput("graph6 size byte below 63")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - off != nbytes:
        raise MalformedInput(
            f"graph6 body length {len(data) - off} != expected {nbytes} for n={n}")
    bits = []
    for b in data[off:]:
        if not 63 <= b <= 126:
            raise MalformedInput(f"graph6 byte {b} outside 63..126")
        group = b - 63
        bits.extend(group >> k & 1 for k in range(5, -1, -1))
    if any(bits[nbits:]):
        raise MalformedInput("nonzero padding bits in graph6 body")
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph(n, tuple(adj))


def to_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.edge_count}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> Graph:
    n = None
    m = None
    edges: list[tuple[int, int]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or len(parts) != 4 or parts[1] != "edge":
                raise MalformedInput(f"bad DIMACS header: {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedInput(f"bad DIMACS header: {line!r}") from None
        elif parts[0] == "e":
            if n is None:
                raise MalformedInput("DIMACS edge before 'p edge' header")
            if len(parts) != 3:
                raise MalformedInput(f"bad DIMACS edge line: {line!r}")
            try:
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
            except ValueError:
                raise MalformedInput(f"bad DIMACS edge line: {line!r}") from None
            edges.append((u, v))
        else:
            raise MalformedInput(f"unknown DIMACS line: {line!r}")
    if n is None:
        raise MalformedInput("missing 'p edge n m' header")
    if m != len(edges):
        raise MalformedInput(f"header declares {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str, n: int | None = None) -> Graph:
    tokens = text.split()
    if n is None:
        if not tokens:
            raise MalformedInput("edge list without declared vertex count")
        try:
            n = int(tokens[0])
        except ValueError:
            raise MalformedInput(f"bad vertex count {tokens[0]!r}") from None
        tokens = tokens[1:]
    if len(tokens) % 2:
        raise MalformedInput("odd number of edge-list tokens")
    try:
        nums = [int(t) for t in tokens]
    except ValueError as exc:
        raise MalformedInput(f"non-integer edge token: {exc}") from None
    return Graph.from_edges(n, list(zip(nums[0::2], nums[1::2])))


FORMATS = ("graph6", "edge-list", "dimacs")


def parse_graph(text: str, fmt: str, n: int | None = None) -> Graph:
    """Parse ``text`` in the named format (graph6 | edge-list | dimacs).

    ``n`` supplies the vertex count for edge lists whose text does not
    declare one; other formats ignore it.
    """
    if fmt == "graph6":
        return from_graph6(text)
    if fmt == "edge-list":
        return from_edge_list(text, n)
    if fmt == "dimacs":
        return from_dimacs(text)
    raise MalformedInput(f"unknown format {fmt!r}")


def serialize_graph(g: Graph, fmt: str) -> str:
    if fmt == "graph6":
        return to_graph6(g)
    if fmt == "edge-list":
        return to_edge_list(g)
    if fmt == "dimacs":
        return to_dimacs(g)
    raise MalformedInput(f"unknown format {fmt!r}")


def graph_hash(g: Graph) -> str:
    """Stable short content hash of the labeled graph (graph6-based)."""
    return hashlib.sha256(to_graph6(g).encode("ascii")).hexdigest()[:16]
