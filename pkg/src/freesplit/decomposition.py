"""Decomposition value type and its versioned serialization record."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import MalformedInput
from .graphs import Graph, VertexSet, graph_hash

RECORD_VERSION = 1


@dataclass(frozen=True)
class Decomposition:
    """Ordered disjoint cover of a graph's vertices; empty parts are legal."""

    parts: tuple[VertexSet, ...]

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    @classmethod
    def of(cls, *parts: VertexSet) -> "Decomposition":
        return cls(tuple(parts))


def partition_violation(g: Graph, d: Decomposition) -> dict | None:
    """None when parts are pairwise disjoint and cover V(g); else a witness."""
    union = 0
    for i, part in enumerate(d.parts):
        if part.n != g.n:
            return {"kind": "binding", "part": i}
        if union & part.mask:
            overlap = union & part.mask
            return {"kind": "overlap", "part": i,
                    "vertex": (overlap & -overlap).bit_length() - 1}
        union |= part.mask
    if union != g.full_mask:
        missing = g.full_mask & ~union
        return {"kind": "uncovered", "vertex": (missing & -missing).bit_length() - 1}
    return None


def decomposition_record(g: Graph, d: Decomposition,
                         trace_summary: dict | None = None,
                         report_id: str | None = None) -> dict:
    return {
        "format_version": RECORD_VERSION,
        "graph_hash": graph_hash(g),
        "parts": [list(p.members()) for p in d.parts],
        "trace_summary": trace_summary or {},
        "verifier_report_id": report_id,
    }


def record_to_json(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def decomposition_from_record(record: dict, g: Graph) -> Decomposition:
    if record.get("format_version") != RECORD_VERSION:
        raise MalformedInput(f"unsupported record version {record.get('format_version')}")
    if record.get("graph_hash") != graph_hash(g):
        raise MalformedInput("record graph hash does not match the supplied graph")
    return Decomposition(tuple(
        VertexSet.from_members(g.n, part) for part in record["parts"]))
