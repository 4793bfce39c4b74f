"""Post-hoc certification of claimed decompositions.

Checks are built from graph/pattern primitives only (plus the exact
maximum-free search for maximality), never from engine state, so a
report recomputed from serialized inputs is identical to the original.
Every failing check carries a witness replayable against the inputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .conditions import (
    anchor_violation,
    clique_overlap_violation,
    degree_bound_violation,
    near_clique_membership_violation,
)
from .decomposition import Decomposition, partition_violation
from .errors import PreconditionViolated
from .graphs import Graph, VertexSet, induced_subgraph, iter_bits
from .maxfree import DEFAULT_NODE_BUDGET, max_free_set
from .patterns import (
    FreenessSpec,
    degeneracy,
    find_kd_minus_e,
    mask_is_free,
    mask_t_core,
)


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    witness: dict | None = None


@dataclass(frozen=True)
class Report:
    checks: tuple[CheckResult, ...]

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def report_id(self) -> str:
        body = json.dumps([(c.check_id, c.passed, c.witness) for c in self.checks],
                          sort_keys=True)
        return hashlib.sha256(body.encode()).hexdigest()[:16]

    def to_record(self) -> dict:
        return {
            "overall": self.overall,
            "report_id": self.report_id(),
            "checks": [
                {"id": c.check_id, "passed": c.passed, "witness": c.witness}
                for c in self.checks
            ],
        }


def _check(check_id: str, witness: dict | None) -> CheckResult:
    return CheckResult(check_id, witness is None, witness)


def verify_two(g: Graph, d: Decomposition, spec: FreenessSpec, p: int, q: int,
               check_maximality: bool, *,
               budget: int = DEFAULT_NODE_BUDGET) -> Report:
    """Certify a two-part decomposition against the full conclusion.

    C1 partition, C2 freeness of part one, C3 maximality (optional),
    C4 residue anchor/degree bounds, C5 near-clique memberships,
    C6 disjoint q-cliques, C7 host near-clique freeness.
    """
    if len(d.parts) != 2:
        raise PreconditionViolated("two-part report needs exactly 2 parts",
                                   {"parts": len(d.parts)})
    checks: list[CheckResult] = [_check("C1", partition_violation(g, d))]
    if not checks[0].passed:
        return Report(tuple(checks))
    v1, v2 = d.parts[0].mask, d.parts[1].mask
    adj = g.adj

    free = mask_is_free(adj, v1, spec)
    checks.append(CheckResult("C2", free, None if free else {"kind": "not-free"}))

    if check_maximality:
        optimum = len(max_free_set(g, spec, budget).s)
        ok = v1.bit_count() == optimum
        checks.append(CheckResult(
            "C3", ok,
            None if ok else {"kind": "not-maximum", "size": v1.bit_count(),
                             "optimum": optimum}))

    bad = anchor_violation(adj, v2, v1, p - 1) or degree_bound_violation(adj, v2, q)
    checks.append(_check("C4", bad))
    checks.append(_check("C5", near_clique_membership_violation(adj, v2, q)))
    checks.append(_check("C6", clique_overlap_violation(adj, v2, q)))

    if g.n:
        delta = max(row.bit_count() for row in adj)
        witness = find_kd_minus_e(g, delta) if delta >= 2 else None
        checks.append(CheckResult(
            "C7", witness is None,
            None if witness is None else {"kind": "host-near-clique",
                                          "members": list(witness.w.members()),
                                          "missing_pair": witness.missing_pair}))
    else:
        checks.append(CheckResult("C7", True, None))
    return Report(tuple(checks))


def verify_k(g: Graph, d: Decomposition, specs: list[FreenessSpec],
             ps: list[int], *, check_maximality: bool = True,
             budget: int = DEFAULT_NODE_BUDGET) -> Report:
    """Certify a k-part decomposition: partition, per-part freeness,
    maximality of the first part, and the final part's degree and
    disjoint-clique bounds."""
    k = len(ps)
    if len(d.parts) != k:
        raise PreconditionViolated("part count must match parameter count",
                                   {"parts": len(d.parts), "k": k})
    if len(specs) != k - 1:
        raise PreconditionViolated("need one family per part except the last",
                                   {"specs": len(specs), "k": k})
    checks: list[CheckResult] = [_check("C1", partition_violation(g, d))]
    if not checks[0].passed:
        return Report(tuple(checks))
    adj = g.adj
    for i, spec in enumerate(specs):
        free = mask_is_free(adj, d.parts[i].mask, spec)
        checks.append(CheckResult(
            f"K2.{i + 1}", free, None if free else {"kind": "not-free", "part": i + 1}))
    if check_maximality:
        optimum = len(max_free_set(g, specs[0], budget).s)
        ok = len(d.parts[0]) == optimum
        checks.append(CheckResult(
            "K3", ok, None if ok else {"kind": "not-maximum",
                                       "size": len(d.parts[0]), "optimum": optimum}))
    last = d.parts[-1].mask
    checks.append(_check("K4", degree_bound_violation(adj, last, ps[-1])))
    checks.append(_check("K5", clique_overlap_violation(adj, last, ps[-1])))
    return Report(tuple(checks))


def verify_degenerate(g: Graph, d: Decomposition, p: int, q: int, mode: str,
                      *, budget: int = DEFAULT_NODE_BUDGET) -> Report:
    """Certify a degeneracy split: degree bounds (lemmaA mode only),
    degeneracy bounds on both parts, and maximality of the first part
    (theoremC mode only)."""
    if mode not in ("lemmaA", "theoremC"):
        raise PreconditionViolated("mode must be lemmaA or theoremC", {"mode": mode})
    if len(d.parts) != 2:
        raise PreconditionViolated("degenerate report needs exactly 2 parts",
                                   {"parts": len(d.parts)})
    checks: list[CheckResult] = [_check("C1", partition_violation(g, d))]
    if not checks[0].passed:
        return Report(tuple(checks))
    adj = g.adj
    v1, v2 = d.parts[0].mask, d.parts[1].mask
    if mode == "lemmaA":
        checks.append(_check("D2", degree_bound_violation(adj, v1, p)))
        checks.append(_check("D3", degree_bound_violation(adj, v2, q)))
    checks.append(_check("D4", _degeneracy_violation(g, v1, p - 1, part=1)))
    checks.append(_check("D5", _degeneracy_violation(g, v2, q - 1, part=2)))
    if mode == "theoremC":
        optimum = len(max_free_set(g, FreenessSpec.min_degree_core(p), budget).s)
        ok = v1.bit_count() == optimum
        checks.append(CheckResult(
            "D6", ok, None if ok else {"kind": "not-maximum",
                                       "size": v1.bit_count(), "optimum": optimum}))
    return Report(tuple(checks))


def verify_clique_split(g: Graph, d: Decomposition, p: int, q: int) -> Report:
    """Certify a clique split: partition, first part K_p-free, second part
    K_q-free or with pairwise disjoint q-cliques."""
    from .graphs import complete_graph

    if len(d.parts) != 2:
        raise PreconditionViolated("clique-split report needs exactly 2 parts",
                                   {"parts": len(d.parts)})
    checks: list[CheckResult] = [_check("C1", partition_violation(g, d))]
    if not checks[0].passed:
        return Report(tuple(checks))
    spec = FreenessSpec.patterns_of([complete_graph(p)])
    free = mask_is_free(g.adj, d.parts[0].mask, spec)
    checks.append(CheckResult("L2", free, None if free else {"kind": "not-free"}))
    checks.append(_check("L3", clique_overlap_violation(g.adj, d.parts[1].mask, q)))
    return Report(tuple(checks))


def _degeneracy_violation(g: Graph, mask: int, limit: int, part: int) -> dict | None:
    if not mask:
        return None
    core = mask_t_core(g.adj, mask, limit + 1)
    if not core:
        return None
    sub, _ = induced_subgraph(g, VertexSet(g.n, mask))
    dgn, _ = degeneracy(sub)
    return {"kind": "degeneracy", "part": part, "degeneracy": dgn, "limit": limit,
            "core": sorted(iter_bits(core))}
