import itertools
import random

import pytest

from freesplit import (
    FreenessSpec,
    Graph,
    VertexSet,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    degrees,
    disjoint_union,
    empty_graph,
    is_free,
    list_k_cliques,
    parse_graph,
)
from freesplit.conditions import two_part_tail_violation
from freesplit.decomposition import (
    Decomposition,
    decomposition_from_record,
    decomposition_record,
    partition_violation,
)
from freesplit.decomposer import (
    Potential,
    clique_split,
    decompose_k,
    decompose_two,
    degenerate_max_split,
    degenerate_split,
    hitting_independent_set,
    refine,
    trace_discipline,
    _two_part_fallback,
)
from freesplit.errors import (
    NotOptimalSeed,
    PreconditionViolated,
    Stalled,
    UnsupportedCase,
)
from freesplit.graphs import iter_bits
from freesplit.maxfree import max_free_set
from freesplit.oracle import (
    GraphFilters,
    brute_force_best_decomposition,
    brute_force_max_free_size,
    random_regular_graph,
)
from freesplit.patterns import mask_is_free, mask_t_core

from conftest import icosahedron_graph, petersen_graph, strong_product_c5_k2

K2 = FreenessSpec.patterns_of([complete_graph(2)])
K3 = FreenessSpec.patterns_of([complete_graph(3)])
K4 = FreenessSpec.patterns_of([complete_graph(4)])
CORE2 = FreenessSpec.min_degree_core(2)

# 9-vertex host whose lexicographically smallest maximum triangle-free set
# leaves one near-clique in the residue; one swap clears it (found by
# seeded search over structured hosts, frozen here)
SWAP_FIXTURE_G6 = "HdCuHnE"
SWAP_FIXTURES = ["HdCuHnE", "HI`c[\\e", "HKaJK\\e"]


class TestPotential:
    def test_lexicographic_order(self):
        assert Potential(0, 10) < Potential(1, 0)
        assert Potential(1, 2) < Potential(1, 3)
        assert not Potential(1, 2) < Potential(1, 2)


class TestRefine:
    def test_zero_swaps_when_residue_clean(self):
        k55 = complete_bipartite(5, 5)
        seed = max_free_set(k55, K2).s
        s, trace = refine(k55, K2, 2, 4, seed)
        assert s == seed and trace == []

    def test_swap_fixture_clears_residue(self):
        g = parse_graph(SWAP_FIXTURE_G6, "graph6")
        seed = max_free_set(g, K3).s
        s, trace = refine(g, K3, 3, 3, seed)
        assert len(trace) == 1
        step = trace[0]
        assert step.potential_after < step.potential_before
        assert step.potential_before.g_copies == 1
        assert step.potential_after.g_copies == 0
        assert len(s) == len(seed)
        # residue satisfies the full tail conclusion
        assert two_part_tail_violation(g.adj, g.full_mask & ~s.mask, 3) is None

    @pytest.mark.parametrize("g6", SWAP_FIXTURES)
    def test_swap_fixture_discipline(self, g6):
        g = parse_graph(g6, "graph6")
        seed = max_free_set(g, K3).s
        s, trace = refine(g, K3, 3, 3, seed)
        disc = trace_discipline(g, K3, 3, s, trace)
        assert disc["cap_ok"] and disc["size_ok"] and disc["free_ok"] and disc["descent_ok"]
        assert disc["steps"] >= 1

    def test_swap_step_records_component_and_pool(self):
        g = parse_graph(SWAP_FIXTURE_G6, "graph6")
        seed = max_free_set(g, K3).s
        _, trace = refine(g, K3, 3, 3, seed)
        step = trace[0]
        assert step.v_in in step.r_component
        assert step.y_out in step.r_component
        assert step.v_in in step.b_set
        assert step.y_out != step.v_in

    def test_stalls_on_k6(self):
        # K6 fails the host near-clique precondition, but refine itself only
        # sees the potential landscape: every swap re-forms a 4-clique
        with pytest.raises(Stalled) as info:
            seed = max_free_set(complete_graph(6), K3).s
            refine(complete_graph(6), K3, 3, 3, seed)
        assert info.value.diagnostics["near_clique_copies"] >= 1

    def test_rejects_non_optimal_seed(self):
        k55 = complete_bipartite(5, 5)
        with pytest.raises(NotOptimalSeed):
            refine(k55, K2, 2, 4, VertexSet.from_members(10, [0, 1, 2, 3]))
        with pytest.raises(NotOptimalSeed):
            refine(k55, K2, 2, 4, VertexSet.from_members(10, [0, 5]))  # not free

    def test_rejects_bad_parameters(self):
        k55 = complete_bipartite(5, 5)
        seed = max_free_set(k55, K2).s
        with pytest.raises(PreconditionViolated):
            refine(k55, K2, 2, 3, seed)  # p + q != max degree + 1
        with pytest.raises(PreconditionViolated):
            refine(k55, K2, 4, 2, seed)  # q < 3


class TestDecomposeTwo:
    def test_k55_sides(self):
        result = decompose_two(complete_bipartite(5, 5), K2, 2, 4)
        assert result.decomposition.sizes() == (5, 5)
        assert result.report.overall
        assert result.counterexample is None

    def test_icosahedron_acyclic_split(self):
        ico = icosahedron_graph()
        result = decompose_two(ico, CORE2, 3, 3)
        v1, v2 = result.decomposition.parts
        assert result.report.overall
        # both conclusion clauses, checked directly
        assert is_free(_induced(ico, v1), CORE2)
        assert len(v1) == brute_force_max_free_size(ico, CORE2)
        assert all((ico.adj[v] & v2.mask).bit_count() <= 3 for v in v2)
        triangles = [c.mask for c in list_k_cliques(ico, 3) if c.mask & ~v2.mask == 0]
        for a, b in itertools.combinations(triangles, 2):
            assert not a & b

    def test_swap_fixture_end_to_end(self):
        g = parse_graph(SWAP_FIXTURE_G6, "graph6")
        result = decompose_two(g, K3, 3, 3)
        assert result.report.overall
        assert len(result.trace) == 1 and not result.fallback_used
        assert len(result.decomposition.parts[0]) == brute_force_max_free_size(g, K3)

    def test_k6_rejected_with_witness(self):
        with pytest.raises(PreconditionViolated) as info:
            decompose_two(complete_graph(6), K2, 2, 4)
        witness = info.value.witness
        assert len(witness["members"]) == 5

    @pytest.mark.parametrize("g,spec,p,q,reason", [
        (cycle_graph(7), FreenessSpec.patterns_of([complete_graph(2)]), 2, 1, "degree"),
        (disjoint_union(complete_bipartite(5, 5), complete_graph(1)),
         FreenessSpec.patterns_of([complete_graph(2)]), 2, 4, "connected"),
        (complete_bipartite(5, 5), FreenessSpec.patterns_of([complete_graph(2)]), 3, 3,
         "family min degree"),
        (complete_bipartite(5, 5), FreenessSpec.patterns_of([complete_graph(3)]), 4, 2,
         "q"),
        (complete_bipartite(5, 5), FreenessSpec.patterns_of([complete_graph(3)]), 2, 3,
         "p + q"),
    ])
    def test_precondition_failures(self, g, spec, p, q, reason):
        with pytest.raises(PreconditionViolated):
            decompose_two(g, spec, p, q)

    def test_oracle_agreement_on_random_hosts(self):
        rng = random.Random(101)
        filters = GraphFilters(connected=True, delta_exact=5, kd_minus_e_free=True)
        checked = 0
        while checked < 25:
            g = Graph.from_edges(8, [(u, v) for u in range(8) for v in range(u + 1, 8)
                                     if rng.random() < 0.42])
            if not filters.matches(g):
                continue
            checked += 1
            for spec, p, q in ((K2, 2, 4), (K3, 3, 3)):
                result = decompose_two(g, spec, p, q)
                assert result.report.overall
                best = brute_force_best_decomposition(
                    g, "theorem1", {"spec": spec, "q": q})
                assert best is not None
                assert len(result.decomposition.parts[0]) == len(best.parts[0])


class TestFallback:
    def test_fallback_scan_finds_valid_optimum(self):
        g = parse_graph(SWAP_FIXTURE_G6, "graph6")
        size = brute_force_max_free_size(g, K3)
        winner, certificates = _two_part_fallback(g, K3, 3, size)
        assert winner is not None
        assert mask_is_free(g.adj, winner, K3)
        assert two_part_tail_violation(g.adj, g.full_mask & ~winner, 3) is None
        # the lex-smallest optimum is certificated as violating
        assert certificates and certificates[0]["violation"]["kind"] is not None

    def test_fallback_reports_counterexample_certificates(self):
        # every maximum independent set of K5 is a singleton; the residue K4
        # has intersecting triangles, so no valid partition exists
        winner, certificates = _two_part_fallback(complete_graph(5), K2, 3, 1)
        assert winner is None
        assert len(certificates) == 5
        for cert in certificates:
            assert cert["violation"]["kind"] in ("clique-overlap", "degree")


class TestDecomposeK:
    def test_k99_whole_graph_first_part(self):
        g = complete_bipartite(9, 9)
        d = decompose_k(g, [K4, K4], [4, 4, 3])
        assert d.sizes() == (18, 0, 0)
        assert partition_violation(g, d) is None

    def test_parameter_sum_check(self):
        g = complete_bipartite(9, 9)
        with pytest.raises(PreconditionViolated):
            decompose_k(g, [K4, K4], [4, 4, 4])
        with pytest.raises(PreconditionViolated):
            decompose_k(g, [K4, K4], [4, 3, 4])
        with pytest.raises(PreconditionViolated):
            decompose_k(g, [K4], [4, 4, 3])
        with pytest.raises(PreconditionViolated):
            decompose_k(g, [K4, K3], [4, 4, 3])  # second family min degree 2 < 3

    def test_k10_rejected(self):
        with pytest.raises(PreconditionViolated):
            decompose_k(complete_graph(10), [K4, K4], [4, 4, 3])

    def test_random_nine_regular_instance(self):
        rng = random.Random(77)
        from freesplit.graphs import is_connected
        from freesplit.patterns import find_kd_minus_e
        while True:
            g = random_regular_graph(20, 9, rng)
            if is_connected(g) and find_kd_minus_e(g, 9) is None:
                break
        d = decompose_k(g, [K4, K4], [4, 4, 3])
        assert partition_violation(g, d) is None
        assert is_free(_induced(g, d.parts[0]), K4)
        assert is_free(_induced(g, d.parts[1]), K4)
        last = d.parts[2].mask
        assert all((g.adj[v] & last).bit_count() <= 3 for v in iter_bits(last))


class TestDegenerateSplit:
    def test_petersen_independent_plus_forest(self):
        pet = petersen_graph()
        d = degenerate_split(pet, 1, 2)
        v1, v2 = d.parts
        assert _induced(pet, v1).edge_count == 0
        assert is_free(_induced(pet, v2), CORE2)

    def test_c5_rejected_by_degree_precondition(self):
        # max degree 2 < 3: outside the split's hypotheses even though a
        # valid bipartition exists
        with pytest.raises(PreconditionViolated):
            degenerate_split(cycle_graph(5), 1, 2)

    def test_k4_rejected_clique_number(self):
        with pytest.raises(PreconditionViolated) as info:
            degenerate_split(complete_graph(4), 1, 2)
        assert info.value.witness["omega"] == 4

    def test_bounds_on_random_cubic(self):
        rng = random.Random(5)
        for _ in range(12):
            g = random_regular_graph(10, 3, rng)
            d = degenerate_split(g, 1, 2)
            v1, v2 = d.parts
            assert _induced(g, v1).edge_count == 0
            assert is_free(_induced(g, v2), CORE2)

    def test_split_with_larger_parameters(self):
        ico = icosahedron_graph()  # max degree 5
        d = degenerate_split(ico, 2, 3)
        v1, v2 = d.parts
        assert all((ico.adj[v] & v1.mask).bit_count() <= 2 for v in v1)
        assert all((ico.adj[v] & v2.mask).bit_count() <= 3 for v in v2)
        assert not mask_t_core(ico.adj, v1.mask, 2)
        assert not mask_t_core(ico.adj, v2.mask, 3)


class TestDegenerateMaxSplit:
    def test_petersen_maximum_independent_and_forest(self):
        pet = petersen_graph()
        d = degenerate_max_split(pet, 1, 2)
        v1, v2 = d.parts
        assert len(v1) == 4 == brute_force_max_free_size(pet, FreenessSpec.min_degree_core(1))
        assert _induced(pet, v1).edge_count == 0
        assert is_free(_induced(pet, v2), CORE2)

    def test_c7_rejected(self):
        with pytest.raises(PreconditionViolated):
            degenerate_max_split(cycle_graph(7), 2, 1)

    def test_k4_with_pendant(self):
        g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
        d = degenerate_max_split(g, 2, 2)
        v1, v2 = d.parts
        spec = FreenessSpec.min_degree_core(2)
        assert len(v1) == brute_force_max_free_size(g, spec)
        assert is_free(_induced(g, v1), spec)
        assert is_free(_induced(g, v2), spec)


class TestHittingIndependentSet:
    def test_k5_with_pendant(self):
        edges = [(u, v) for u in range(5) for v in range(u + 1, 5)] + [(0, 5)]
        g = Graph.from_edges(6, edges)
        hit = hitting_independent_set(g)
        assert hit is not None and len(hit) == 1
        assert hit.members()[0] < 5

    def test_c5_has_none(self):
        assert hitting_independent_set(cycle_graph(5)) is None
        # brute-force confirmation: every independent set misses some edge
        c5 = cycle_graph(5)
        edges = [frozenset(e) for e in c5.edges()]
        for mask in range(1 << 5):
            members = [v for v in range(5) if mask >> v & 1]
            independent = all(not c5.has_edge(u, v)
                              for u, v in itertools.combinations(members, 2))
            hits_all = all(any(v in e for v in members) for e in edges)
            assert not (independent and hits_all)

    def test_edgeless_returns_everything(self):
        assert hitting_independent_set(empty_graph(4)).members() == (0, 1, 2, 3)

    def test_strong_product_exception_graph(self):
        g = strong_product_c5_k2()
        assert degrees(g)[1] == 5
        from freesplit.patterns import clique_number
        assert clique_number(g) == 4
        assert hitting_independent_set(g) is None


class TestCliqueSplit:
    def test_k55_q2_unsupported(self):
        with pytest.raises(UnsupportedCase):
            clique_split(complete_bipartite(5, 5), 4, 2)

    def test_k55_q4_delegates(self):
        d = clique_split(complete_bipartite(5, 5), 2, 4)
        assert d.sizes() == (5, 5)

    def test_delta6_omega5_host(self):
        # K5 with two pendant paths on vertex 0: max degree 6, clique number 5
        edges = [(u, v) for u in range(5) for v in range(u + 1, 5)]
        edges += [(0, 5), (0, 6), (5, 7)]
        g = Graph.from_edges(8, edges)
        assert degrees(g)[1] == 6
        d = clique_split(g, 5, 2)
        v1, v2 = d.parts
        assert partition_violation(g, d) is None
        assert is_free(_induced(g, v1), FreenessSpec.patterns_of([complete_graph(5)]))
        assert _induced(g, v2).edge_count == 0
        # the removed set intersects every maximum clique
        for clique in list_k_cliques(g, 5):
            assert clique.mask & v2.mask

    def test_stalls_definitively_on_strong_product(self):
        g = strong_product_c5_k2()
        with pytest.raises(Stalled) as info:
            clique_split(g, 4, 2)
        assert info.value.definitive


class TestDecompositionRecord:
    def test_round_trip(self):
        g = petersen_graph()
        d = degenerate_split(g, 1, 2)
        record = decomposition_record(g, d, {"steps": 0}, "abc123")
        back = decomposition_from_record(record, g)
        assert back == d

    def test_wrong_graph_rejected(self):
        g = petersen_graph()
        record = decomposition_record(g, degenerate_split(g, 1, 2))
        from freesplit.errors import MalformedInput
        with pytest.raises(MalformedInput):
            decomposition_from_record(record, complete_graph(10))


def _induced(g: Graph, part) -> Graph:
    mask = part.mask if isinstance(part, VertexSet) else part
    members = list(iter_bits(mask))
    index = {v: i for i, v in enumerate(members)}
    adj = [0] * len(members)
    for v in members:
        for u in iter_bits(g.adj[v] & mask):
            adj[index[v]] |= 1 << index[u]
    return Graph(len(members), tuple(adj))
