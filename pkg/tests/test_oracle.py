import io
import itertools
import json
import random

import pytest

from freesplit import (
    FreenessSpec,
    Graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    degrees,
    is_connected,
    parse_graph,
    serialize_graph,
)
from freesplit.errors import RangeExceeded, SpecError
from freesplit.oracle import (
    GraphFilters,
    HuntTask,
    ParamPoint,
    brute_force_best_decomposition,
    brute_force_isomorphic,
    brute_force_max_free_size,
    canonical_key,
    enumerate_graphs,
    hunt,
    random_graph,
    random_regular_graph,
)

K2 = FreenessSpec.patterns_of([complete_graph(2)])
K3 = FreenessSpec.patterns_of([complete_graph(3)])


class TestEnumeration:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_unfiltered_counts(self, n):
        expected = 2 ** (n * (n - 1) // 2)
        assert sum(1 for _ in enumerate_graphs(n)) == expected

    def test_n3_connected(self):
        labeled = list(enumerate_graphs(3, GraphFilters(connected=True)))
        assert len(labeled) == 4  # three labelings of the path plus the triangle
        classes = list(enumerate_graphs(3, GraphFilters(connected=True), dedup=True))
        assert len(classes) == 2

    def test_n4_delta3_connected_triangle_free(self):
        filters = GraphFilters(connected=True, delta_exact=3, omega_max=2)
        got = list(enumerate_graphs(4, filters))
        # the star is in; C4 has max degree 2 so it is out
        star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert any(g == star for g in got)
        assert all(degrees(g)[1] == 3 for g in got)

    def test_n1(self):
        (g,) = enumerate_graphs(1)
        assert g.n == 1 and g.edge_count == 0

    def test_range_guard(self):
        with pytest.raises(RangeExceeded):
            next(enumerate_graphs(11))

    def test_dedup_class_count_n5(self):
        assert sum(1 for _ in enumerate_graphs(5, dedup=True)) == 34


class TestCanonicalForms:
    def test_isomorphic_relabelings_share_key(self):
        rng = random.Random(23)
        for _ in range(40):
            n = rng.randint(1, 7)
            g = random_graph(n, rng)
            perm = list(range(n))
            rng.shuffle(perm)
            h = Graph.from_edges(n, [(perm[u], perm[v]) for u, v in g.edges()])
            assert canonical_key(g) == canonical_key(h)
            assert brute_force_isomorphic(g, h)

    def test_non_isomorphic_pairs_differ(self):
        a = cycle_graph(6)
        b = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
        assert canonical_key(a) != canonical_key(b)
        assert not brute_force_isomorphic(a, b)

    def test_dedup_soundness_n5(self):
        reps = list(enumerate_graphs(5, dedup=True))
        for g, h in itertools.combinations(reps, 2):
            assert not brute_force_isomorphic(g, h)


class TestRandomHosts:
    def test_regular_graph_degrees(self):
        rng = random.Random(1)
        for n, d in ((10, 3), (12, 3), (20, 9)):
            g = random_regular_graph(n, d, rng)
            assert degrees(g) [:2] == (d, d)

    def test_regular_graph_deterministic(self):
        a = random_regular_graph(12, 3, random.Random(5))
        b = random_regular_graph(12, 3, random.Random(5))
        assert a == b

    def test_impossible_degree_sequence(self):
        with pytest.raises(SpecError):
            random_regular_graph(5, 3, random.Random(0))


class TestBruteForce:
    def test_c5_theorem1_best(self):
        # 2^5 bipartitions: best conclusion-satisfying independent part has 2
        d = brute_force_best_decomposition(cycle_graph(5), "theorem1",
                                           {"spec": K2, "q": 4})
        assert d is not None and len(d.parts[0]) == 2

    def test_k55_best(self):
        d = brute_force_best_decomposition(complete_bipartite(5, 5), "theorem1",
                                           {"spec": K2, "q": 4})
        assert len(d.parts[0]) == 5

    def test_k5_has_no_valid_bipartition(self):
        d = brute_force_best_decomposition(complete_graph(5), "theorem1",
                                           {"spec": K2, "q": 3})
        assert d is None

    def test_lemma2_feasibility(self):
        d = brute_force_best_decomposition(complete_bipartite(5, 5), "lemma2",
                                           {"p": 2, "q": 4})
        assert d is not None

    def test_corollary1_search(self):
        g = complete_bipartite(9, 9)
        K4 = FreenessSpec.patterns_of([complete_graph(4)])
        with pytest.raises(RangeExceeded):
            brute_force_best_decomposition(g, "corollary1",
                                           {"specs": [K4, K4], "ps": [4, 4, 3]})
        small = complete_graph(4)
        d = brute_force_best_decomposition(small, "corollary1",
                                           {"specs": [K2, K2], "ps": [4, 4, 3]})
        assert d is not None

    def test_range_guards(self):
        big = Graph(17, (0,) * 17)
        with pytest.raises(RangeExceeded):
            brute_force_best_decomposition(big, "theorem1", {"spec": K2, "q": 4})
        with pytest.raises(RangeExceeded):
            brute_force_max_free_size(big, K2)

    def test_max_free_size_matches_subset_scan(self):
        rng = random.Random(3)
        from freesplit.patterns import mask_is_free
        for _ in range(25):
            g = random_graph(rng.randint(1, 8), rng)
            for spec in (K2, K3):
                slow = max(m.bit_count() for m in range(1 << g.n)
                           if mask_is_free(g.adj, m, spec))
                assert brute_force_max_free_size(g, spec) == slow


class TestHunt:
    def small_task(self, **kw):
        defaults = dict(
            claim="theorem1",
            n_values=(6,),
            filters=GraphFilters(connected=True, delta_exact=5, kd_minus_e_free=True),
            grid=(ParamPoint(p=3, q=3, spec=K3),),
        )
        defaults.update(kw)
        return HuntTask(**defaults)

    def test_summary_counts_and_sink(self):
        sink = io.StringIO()
        task = self.small_task(n_values=(6,),
                               filters=GraphFilters(connected=True, delta_exact=5,
                                                    kd_minus_e_free=True, omega_min=4))
        summary = hunt(task, out=sink)
        lines = [json.loads(line) for line in sink.getvalue().splitlines()]
        assert len(lines) == summary.cells == summary.hosts * len(task.grid)
        assert summary.engine_ok == summary.cells
        assert not summary.counterexample_candidates and not summary.engine_gaps
        for rec in lines[:5]:
            g = parse_graph(rec["graph6"], "graph6")
            assert is_connected(g) and degrees(g)[1] == 5

    def test_unfiltered_low_degree_hosts_yield_candidates(self):
        # without the near-clique-free filter the conclusion genuinely fails
        task = HuntTask(claim="theorem1", n_values=(5,),
                        filters=GraphFilters(connected=True, delta_exact=4),
                        grid=(ParamPoint(p=2, q=3, spec=K2),))
        summary = hunt(task)
        assert summary.oracle_absent > 0
        assert summary.counterexample_candidates
        k5 = serialize_graph(complete_graph(5), "graph6")
        assert any(c["graph6"] == k5 for c in summary.counterexample_candidates)

    def test_deterministic_summary_and_parallel_equivalence(self):
        task = self.small_task(
            filters=GraphFilters(connected=True, delta_exact=5,
                                 kd_minus_e_free=True, omega_min=4))
        serial = hunt(task).to_json()
        again = hunt(task).to_json()
        parallel = hunt(task, parallelism=2).to_json()
        assert serial == again == parallel

    def test_sampling_requires_seed(self):
        with pytest.raises(SpecError):
            self.small_task(sample=5)

    def test_sampling_deterministic(self):
        task = self.small_task(sample=10, seed=91,
                               filters=GraphFilters(connected=True, delta_exact=5))
        assert hunt(task).to_json() == hunt(task).to_json()

    def test_problem_claims_skip_engine(self):
        task = HuntTask(claim="problem1", n_values=(5,),
                        filters=GraphFilters(connected=True, delta_exact=4,
                                             omega_max=2),
                        grid=(ParamPoint(p=2, q=3, spec=K2, spec2=K3),))
        summary = hunt(task)
        assert summary.engine_na == summary.cells > 0

    def test_problem2_both_readings(self):
        grid = (ParamPoint(p=3, q=4, note="p+q=d+1"),
                ParamPoint(p=2, q=3, note="d=p+q+1"))
        task = HuntTask(claim="problem2", n_values=(6,),
                        filters=GraphFilters(connected=True, delta_exact=5,
                                             omega_max=3),
                        grid=grid)
        summary = hunt(task)
        assert set(summary.by_params) == {p.label() for p in grid}

    def test_range_guard(self):
        with pytest.raises(RangeExceeded):
            HuntTask(claim="theorem1", n_values=(11,), filters=GraphFilters(),
                     grid=(ParamPoint(p=2, q=4, spec=K2),))
        with pytest.raises(RangeExceeded):
            HuntTask(claim="corollary1", n_values=(12,), filters=GraphFilters(),
                     grid=(ParamPoint(ps=(4, 4, 3)),), sample=3, seed=1)
