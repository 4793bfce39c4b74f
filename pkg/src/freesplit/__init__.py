"""Vertex decompositions with forbidden-subgraph-free parts.

Exact maximum-free-subgraph search, lexicographic-potential swap
refinement, degree/degeneracy splits, independent post-hoc verification,
and an exhaustive small-graph oracle with a counterexample hunter.
"""

from .errors import (
    BudgetExhausted,
    ConfigError,
    EmptyGraph,
    FallbackExceeded,
    FreesplitError,
    LoopOrDuplicateEdge,
    MalformedInput,
    NotOptimalSeed,
    PreconditionViolated,
    RangeExceeded,
    RepairLoopExceeded,
    SpecError,
    Stalled,
    UnsupportedCase,
)
from .graphs import (
    Graph,
    VertexSet,
    complete_bipartite,
    complete_graph,
    connected_components,
    cycle_graph,
    degrees,
    disjoint_union,
    empty_graph,
    graph_hash,
    induced_subgraph,
    is_connected,
    join,
    parse_graph,
    path_graph,
    serialize_graph,
)
from .patterns import (
    FreenessSpec,
    NearCliqueWitness,
    clique_number,
    contains_subgraph,
    count_near_cliques,
    degeneracy,
    find_kd_minus_e,
    is_free,
    list_k_cliques,
    spec_from_string,
    t_core,
)
from .maxfree import MaxFreeResult, greedy_free_set, max_free_set
from .decomposition import Decomposition, decomposition_record
from .decomposer import (
    Potential,
    SwapStep,
    TheoremCounterexample,
    TwoPartResult,
    clique_split,
    decompose_k,
    decompose_two,
    degenerate_max_split,
    degenerate_split,
    hitting_independent_set,
    refine,
)
from .verifier import (
    Report,
    verify_clique_split,
    verify_degenerate,
    verify_k,
    verify_two,
)
from .oracle import (
    GraphFilters,
    HuntTask,
    ParamPoint,
    brute_force_best_decomposition,
    brute_force_max_free_size,
    enumerate_graphs,
    hunt,
    random_regular_graph,
)

__all__ = [name for name in dir() if not name.startswith("_")]
