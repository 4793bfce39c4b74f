import random

import pytest

from freesplit import Graph, complete_graph


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def icosahedron_graph() -> Graph:
    edges = [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (3, 4),
             (4, 5), (5, 1), (1, 6), (2, 6), (2, 7), (3, 7), (3, 8), (4, 8),
             (4, 9), (5, 9), (5, 10), (1, 10), (6, 7), (7, 8), (8, 9), (9, 10),
             (10, 6), (6, 11), (7, 11), (8, 11), (9, 11), (10, 11)]
    return Graph.from_edges(12, edges)


def strong_product_c5_k2() -> Graph:
    """C5 boxtimes K2: max degree 5, clique number 4, no independent set
    meets all five maximum cliques."""
    edges = []
    for c in range(5):
        edges.append((2 * c, 2 * c + 1))
        for i in range(2):
            for j in range(2):
                edges.append((2 * c + i, 2 * ((c + 1) % 5) + j))
    return Graph.from_edges(10, edges)


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


@pytest.fixture
def petersen() -> Graph:
    return petersen_graph()


@pytest.fixture
def icosahedron() -> Graph:
    return icosahedron_graph()


@pytest.fixture
def k6() -> Graph:
    return complete_graph(6)
