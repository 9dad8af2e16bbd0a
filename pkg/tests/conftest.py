import numpy as np
import pytest

from corescope.graph import Graph, from_edges


def er_edges(n: int, p: float, seed: int) -> list[tuple[int, int]]:
    """Erdos-Renyi edge list over ids 0..n-1."""
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    mask = rng.random(len(iu[0])) < p
    return list(zip(iu[0][mask].tolist(), iu[1][mask].tolist()))


def er_graph(n: int, p: float, seed: int) -> Graph:
    return from_edges(er_edges(n, p, seed), extra_ids=range(n))


def planted_core_graph(core_size: int = 20, fringe: int = 400,
                       seed: int = 0) -> Graph:
    """Clique of ``core_size`` nodes plus low-degree fringe nodes, each
    attached to two random core nodes."""
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(core_size) for j in range(i + 1, core_size)]
    for f in range(fringe):
        a, b = rng.choice(core_size, size=2, replace=False)
        edges.append((core_size + f, int(a)))
        edges.append((core_size + f, int(b)))
    return from_edges(edges)


def brute_force_coreness(graph: Graph) -> np.ndarray:
    """Independent oracle: for each k, repeatedly delete nodes with current
    degree < k; a node's coreness is the largest k it survives."""
    n = graph.n
    k_s = np.zeros(n, dtype=np.int64)
    max_deg = int(graph.degrees().max()) if n else 0
    for k in range(1, max_deg + 1):
        alive = set(range(n))
        changed = True
        while changed:
            changed = False
            for v in list(alive):
                deg = sum(1 for u in graph.neighbors_of(v) if int(u) in alive)
                if deg < k:
                    alive.discard(v)
                    changed = True
        if not alive:
            break
        for v in alive:
            k_s[v] = k
    return k_s


def kcore_members_oracle(graph: Graph, k: int) -> set[int]:
    """Repeated pruning at a single threshold k."""
    alive = set(range(graph.n))
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            deg = sum(1 for u in graph.neighbors_of(v) if int(u) in alive)
            if deg < k:
                alive.discard(v)
                changed = True
    return alive


@pytest.fixture
def k4_with_pendant_path() -> Graph:
    """K4 on nodes 0..3 with a pendant path 3-4-5."""
    return from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
                       (3, 4), (4, 5)])
