"""Classic and generalized k-core decomposition and coreness statistics.

The classic decomposition uses bucket-ordered peeling in O(n + m); the
generalized variant peels with a pluggable node-benefit score and a
worklist, re-evaluating only neighbors of removed nodes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ContractViolationError
from .graph import Graph

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


@dataclass(frozen=True)
class CorenessVector:
    """Per-node coreness (dense index order) and its maximum."""

    k_s: np.ndarray

    @property
    def k_max(self) -> int:
        return int(self.k_s.max()) if len(self.k_s) else 0

    def __len__(self) -> int:
        return len(self.k_s)


@dataclass(frozen=True)
class CorenessCCDF:
    """Survivor counts per threshold K = 0..k_max.

    ``counts[K]`` is the number of nodes with coreness >= K; the strict
    survivor fraction P(k_s > K) is ``fractions[K + 1]``.
    """

    counts: np.ndarray
    n: int

    @property
    def k_max(self) -> int:
        return len(self.counts) - 1

    @property
    def fractions(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros_like(self.counts, dtype=float)
        return self.counts / self.n

    def count_at(self, k: int) -> int:
        """Survivors at threshold k, clamped to 0 beyond k_max."""
        if k < 0:
            k = 0
        return int(self.counts[k]) if k <= self.k_max else 0


@njit(cache=True)
def _peel_kernel(offsets, neighbors, n):  # pragma: no cover - jit-compiled
    deg = np.empty(n, dtype=np.int64)
    max_deg = 0
    for i in range(n):
        deg[i] = offsets[i + 1] - offsets[i]
        if deg[i] > max_deg:
            max_deg = deg[i]
    # counting sort of nodes by degree (Batagelj-Zaversnik layout)
    bin_start = np.zeros(max_deg + 2, dtype=np.int64)
    for i in range(n):
        bin_start[deg[i] + 1] += 1
    for d in range(1, max_deg + 2):
        bin_start[d] += bin_start[d - 1]
    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    fill = bin_start[:-1].copy()
    for i in range(n):
        pos[i] = fill[deg[i]]
        vert[pos[i]] = i
        fill[deg[i]] += 1
    cur = bin_start[:-1].copy()
    for idx in range(n):
        v = vert[idx]
        cur[deg[v]] = idx + 1
        for e in range(offsets[v], offsets[v + 1]):
            u = neighbors[e]
            du = deg[u]
            if du > deg[v]:
                # swap u to the front of its bucket, then shrink the bucket
                pw = cur[du]
                w = vert[pw]
                if u != w:
                    vert[pw] = u
                    vert[pos[u]] = w
                    pos[w] = pos[u]
                    pos[u] = pw
                cur[du] += 1
                deg[u] = du - 1
    return deg


def decompose(graph: Graph) -> CorenessVector:
    """Coreness of every node via linear-time bucket peeling."""
    if graph.n == 0:
        return CorenessVector(k_s=np.zeros(0, dtype=np.int64))
    k_s = _peel_kernel(graph.offsets, graph.neighbors, graph.n)
    return CorenessVector(k_s=np.asarray(k_s, dtype=np.int64))


class SubgraphView:
    """Read view of a graph restricted to an alive-node mask."""

    def __init__(self, graph: Graph, alive: np.ndarray):
        self.graph = graph
        self.alive = alive

    def degree(self, node: int) -> int:
        """Number of alive neighbors of ``node``."""
        return int(np.count_nonzero(self.alive[self.graph.neighbors_of(node)]))

    def neighbors_of(self, node: int) -> np.ndarray:
        nbrs = self.graph.neighbors_of(node)
        return nbrs[self.alive[nbrs]]


@dataclass(frozen=True)
class PropertyFunction:
    """Pluggable node-benefit score over the current surviving subgraph.

    ``monotone`` declares that a node's score never increases when other
    nodes are removed; peeling is only well-defined under that contract.
    """

    evaluate: Callable[[int, SubgraphView], float]
    monotone: bool = True
    name: str = "custom"


def degree_property() -> PropertyFunction:
    """Benefit equal to the surviving-neighbor count; recovers classic cores."""
    return PropertyFunction(
        evaluate=lambda node, view: view.degree(node), monotone=True, name="degree"
    )


def constant_property(value: float) -> PropertyFunction:
    return PropertyFunction(
        evaluate=lambda node, view: value, monotone=True, name=f"constant={value}"
    )


def weighted_degree_property(weights: dict) -> PropertyFunction:
    """Sum of edge weights to surviving neighbors; keys are (u, v) with u < v."""

    def evaluate(node, view):
        return sum(
            weights.get((min(node, int(v)), max(node, int(v))), 1.0)
            for v in view.neighbors_of(node)
        )

    return PropertyFunction(evaluate=evaluate, monotone=True, name="weighted_degree")


def _peel_generalized(graph: Graph, prop: PropertyFunction, k: float,
                      alive: np.ndarray) -> None:
    """Remove nodes scoring below k until fixpoint; mutates ``alive``."""
    view = SubgraphView(graph, alive)
    work = deque(np.flatnonzero(alive))
    queued = alive.copy()
    while work:
        node = work.popleft()
        queued[node] = False
        if not alive[node]:
            continue
        if prop.evaluate(node, view) < k:
            alive[node] = False
            for nbr in graph.neighbors_of(node):
                if alive[nbr] and not queued[nbr]:
                    queued[nbr] = True
                    work.append(nbr)


def _check_monotone(graph: Graph, prop: PropertyFunction, k: float,
                    alive: np.ndarray) -> None:
    view = SubgraphView(graph, alive)
    for node in np.flatnonzero(~alive):
        if prop.evaluate(int(node), view) >= k:
            raise ContractViolationError(
                f"property {prop.name!r} is not monotone: removed node {node} "
                f"scores >= {k} against the final subgraph"
            )


def decompose_generalized(graph: Graph, prop: PropertyFunction, k: float,
                          check: bool = True) -> np.ndarray:
    """Maximal subgraph where every member scores >= k; returns dense indices.

    With ``check`` enabled, removed nodes are re-scored against the final
    subgraph and a passing score raises ContractViolationError (the
    declared monotonicity was false).
    """
    if not prop.monotone:
        raise ContractViolationError(
            f"property {prop.name!r} is not declared monotone"
        )
    alive = np.ones(graph.n, dtype=bool)
    _peel_generalized(graph, prop, k, alive)
    if check and not alive.all():
        _check_monotone(graph, prop, k, alive)
    return np.flatnonzero(alive)


def generalized_coreness(graph: Graph, prop: PropertyFunction,
                         check: bool = True) -> CorenessVector:
    """Coreness under an arbitrary monotone property, by nested peeling."""
    if not prop.monotone:
        raise ContractViolationError(
            f"property {prop.name!r} is not declared monotone"
        )
    k_s = np.zeros(graph.n, dtype=np.int64)
    alive = np.ones(graph.n, dtype=bool)
    k = 1
    while alive.any():
        before = alive.copy()
        _peel_generalized(graph, prop, k, alive)
        if check and alive.sum() < before.sum():
            _check_monotone(graph, prop, k, alive)
        k_s[alive] = k
        k += 1
    return CorenessVector(k_s=k_s)


def ccdf(coreness: CorenessVector) -> CorenessCCDF:
    """Survivor counts |{i : k_s[i] >= K}| for K = 0..k_max."""
    n = len(coreness)
    if n == 0:
        return CorenessCCDF(counts=np.zeros(1, dtype=np.int64), n=0)
    hist = np.bincount(coreness.k_s)
    counts = n - np.concatenate([[0], np.cumsum(hist[:-1])])
    return CorenessCCDF(counts=counts.astype(np.int64), n=n)


def catastrophic_K(dist: CorenessCCDF, survival: float) -> int:
    """Smallest threshold K at which at most ``survival``*n nodes remain.

    Returns k_max + 1 when even the innermost core holds more than the
    survival fraction.
    """
    if not 0.0 < survival < 1.0:
        raise ValueError(f"survival must be in (0, 1), got {survival}")
    below = np.flatnonzero(dist.fractions <= survival)
    return int(below[0]) if len(below) else dist.k_max + 1


@dataclass(frozen=True)
class DegreeBinStats:
    """Order statistics of coreness within one degree bin."""

    center: float
    count: int
    mean: float | None = None
    min: int | None = None
    max: int | None = None
    q1: float | None = None
    median: float | None = None
    q3: float | None = None


def coreness_by_degree(graph: Graph, coreness: CorenessVector,
                       bins) -> list[DegreeBinStats]:
    """Coreness spread per degree bin.

    ``bins`` is either an integer bin width or an increasing sequence of
    bin edges covering the observed degree range; bins are keyed by their
    middle value.  Empty bins are emitted with count 0 and no statistics.
    """
    degrees = graph.degrees()
    max_deg = int(degrees.max()) if graph.n else 0
    if np.isscalar(bins):
        width = int(bins)
        if width <= 0:
            raise ValueError("bin width must be positive")
        edges = np.arange(0, max_deg + width + 1, width)
    else:
        edges = np.asarray(bins, dtype=float)
        if len(edges) < 2 or (np.diff(edges) <= 0).any():
            raise ValueError("bin edges must be increasing with >= 2 entries")
        if graph.n and (edges[0] > degrees.min() or edges[-1] <= max_deg):
            raise ValueError("bin edges must cover the observed degree range")
    idx = np.clip(np.searchsorted(edges, degrees, side="right") - 1, 0,
                  len(edges) - 2)
    out = []
    for b in range(len(edges) - 1):
        center = (edges[b] + edges[b + 1]) / 2
        vals = coreness.k_s[idx == b]
        if len(vals) == 0:
            out.append(DegreeBinStats(center=float(center), count=0))
            continue
        q1, med, q3 = np.percentile(vals, [25, 50, 75])
        out.append(DegreeBinStats(
            center=float(center),
            count=int(len(vals)),
            mean=float(vals.mean()),
            min=int(vals.min()),
            max=int(vals.max()),
            q1=float(q1),
            median=float(med),
            q3=float(q3),
        ))
    return out
