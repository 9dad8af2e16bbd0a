"""Compact immutable undirected graph storage.

Raw edge lists are canonicalized on ingestion: every edge is symmetrized,
self-loops are dropped and duplicates collapsed.  The result is a CSR-style
adjacency structure over dense node indices 0..n-1, with a sorted mapping
back to the external ids found in the input.
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import (
    EdgeListParseError,
    BinaryFormatError,
    TruncatedFileError,
    VersionMismatchError,
)

MAGIC = b"CLG1"
_HEADER = struct.Struct("<4sB3xQQ")  # magic, neighbor byte width, n, m

PAIR_FORMAT = "pair"
ADJACENCY_FORMAT = "adj"


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph in CSR form.

    ``neighbors[offsets[i]:offsets[i+1]]`` holds the sorted dense indices
    adjacent to node ``i``; ``id_map[i]`` is the external id of node ``i``
    and is strictly increasing.  Instances are immutable and safe to share
    across threads.
    """

    offsets: np.ndarray
    neighbors: np.ndarray
    id_map: np.ndarray

    @property
    def n(self) -> int:
        return len(self.id_map)

    @property
    def m(self) -> int:
        return len(self.neighbors) // 2

    def degree(self, node: int) -> int:
        if not 0 <= node < self.n:
            raise IndexError(f"node {node} out of range [0, {self.n})")
        return int(self.offsets[node + 1] - self.offsets[node])

    def degrees(self) -> np.ndarray:
        """Degree of every node, as an int64 array of length n."""
        return np.diff(self.offsets)

    def neighbors_of(self, node: int) -> np.ndarray:
        if not 0 <= node < self.n:
            raise IndexError(f"node {node} out of range [0, {self.n})")
        return self.neighbors[self.offsets[node]:self.offsets[node + 1]]

    def dense_index(self, external_id: int) -> int:
        """Map an external id back to its dense index."""
        i = int(np.searchsorted(self.id_map, external_id))
        if i >= self.n or self.id_map[i] != external_id:
            raise KeyError(f"external id {external_id} not in graph")
        return i

    def edge_array(self) -> np.ndarray:
        """All edges as an (m, 2) array of dense index pairs with u < v."""
        heads = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        mask = heads < self.neighbors
        return np.column_stack([heads[mask], self.neighbors[mask]])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.neighbors, other.neighbors)
            and np.array_equal(self.id_map, other.id_map)
        )


def _build(sources: np.ndarray, targets: np.ndarray, extra_ids: np.ndarray) -> Graph:
    """Canonicalize raw directed records into a Graph.

    ``extra_ids`` carries ids that appeared without edges (empty adjacency
    rows); they become isolated nodes.
    """
    ids = np.unique(np.concatenate([sources, targets, extra_ids]))
    n = len(ids)
    u = np.searchsorted(ids, sources)
    v = np.searchsorted(ids, targets)
    keep = u != v  # drop self-loops
    lo = np.minimum(u, v)[keep]
    hi = np.maximum(u, v)[keep]
    # unordered pair key; n^2 must fit in int64, which holds for any
    # graph this structure can address anyway
    key = np.unique(lo * np.int64(n) + hi)
    lo, hi = key // n, key % n
    heads = np.concatenate([lo, hi])
    tails = np.concatenate([hi, lo])
    order = np.lexsort((tails, heads))
    counts = np.bincount(heads, minlength=n)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return Graph(offsets=offsets, neighbors=tails[order].astype(np.int64), id_map=ids)


def from_edges(edges, extra_ids=()) -> Graph:
    """Build a canonical Graph from an iterable of (source, target) id pairs."""
    if not isinstance(edges, np.ndarray):
        edges = list(edges)
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return _build(arr[:, 0], arr[:, 1], np.asarray(list(extra_ids), dtype=np.int64))


def _parse_pair_lines(lines):
    sources, targets = [], []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise EdgeListParseError(line_no, stripped, "expected two ids")
        for part in parts:
            if not part.isdigit():
                raise EdgeListParseError(line_no, part, "not a non-negative integer")
        sources.append(int(parts[0]))
        targets.append(int(parts[1]))
    return sources, targets, []


def _parse_adjacency_lines(lines):
    sources, targets, isolated = [], [], []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        head, sep, rest = stripped.partition(":")
        if not sep:
            raise EdgeListParseError(line_no, stripped, "expected 'id: a,b,c'")
        head = head.strip()
        if not head.isdigit():
            raise EdgeListParseError(line_no, head, "not a non-negative integer")
        node = int(head)
        rest = rest.strip()
        if not rest:
            isolated.append(node)
            continue
        for token in rest.split(","):
            token = token.strip()
            if not token.isdigit():
                raise EdgeListParseError(line_no, token, "not a non-negative integer")
            sources.append(node)
            targets.append(int(token))
    return sources, targets, isolated


def ingest_edge_list(path, format: str = PAIR_FORMAT) -> Graph:
    """Read an edge list from ``path`` and return the canonical Graph.

    ``format`` is ``"pair"`` (two whitespace-separated ids per line,
    ``#`` comments skipped) or ``"adj"`` (``"id: a,b,c"`` adjacency rows,
    empty neighbor lists allowed).  Symmetrization, dedup and self-loop
    removal are applied regardless of format.
    """
    if format == PAIR_FORMAT:
        parse = _parse_pair_lines
    elif format == ADJACENCY_FORMAT:
        parse = _parse_adjacency_lines
    else:
        raise ValueError(f"unknown edge list format: {format!r}")
    with open(path, "r", encoding="utf-8") as fh:
        sources, targets, isolated = parse(fh)
    return _build(
        np.asarray(sources, dtype=np.int64),
        np.asarray(targets, dtype=np.int64),
        np.asarray(isolated, dtype=np.int64),
    )


def degree_histogram(graph: Graph) -> dict[int, int]:
    """Map degree -> node count; counts sum to n."""
    return dict(Counter(int(d) for d in graph.degrees()))


def save_binary(graph: Graph, path) -> None:
    """Write the versioned little-endian binary cache for ``graph``."""
    width = 4 if graph.n <= np.iinfo(np.uint32).max else 8
    neighbor_dtype = "<u4" if width == 4 else "<u8"
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, width, graph.n, graph.m))
        fh.write(graph.offsets.astype("<u8").tobytes())
        fh.write(graph.neighbors.astype(neighbor_dtype).tobytes())
        fh.write(graph.id_map.astype("<u8").tobytes())


def _read_exact(fh, nbytes: int, section: str) -> bytes:
    data = fh.read(nbytes)
    if len(data) != nbytes:
        raise TruncatedFileError(
            f"truncated graph cache: {section} needs {nbytes} bytes, got {len(data)}"
        )
    return data


def load_binary(path) -> Graph:
    """Read a binary cache written by :func:`save_binary`."""
    with open(path, "rb") as fh:
        header = _read_exact(fh, _HEADER.size, "header")
        magic, width, n, m = _HEADER.unpack(header)
        if magic[:3] != MAGIC[:3]:
            raise BinaryFormatError(f"not a graph cache (magic {magic!r})")
        if magic != MAGIC:
            raise VersionMismatchError(
                f"unsupported graph cache version {magic!r}, expected {MAGIC!r}"
            )
        if width not in (4, 8):
            raise BinaryFormatError(f"invalid neighbor width {width}")
        neighbor_dtype = "<u4" if width == 4 else "<u8"
        offsets = np.frombuffer(
            _read_exact(fh, 8 * (n + 1), "offsets"), dtype="<u8"
        ).astype(np.int64)
        neighbors = np.frombuffer(
            _read_exact(fh, width * 2 * m, "neighbors"), dtype=neighbor_dtype
        ).astype(np.int64)
        id_map = np.frombuffer(_read_exact(fh, 8 * n, "id_map"), dtype="<u8").astype(
            np.int64
        )
    return Graph(offsets=offsets, neighbors=neighbors, id_map=id_map)
