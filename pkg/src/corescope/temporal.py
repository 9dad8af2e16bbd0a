"""Growth and decline analysis over external-id time slices.

External ids act as an event clock (signup order).  Nodes are grouped
into fixed-width id slices; each edge is internal to a slice or connects
it to the past/future, and mean edge distances are compared against the
uniform-random-linking baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .graph import Graph
from .kcore import CorenessVector


@dataclass(frozen=True)
class SliceSpec:
    """Fixed-width slicing of the external-id axis starting at ``origin``."""

    width: int
    origin: int = 0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError(f"slice width must be positive, got {self.width}")


@dataclass(frozen=True)
class SliceStats:
    """Connectivity of one id slice to itself, the past and the future.

    Mean distances are None when the corresponding edge set is empty
    (first slice has no past, last has no future).
    """

    index: int
    start: int
    end: int  # exclusive
    node_count: int
    internal_edges: int
    past_edges: int
    future_edges: int
    internal_avg_degree: float | None
    mean_past_distance: float | None
    mean_future_distance: float | None
    baseline_past: float
    baseline_future: float


def edge_distance(id_a: int, id_b: int) -> int:
    """Event-time distance between two users: absolute id difference."""
    return abs(id_a - id_b)


def random_baseline(spec: SliceSpec, id_range: tuple[int, int],
                    slice_index: int) -> tuple[float, float]:
    """Expected past/future edge distance under uniform random linking.

    A node at the slice center, at position x into the id range, has past
    partners uniform over the ids before its slice and future partners
    uniform over the ids after it (same-slice partners are internal, not
    past/future), giving x/2 + w/4 on each side; the last slice's past
    baseline and the first slice's future baseline are both R/2.
    """
    lo, hi = id_range
    span = hi - lo
    x = min((slice_index + 0.5) * spec.width, float(span))
    return x / 2.0 + spec.width / 4.0, (span - x) / 2.0 + spec.width / 4.0


def slice_stats(graph: Graph, spec: SliceSpec) -> list[SliceStats]:
    """Per-slice node counts, edge classification and mean distances."""
    if graph.n == 0:
        raise ValueError("graph is empty")
    ext = graph.id_map
    if ext[0] < spec.origin:
        raise ValueError(
            f"slice origin {spec.origin} is above the smallest id {ext[0]}"
        )
    node_slice = (ext - spec.origin) // spec.width
    nslices = int(node_slice.max()) + 1
    node_counts = np.bincount(node_slice, minlength=nslices)

    edges = graph.edge_array()
    if len(edges):
        su = node_slice[edges[:, 0]]
        sv = node_slice[edges[:, 1]]
        dist = np.abs(ext[edges[:, 1]] - ext[edges[:, 0]])
        internal = su == sv
        e_in = np.bincount(su[internal], minlength=nslices)
        # id_map is increasing, so column 0 is always the earlier endpoint:
        # the edge is future-facing for su's slice and past-facing for sv's
        e_f = np.bincount(su[~internal], minlength=nslices)
        e_p = np.bincount(sv[~internal], minlength=nslices)
        d_f = np.bincount(su[~internal], weights=dist[~internal], minlength=nslices)
        d_p = np.bincount(sv[~internal], weights=dist[~internal], minlength=nslices)
    else:
        e_in = e_f = e_p = np.zeros(nslices, dtype=np.int64)
        d_f = d_p = np.zeros(nslices)

    id_range = (spec.origin, int(ext[-1]))
    out = []
    for t in range(nslices):
        base_p, base_f = random_baseline(spec, id_range, t)
        n_t = int(node_counts[t])
        out.append(SliceStats(
            index=t,
            start=spec.origin + t * spec.width,
            end=spec.origin + (t + 1) * spec.width,
            node_count=n_t,
            internal_edges=int(e_in[t]),
            past_edges=int(e_p[t]),
            future_edges=int(e_f[t]),
            internal_avg_degree=2 * int(e_in[t]) / n_t if n_t else None,
            mean_past_distance=float(d_p[t] / e_p[t]) if e_p[t] else None,
            mean_future_distance=float(d_f[t] / e_f[t]) if e_f[t] else None,
            baseline_past=base_p,
            baseline_future=base_f,
        ))
    return out


@dataclass(frozen=True)
class AtRiskPoint:
    """Share of one slice's nodes below the coreness threshold, with CI.

    Empty slices are emitted with fraction and bounds None.
    """

    index: int
    node_count: int
    fraction: float | None
    ci_low: float | None
    ci_high: float | None


@dataclass(frozen=True)
class AtRiskSeries:
    threshold: float
    confidence: float
    points: list[AtRiskPoint]


def wilson_interval(successes: int, total: int,
                    confidence: float = 0.99) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if total <= 0:
        raise ValueError("total must be positive")
    z = norm.ppf(0.5 + confidence / 2.0)
    p = successes / total
    denom = 1.0 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = z * np.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    return float(max(0.0, center - half)), float(min(1.0, center + half))


def at_risk_series(graph: Graph, coreness: CorenessVector, slice_width: int,
                   threshold: float | None = None, origin: int | None = None,
                   confidence: float = 0.99) -> AtRiskSeries:
    """Per-slice fraction of nodes with coreness strictly below the threshold.

    The threshold defaults to the median coreness over the whole graph;
    bounds are Wilson score intervals at the given confidence.
    """
    if graph.n == 0:
        raise ValueError("graph is empty")
    if threshold is None:
        threshold = float(np.median(coreness.k_s))
    spec = SliceSpec(width=slice_width,
                     origin=int(graph.id_map[0]) if origin is None else origin)
    if graph.id_map[0] < spec.origin:
        raise ValueError(
            f"slice origin {spec.origin} is above the smallest id {graph.id_map[0]}"
        )
    node_slice = (graph.id_map - spec.origin) // spec.width
    nslices = int(node_slice.max()) + 1
    totals = np.bincount(node_slice, minlength=nslices)
    at_risk = np.bincount(node_slice[coreness.k_s < threshold], minlength=nslices)
    points = []
    for t in range(nslices):
        if totals[t] == 0:
            points.append(AtRiskPoint(index=t, node_count=0, fraction=None,
                                      ci_low=None, ci_high=None))
            continue
        lo, hi = wilson_interval(int(at_risk[t]), int(totals[t]), confidence)
        points.append(AtRiskPoint(
            index=t,
            node_count=int(totals[t]),
            fraction=at_risk[t] / totals[t],
            ci_low=lo,
            ci_high=hi,
        ))
    return AtRiskSeries(threshold=float(threshold), confidence=confidence,
                        points=points)
