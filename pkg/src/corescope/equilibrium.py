"""Cost/benefit participation model and departure-cascade simulation.

Each user pays a constant per-period cost c and gains benefit b per
remaining friend.  The stable network under (c, b) is the K-core with
K = floor(c/b) + 1: everyone inside keeps more than c/b friends, and the
cascade of departures stops exactly there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .kcore import CorenessCCDF, CorenessVector


@dataclass(frozen=True)
class Environment:
    """Participation cost c and per-friend benefit b, both positive integers."""

    c: int
    b: int

    def __post_init__(self):
        if self.c <= 0 or self.b <= 0:
            raise ValueError(f"cost and benefit must be positive, got c={self.c} b={self.b}")

    @property
    def threshold(self) -> int:
        """Survival coreness K = floor(c/b) + 1."""
        return self.c // self.b + 1


@dataclass(frozen=True)
class EquilibriumResult:
    """Stable member set under an environment, with per-member utilities."""

    K: int
    member_set: np.ndarray  # dense indices, sorted
    utilities: np.ndarray  # aligned with member_set; b*deg_in - c

    @property
    def size(self) -> int:
        return len(self.member_set)


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of re-checking an equilibrium against unilateral deviations."""

    passed: bool
    member_violations: list[int] = field(default_factory=list)
    outsider_violations: list[int] = field(default_factory=list)


def _internal_degrees(graph: Graph, members: np.ndarray) -> np.ndarray:
    """Neighbor count inside ``members`` for every node of the graph."""
    inside = np.zeros(graph.n, dtype=bool)
    inside[members] = True
    counts = np.zeros(graph.n, dtype=np.int64)
    for i in range(graph.n):
        counts[i] = np.count_nonzero(inside[graph.neighbors_of(i)])
    return counts


def equilibrium_network(graph: Graph, coreness: CorenessVector,
                        env: Environment) -> EquilibriumResult:
    """Stable network under ``env``: the K-core with K = floor(c/b) + 1."""
    K = env.threshold
    members = np.flatnonzero(coreness.k_s >= K)
    deg_in = _internal_degrees(graph, members)[members]
    return EquilibriumResult(K=K, member_set=members,
                             utilities=env.b * deg_in - env.c)


def verify_equilibrium(graph: Graph, result: EquilibriumResult,
                       env: Environment) -> StabilityReport:
    """Check that nobody gains by unilaterally leaving or joining.

    A member must keep strictly positive utility; an outsider's benefit
    from its member friends must not exceed the cost.
    """
    deg_in = _internal_degrees(graph, result.member_set)
    inside = np.zeros(graph.n, dtype=bool)
    inside[result.member_set] = True
    member_bad = [int(i) for i in result.member_set
                  if env.b * deg_in[i] - env.c <= 0]
    outsider_bad = [int(j) for j in np.flatnonzero(~inside)
                    if env.b * deg_in[j] > env.c]
    return StabilityReport(
        passed=not member_bad and not outsider_bad,
        member_violations=member_bad,
        outsider_violations=outsider_bad,
    )


@dataclass(frozen=True)
class UnravelSchedule:
    """Stepwise rising survival threshold K(t) = K0 + floor(rate*(t - t0))."""

    k0: int
    rate: float
    t0: float = 0.0

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError(f"rate must be positive, got {self.rate}")

    def threshold_at(self, t: float) -> int:
        return self.k0 + int(math.floor(self.rate * (t - self.t0)))


@dataclass(frozen=True)
class UnravelPoint:
    t: float
    K: int
    remaining: int
    fraction: float


def unravel(dist: CorenessCCDF, schedule: UnravelSchedule, horizon: float,
            step: float) -> list[UnravelPoint]:
    """Remaining population while the threshold rises; clamps to 0 past k_max."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if step <= 0:
        raise ValueError("step must be positive")
    total = dist.count_at(0)
    points = []
    nsteps = int(math.floor(horizon / step + 1e-9))
    for i in range(nsteps + 1):
        t = schedule.t0 + i * step
        K = schedule.threshold_at(t)
        remaining = dist.count_at(K)
        points.append(UnravelPoint(
            t=t, K=K, remaining=remaining,
            fraction=remaining / total if total else 0.0,
        ))
    return points


def calibrate_schedule(dist: CorenessCCDF, ref_a: tuple[float, int],
                       ref_b: tuple[float, int]) -> UnravelSchedule:
    """Schedule through two (time, threshold) reference points."""
    (t_a, k_a), (t_b, k_b) = ref_a, ref_b
    if t_b <= t_a:
        raise ValueError(f"reference times must increase, got {t_a} then {t_b}")
    if k_b <= k_a:
        raise ValueError(f"thresholds must increase, got {k_a} then {k_b}")
    return UnravelSchedule(k0=k_a, rate=(k_b - k_a) / (t_b - t_a), t0=t_a)


def fit_quality(predicted, observed, align_tol: float | None = None) -> float:
    """Coefficient of determination between two (t, value) series.

    Observed points are matched to the nearest predicted timestamp within
    ``align_tol`` (default: half the predicted step).  R^2 = 1 - SS_res/SS_tot.
    """
    pred = sorted((float(t), float(v)) for t, v in predicted)
    obs = sorted((float(t), float(v)) for t, v in observed)
    if len(pred) < 2 and align_tol is None:
        raise ValueError("predicted series too short to infer alignment tolerance")
    if align_tol is None:
        steps = np.diff([t for t, _ in pred])
        align_tol = float(np.min(steps)) / 2
    pred_t = np.array([t for t, _ in pred])
    pred_v = np.array([v for _, v in pred])
    pairs = []
    for t, v in obs:
        i = int(np.argmin(np.abs(pred_t - t)))
        if abs(pred_t[i] - t) <= align_tol + 1e-12:
            pairs.append((v, pred_v[i]))
    if len(pairs) < 2:
        raise ValueError(f"only {len(pairs)} aligned points; need at least 2")
    y = np.array([a for a, _ in pairs])
    yhat = np.array([b for _, b in pairs])
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0:
        raise ValueError("observed series has zero variance")
    ss_res = float(((y - yhat) ** 2).sum())
    return 1.0 - ss_res / ss_tot
