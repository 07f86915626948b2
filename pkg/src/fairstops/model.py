"""Core data model: metrics, problem instances, travel costs and reductions.

A placement problem consists of agents who each travel between a pair of
endpoints, a set of candidate stops, a budget ``k``, and two distance
functions on a common point set: a *walking* metric over all points and a
*transit* metric over candidate stops only.  Distances are extended reals
(``math.inf`` encodes unreachable pairs).  An agent either walks directly or
walks to a boarding stop, rides to an alighting stop, and walks on to her
destination; her cost is the cheapest of these options.

The module also holds the two bridges to center-based clustering: every
placement instance induces a clustering instance over the multiset of agent
endpoints, and every clustering instance embeds into a placement instance
made of two mirrored copies at infinite separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

INF = math.inf

#: Absolute tolerance for all floating-point comparisons in this package.
TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Metric:
    """A symmetric, nonnegative extended-real distance matrix with zero diagonal.

    The triangle inequality is expected but deliberately *not* enforced at
    construction time (it is an O(p^3) check); call :meth:`violations` or
    :func:`validate_instance` to verify it on demand.
    """

    dist: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {d.shape}")
        object.__setattr__(self, "dist", _readonly(d))

    @property
    def size(self) -> int:
        return self.dist.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Metric):
            return NotImplemented
        return np.array_equal(self.dist, other.dist)

    def violations(self, name: str = "dist") -> list[str]:
        """Return a message per violated metric axiom (empty list means valid)."""
        d = self.dist
        p = self.size
        out: list[str] = []
        if np.any(np.isnan(d)):
            out.append(f"{name}: NaN entries present")
            return out
        diag = np.diagonal(d)
        for i in np.nonzero(diag != 0)[0]:
            out.append(f"{name}: nonzero diagonal at point {i}: {diag[i]}")
        asym = np.argwhere(d != d.T)
        for i, j in asym:
            if i < j:
                out.append(f"{name}: asymmetry at ({i},{j}): {d[i, j]} vs {d[j, i]}")
        if np.any(d < 0):
            for i, j in np.argwhere(d < 0):
                if i <= j:
                    out.append(f"{name}: negative distance at ({i},{j}): {d[i, j]}")
        # Triangle inequality, vacuous whenever the right side is infinite.
        for mid in range(p):
            through = d[:, [mid]] + d[[mid], :]
            bad = d > through + TOL
            for i, j in np.argwhere(bad):
                if i < j:
                    out.append(
                        f"{name}: triangle violation d({i},{j})={d[i, j]} > "
                        f"d({i},{mid})+d({mid},{j})={through[i, j]}"
                    )
        return out


@dataclass(frozen=True)
class Solution:
    """A feasible stop placement: a strictly increasing tuple of candidate indices."""

    stops: tuple[int, ...]

    def __post_init__(self):
        stops = tuple(int(s) for s in self.stops)
        if any(b <= a for a, b in zip(stops, stops[1:])):
            raise ValueError(f"stops must be strictly increasing, got {stops}")
        object.__setattr__(self, "stops", stops)

    @classmethod
    def of(cls, stops: Iterable[int]) -> "Solution":
        """Build a solution from any iterable of candidate indices."""
        return cls(tuple(sorted(set(int(s) for s in stops))))

    def __len__(self) -> int:
        return len(self.stops)

    def __iter__(self):
        return iter(self.stops)

    def __contains__(self, item) -> bool:
        return item in self.stops


def as_stops(solution: "Solution | Iterable[int]") -> tuple[int, ...]:
    """Normalize a :class:`Solution` or raw iterable into a sorted index tuple."""
    if isinstance(solution, Solution):
        return solution.stops
    return tuple(sorted(set(int(s) for s in solution)))


@dataclass(frozen=True, eq=False)
class Instance:
    """A transit stop placement problem.

    Parameters
    ----------
    endpoints : array of shape (n, 2)
        Per-agent point indices ``(a_i, b_i)`` into the walking metric.
    candidates : array of shape (m,)
        Point indices of the candidate stops.
    walk : Metric
        Walking distances over the full point set.
    transit : Metric
        Ride distances over candidate stops only (``m`` by ``m``).
    k : int
        Stop budget, ``1 <= k <= m``.
    candidate_labels : tuple of str, optional
        Display names for the candidates (used by generators and the CLI).
    """

    endpoints: np.ndarray
    candidates: np.ndarray
    walk: Metric
    transit: Metric
    k: int
    candidate_labels: tuple[str, ...] | None = None

    # Derived arrays, filled in __post_init__.
    _ep_flat: np.ndarray = field(init=False, repr=False)
    _d_ac: np.ndarray = field(init=False, repr=False)
    _d_bc: np.ndarray = field(init=False, repr=False)
    _d_ab: np.ndarray = field(init=False, repr=False)
    _null_transit: bool = field(init=False, repr=False)

    def __post_init__(self):
        ep = np.asarray(self.endpoints, dtype=int).reshape(-1, 2)
        cand = np.asarray(self.candidates, dtype=int).reshape(-1)
        object.__setattr__(self, "endpoints", _readonly(ep))
        object.__setattr__(self, "candidates", _readonly(cand))
        object.__setattr__(self, "k", int(self.k))
        if self.candidate_labels is not None:
            labels = tuple(str(s) for s in self.candidate_labels)
            if len(labels) != len(cand):
                raise ValueError("candidate_labels length must equal candidate count")
            object.__setattr__(self, "candidate_labels", labels)
        # Derived lookup tables use clipped indices so that construction never
        # raises on malformed input; validate_instance reports range errors.
        p = self.walk.size
        hi = max(p - 1, 0)
        ep_safe = np.clip(ep, 0, hi) if ep.size else ep
        cand_safe = np.clip(cand, 0, hi) if cand.size else cand
        flat = np.empty(2 * len(ep), dtype=int)
        flat[0::2] = ep_safe[:, 0] if ep.size else []
        flat[1::2] = ep_safe[:, 1] if ep.size else []
        object.__setattr__(self, "_ep_flat", _readonly(flat))
        d = self.walk.dist if p else np.zeros((1, 1))
        object.__setattr__(self, "_d_ac", _readonly(d[np.ix_(ep_safe[:, 0], cand_safe)]))
        object.__setattr__(self, "_d_bc", _readonly(d[np.ix_(ep_safe[:, 1], cand_safe)]))
        object.__setattr__(self, "_d_ab", _readonly(d[ep_safe[:, 0], ep_safe[:, 1]]))
        object.__setattr__(self, "_null_transit", bool(np.all(self.transit.dist == 0.0)))

    @property
    def n(self) -> int:
        return self.endpoints.shape[0]

    @property
    def m(self) -> int:
        return self.candidates.shape[0]

    @property
    def null_transit(self) -> bool:
        """True when every ride between candidate stops is free."""
        return self._null_transit

    @property
    def endpoint_points(self) -> np.ndarray:
        """Point indices of all 2n endpoints, laid out as a_0, b_0, a_1, b_1, ..."""
        return self._ep_flat

    def endpoint_candidate_dists(self) -> np.ndarray:
        """Walking distance from every endpoint (2n rows) to every candidate."""
        out = np.empty((2 * self.n, self.m))
        out[0::2] = self._d_ac
        out[1::2] = self._d_bc
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.k == other.k
            and np.array_equal(self.endpoints, other.endpoints)
            and np.array_equal(self.candidates, other.candidates)
            and self.walk == other.walk
            and self.transit == other.transit
            and self.candidate_labels == other.candidate_labels
        )


@dataclass(frozen=True, eq=False)
class ClusteringInstance:
    """A center-selection problem: datapoints, candidate centers, budget.

    ``datapoints`` is a multiset (repeated point indices are meaningful:
    coincident agent endpoints each count toward coalition sizes).
    """

    datapoints: np.ndarray
    centers: np.ndarray
    dist: Metric
    k: int

    _d_dc: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        dp = np.asarray(self.datapoints, dtype=int).reshape(-1)
        ce = np.asarray(self.centers, dtype=int).reshape(-1)
        object.__setattr__(self, "datapoints", _readonly(dp))
        object.__setattr__(self, "centers", _readonly(ce))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "_d_dc", _readonly(self.dist.dist[np.ix_(dp, ce)]))

    @property
    def n(self) -> int:
        return self.datapoints.shape[0]

    @property
    def m(self) -> int:
        return self.centers.shape[0]

    def point_center_dists(self) -> np.ndarray:
        """Distance from every datapoint to every candidate center."""
        return self._d_dc

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClusteringInstance):
            return NotImplemented
        return (
            self.k == other.k
            and np.array_equal(self.datapoints, other.datapoints)
            and np.array_equal(self.centers, other.centers)
            and self.dist == other.dist
        )


@dataclass(frozen=True)
class TraceEvent:
    """One step of a radius sweep: what opened and who was retired, at which radius."""

    radius: float
    opened: tuple[int, ...] = ()
    endpoints: tuple[int, ...] = ()
    agents: tuple[int, ...] = ()


@dataclass(frozen=True)
class RunTrace:
    """Ordered selection/deactivation events of one algorithm run."""

    events: tuple[TraceEvent, ...]

    def opened(self) -> tuple[int, ...]:
        """All opened candidate indices in selection order."""
        return tuple(c for ev in self.events for c in ev.opened)

    def radii(self) -> tuple[float, ...]:
        return tuple(ev.radius for ev in self.events)


# ---------------------------------------------------------------------------
# Cost evaluation
# ---------------------------------------------------------------------------


def agent_cost(instance: Instance, agent_index: int, solution) -> float:
    """Cheapest travel cost of one agent under a stop placement.

    The agent either walks directly, or walks to a boarding stop ``y1``, rides
    to an alighting stop ``y2`` (``y1 == y2`` allowed) and walks on.  An empty
    placement leaves only the walk.
    """
    n = instance.n
    if not 0 <= agent_index < n:
        raise IndexError(f"agent index {agent_index} out of range for n={n}")
    stops = as_stops(solution)
    walk = float(instance._d_ab[agent_index])
    if not stops:
        return walk
    da = instance._d_ac[agent_index, list(stops)]
    db = instance._d_bc[agent_index, list(stops)]
    if instance.null_transit:
        best = float(da.min() + db.min())
    else:
        ride = instance.transit.dist[np.ix_(stops, stops)]
        best = float((da[:, None] + ride + db[None, :]).min())
    return min(walk, best)


def solution_costs(instance: Instance, solution) -> np.ndarray:
    """Vector of :func:`agent_cost` over all agents (vectorized)."""
    stops = as_stops(solution)
    walk = np.asarray(instance._d_ab, dtype=float)
    if not stops:
        return walk.copy()
    idx = list(stops)
    da = instance._d_ac[:, idx]
    db = instance._d_bc[:, idx]
    if instance.null_transit:
        best = da.min(axis=1) + db.min(axis=1)
    else:
        ride = instance.transit.dist[np.ix_(stops, stops)]
        best = (da[:, :, None] + ride[None, :, :] + db[:, None, :]).min(axis=(1, 2))
    return np.minimum(walk, best)


def route_costs(instance: Instance, solution) -> np.ndarray:
    """Per-agent cost of the best stop route only, ignoring the direct walk.

    Infinite for every agent when the placement is empty.  This is the
    service level a placement itself provides; :func:`solution_costs` caps it
    by the walk.
    """
    stops = as_stops(solution)
    n = instance.n
    if not stops:
        return np.full(n, INF)
    idx = list(stops)
    da = instance._d_ac[:, idx]
    db = instance._d_bc[:, idx]
    if instance.null_transit:
        return da.min(axis=1) + db.min(axis=1)
    ride = instance.transit.dist[np.ix_(stops, stops)]
    return (da[:, :, None] + ride[None, :, :] + db[:, None, :]).min(axis=(1, 2))


def total_cost(instance: Instance, solution) -> float:
    """Sum of agent costs; infinite as soon as one agent is stranded."""
    return float(solution_costs(instance, solution).sum())


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_instance(instance: Instance) -> list[str]:
    """Check every structural invariant and return one message per violation.

    An empty report means the instance is valid.  This never raises; malformed
    indices are reported alongside metric violations (asymmetry, nonzero
    diagonal, triangle violations beyond ``TOL``).
    """
    out: list[str] = []
    p = instance.walk.size
    n, m, k = instance.n, instance.m, instance.k
    raw_ep = np.asarray(instance.endpoints)
    if not 1 <= k <= m:
        out.append(f"budget k={k} outside [1, m={m}]")
    if raw_ep.size and (raw_ep.min() < 0 or raw_ep.max() >= p):
        out.append(f"endpoint index out of range [0, {p})")
    if m and (instance.candidates.min() < 0 or instance.candidates.max() >= p):
        out.append(f"candidate index out of range [0, {p})")
    if len(set(instance.candidates.tolist())) != m:
        out.append("duplicate candidate point indices")
    if instance.transit.size != m:
        out.append(f"transit metric size {instance.transit.size} != m={m}")
    out.extend(instance.walk.violations("walk"))
    out.extend(instance.transit.violations("transit"))
    return out


def require_valid_structure(instance: Instance) -> None:
    """Cheap structural guard used by the algorithms (no O(p^3) metric check)."""
    p = instance.walk.size
    if not 1 <= instance.k <= instance.m:
        raise ValueError(f"invalid budget k={instance.k} for m={instance.m}")
    raw_ep = np.asarray(instance.endpoints)
    if raw_ep.size and (raw_ep.min() < 0 or raw_ep.max() >= p):
        raise ValueError("endpoint index out of range")
    if instance.m and (instance.candidates.min() < 0 or instance.candidates.max() >= p):
        raise ValueError("candidate index out of range")
    if instance.transit.size != instance.m:
        raise ValueError("transit metric size mismatch")


# ---------------------------------------------------------------------------
# Reductions to and from clustering
# ---------------------------------------------------------------------------


def induce_clustering(instance: Instance) -> ClusteringInstance:
    """Reinterpret all 2n agent endpoints as datapoints; keep centers and budget."""
    return ClusteringInstance(
        datapoints=instance.endpoint_points,
        centers=instance.candidates,
        dist=instance.walk,
        k=instance.k,
    )


def clustering_to_trsp(clustering: ClusteringInstance) -> Instance:
    """Embed a clustering instance into a placement instance of two mirrored copies.

    Each datapoint becomes one agent traveling between its two copies, which
    sit at infinite walking distance from each other; rides are free and the
    budget doubles.  Selecting center copies on both sides is then the only
    way to serve an agent.
    """
    p = clustering.dist.size
    base = clustering.dist.dist
    walk = np.full((2 * p, 2 * p), INF)
    walk[:p, :p] = base
    walk[p:, p:] = base
    np.fill_diagonal(walk, 0.0)
    endpoints = np.stack(
        [clustering.datapoints, clustering.datapoints + p], axis=1
    )
    candidates = np.concatenate([clustering.centers, clustering.centers + p])
    m2 = len(candidates)
    return Instance(
        endpoints=endpoints,
        candidates=candidates,
        walk=Metric(walk),
        transit=Metric(np.zeros((m2, m2))),
        k=2 * clustering.k,
    )
