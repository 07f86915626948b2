"""Stop-selection algorithms, all event-driven and deterministic.

Every sweep-based algorithm here simulates a "smoothly growing radius" by
jumping between the finitely many radii at which something can change (a
ball captures a new endpoint, a pair's cost reaches an agent).  Between two
consecutive trigger radii nothing happens, so the discretization is exact.

Tie-breaking is fixed throughout: candidates are examined in ascending index
order, unordered candidate pairs in lexicographic order, and eligibility is
re-evaluated after every opening because deactivations can disqualify later
candidates at the same radius.  Identical inputs therefore always produce
identical solutions and traces.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import (
    INF,
    ClusteringInstance,
    Instance,
    Metric,
    RunTrace,
    Solution,
    TraceEvent,
    as_stops,
    require_valid_structure,
    route_costs,
    solution_costs,
)


class EnumerationGuardError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed its size guard."""


def coverage_threshold(n: int, k: int) -> int:
    """Number of active agents-or-endpoints a ball must capture to open: ceil(2n/k)."""
    return -(-2 * n // k)


# ---------------------------------------------------------------------------
# Worst-case fairness factors of the algorithms (used by tests and the CLI)
# ---------------------------------------------------------------------------

GC_JR_FACTOR = 2.0 + math.sqrt(5.0)
GC_CORE_ALPHA = 2
GC_CORE_BETA = 1.0 + math.sqrt(2.0)
ECA_JR_FACTOR = 1.0 + math.sqrt(2.0)


def hybrid_jr_factor(lam: float) -> float:
    """JR approximation factor of the hybrid sweep at mixing weight ``lam``."""
    return (lam + 3.0 + math.sqrt(lam * lam + 10.0 * lam + 9.0)) / 2.0


def hybrid_core_beta(lam: float) -> float:
    """Cost factor of the hybrid sweep's (2, beta)-core guarantee, ``lam > 0``."""
    if lam <= 0:
        raise ValueError("core factor is defined for lam > 0 only")
    return (math.sqrt(lam * lam + 6.0 * lam + 1.0) + lam + 1.0) / (2.0 * lam)


# ---------------------------------------------------------------------------
# Distance-radius sweep over single stops
# ---------------------------------------------------------------------------


def gc_trsp(instance: Instance) -> tuple[Solution, RunTrace]:
    """Greedy capture over the agents' endpoints.

    Grows one radius ``r``; at each trigger, endpoints inside an already-open
    ball are absorbed first, then every candidate whose ball holds at least
    ``ceil(2n/k)`` active endpoints is opened.  Equivalent, event for event,
    to :func:`greedy_capture` on the induced clustering instance.
    """
    require_valid_structure(instance)
    n, m, k = instance.n, instance.m, instance.k
    thr = coverage_threshold(n, k)
    d = instance.endpoint_candidate_dists()
    active = set(range(2 * n))
    open_order: list[int] = []
    is_open = [False] * m
    events: list[TraceEvent] = []
    radii = np.unique(d[np.isfinite(d)]) if d.size else np.empty(0)
    for r in radii.tolist():
        if not active:
            break
        if open_order:
            caught = sorted(e for e in active if min(d[e, c] for c in open_order) <= r)
            if caught:
                active.difference_update(caught)
                events.append(TraceEvent(radius=r, endpoints=tuple(caught)))
        progress = True
        while progress and active:
            progress = False
            for c in range(m):
                if is_open[c]:
                    continue
                ball = sorted(e for e in active if d[e, c] <= r)
                if len(ball) >= thr and thr > 0:
                    is_open[c] = True
                    open_order.append(c)
                    active.difference_update(ball)
                    events.append(TraceEvent(radius=r, opened=(c,), endpoints=tuple(ball)))
                    progress = True
    if active:
        events.append(TraceEvent(radius=INF, endpoints=tuple(sorted(active))))
    return Solution.of(open_order), RunTrace(tuple(events))


def greedy_capture(clustering: ClusteringInstance) -> tuple[tuple[int, ...], RunTrace]:
    """Greedy capture on a clustering instance (independent twin of :func:`gc_trsp`).

    Written as a trigger-queue simulation rather than a pass over sorted radii
    so the two implementations cross-check each other.  Returns the selected
    center indices in opening order and the trace over datapoint ids.
    """
    n, m, kk = clustering.n, clustering.m, clustering.k
    if not 1 <= kk <= m:
        raise ValueError(f"invalid budget k={kk} for m={m}")
    thr = -(-n // kk)
    d = clustering.point_center_dists()
    alive = np.ones(n, dtype=bool)
    chosen: list[int] = []
    events: list[TraceEvent] = []
    r = 0.0
    while alive.any():
        moved = True
        while moved and alive.any():
            moved = False
            if chosen:
                covered = alive & (d[:, chosen].min(axis=1) <= r)
                if covered.any():
                    events.append(
                        TraceEvent(radius=r, endpoints=tuple(np.nonzero(covered)[0].tolist()))
                    )
                    alive &= ~covered
                    moved = True
            for c in range(m):
                if c in chosen:
                    continue
                ball = alive & (d[:, c] <= r)
                if int(ball.sum()) >= thr:
                    chosen.append(c)
                    events.append(
                        TraceEvent(radius=r, opened=(c,), endpoints=tuple(np.nonzero(ball)[0].tolist()))
                    )
                    alive &= ~ball
                    moved = True
                    break
        if not alive.any():
            break
        triggers: list[float] = []
        live_rows = d[alive]
        if chosen:
            triggers.append(float(live_rows[:, chosen].min()))
        n_alive = int(alive.sum())
        if n_alive >= thr:
            for c in range(m):
                if c in chosen:
                    continue
                col = np.sort(live_rows[:, c])
                triggers.append(float(col[thr - 1]))
        nxt = min((t for t in triggers if t > r and math.isfinite(t)), default=INF)
        if nxt == INF:
            events.append(TraceEvent(radius=INF, endpoints=tuple(np.nonzero(alive)[0].tolist())))
            break
        r = nxt
    return tuple(chosen), RunTrace(tuple(events))


# ---------------------------------------------------------------------------
# Cost-radius sweep over stop pairs
# ---------------------------------------------------------------------------


def eca(instance: Instance) -> tuple[Solution, RunTrace]:
    """Expanding-cost selection over unordered candidate pairs.

    Grows a cost radius ``r`` in strictly alternating phases per trigger: an
    agent retires as soon as her cost under the whole current selection drops
    to ``r`` (mixed routes across all open stops count); then a pair of stops
    opens as soon as at least ``ceil(2n/k)`` still-active agents would each
    pay at most ``r`` *on that pair's own routes*, and those agents retire
    with it.  Pricing an opening on its own pair keeps simultaneous openings
    independent: a cross pair cheapened only by mixed routes through stops
    opened a moment earlier cannot jump the queue and eat the coalition that
    a later pair was about to serve.  Correct under arbitrary transit
    metrics.
    """
    require_valid_structure(instance)
    n, m, k = instance.n, instance.m, instance.k
    thr = coverage_threshold(n, k)
    pairs = list(itertools.combinations(range(m), 2))
    pair_costs = {pair: solution_costs(instance, pair) for pair in pairs}
    active = set(range(n))
    chosen: list[int] = []
    chosen_set: set[int] = set()
    events: list[TraceEvent] = []
    r = 0.0
    while active:
        costs = solution_costs(instance, chosen)
        drop = sorted(i for i in active if costs[i] <= r)
        if drop:
            active.difference_update(drop)
            events.append(TraceEvent(radius=r, agents=tuple(drop)))
        opened_any = True
        while opened_any and active:
            opened_any = False
            for pair in pairs:
                extra = tuple(sorted(c for c in pair if c not in chosen_set))
                if not extra or len(chosen) + len(extra) > k:
                    continue
                covered = sorted(i for i in active if pair_costs[pair][i] <= r)
                if len(covered) >= thr and thr > 0:
                    chosen.extend(extra)
                    chosen_set.update(extra)
                    active.difference_update(covered)
                    events.append(TraceEvent(radius=r, opened=extra, agents=tuple(covered)))
                    opened_any = True
                    break
        if not active:
            break
        costs = solution_costs(instance, chosen)
        triggers = [float(costs[i]) for i in active if math.isfinite(costs[i])]
        if len(active) >= thr > 0:
            act = sorted(active)
            for pair in pairs:
                extra = [c for c in pair if c not in chosen_set]
                if not extra or len(chosen) + len(extra) > k:
                    continue
                tc = np.sort(pair_costs[pair][act])
                t = float(tc[thr - 1])
                if math.isfinite(t):
                    triggers.append(t)
        if not triggers:
            events.append(TraceEvent(radius=INF, agents=tuple(sorted(active))))
            break
        # A retirement trigger can sit at or below r after openings; revisit.
        r = max(r, min(triggers))
    return Solution.of(chosen), RunTrace(tuple(events))


# ---------------------------------------------------------------------------
# Hybrid sweep: single-stop balls and pair cost balls under one radius
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HybridParams:
    """Mixing weight between the distance sweep and the cost sweep.

    ``lam`` is the growth rate of the single-stop distance radius relative to
    the pair cost radius: 1 recovers greedy-capture behaviour, values near 0
    favour the pair side (at exactly 0 the distance side only ever captures
    endpoints sitting exactly on a stop).
    """

    lam: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lam must lie in [0, 1], got {self.lam}")


def _bump_until(value: float, lam: float) -> float:
    # Smallest r with lam*r >= value under float rounding.
    r = value / lam
    while lam * r < value:
        r = math.nextafter(r, INF)
    return r


def hybrid(instance: Instance, params: HybridParams | float) -> tuple[Solution, RunTrace]:
    """One sweep that interleaves pair openings and single-stop openings.

    Under radius ``r``, in fixed phase order per trigger radius: (1) whole
    agents with both endpoints still active retire when the selection serves
    them *through stops* at cost at most ``r`` and, after them, lone
    endpoints within ``lam * r`` of a selected stop retire; (2) the pair loop
    opens, in lexicographic order, every pair whose own routes serve at least
    ``ceil(2n/k)`` fully-active agents within ``r``; (3) endpoints covered by
    the grown selection retire, then the single-stop loop opens, in index
    order, every candidate whose ball of radius ``lam * r`` holds at least
    ``ceil(2n/k)`` active endpoints.  The pair loop never counts agents with
    a retired endpoint.

    Retirement deliberately ignores the direct-walk option (unlike
    :func:`eca`): an agent retired for a cheap walk could sit arbitrarily far
    from every selected stop, which would void the sweep's distance guarantee
    on the induced clustering and with it the core guarantee.  Costs reported
    for the returned placement still include walking.
    """
    if not isinstance(params, HybridParams):
        params = HybridParams(float(params))
    lam = params.lam
    require_valid_structure(instance)
    n, m, k = instance.n, instance.m, instance.k
    thr = coverage_threshold(n, k)
    pairs = list(itertools.combinations(range(m), 2))
    pair_costs = {pair: route_costs(instance, pair) for pair in pairs}
    d = instance.endpoint_candidate_dists()
    ep_active = [True] * (2 * n)
    chosen: list[int] = []
    chosen_set: set[int] = set()
    events: list[TraceEvent] = []
    r = 0.0

    def fully_active(i: int) -> bool:
        return ep_active[2 * i] and ep_active[2 * i + 1]

    def dist_to_sel(e: int) -> float:
        if not chosen:
            return INF
        return min(d[e, c] for c in chosen)

    def within_gc(dist: float, radius: float) -> bool:
        return dist <= lam * radius if lam > 0.0 else dist <= 0.0

    def retire_endpoints(radius: float) -> None:
        gone = sorted(
            e for e in range(2 * n) if ep_active[e] and within_gc(dist_to_sel(e), radius)
        )
        if gone:
            for e in gone:
                ep_active[e] = False
            events.append(TraceEvent(radius=radius, endpoints=tuple(gone)))

    while any(ep_active):
        costs = route_costs(instance, chosen)
        gone_agents = sorted(i for i in range(n) if fully_active(i) and costs[i] <= r)
        if gone_agents:
            for i in gone_agents:
                ep_active[2 * i] = ep_active[2 * i + 1] = False
            events.append(TraceEvent(radius=r, agents=tuple(gone_agents)))
        retire_endpoints(r)
        opened_any = True
        while opened_any:
            opened_any = False
            for pair in pairs:
                extra = tuple(sorted(c for c in pair if c not in chosen_set))
                if not extra or len(chosen) + len(extra) > k:
                    continue
                covered = sorted(
                    i for i in range(n) if fully_active(i) and pair_costs[pair][i] <= r
                )
                if len(covered) >= thr and thr > 0:
                    chosen.extend(extra)
                    chosen_set.update(extra)
                    for i in covered:
                        ep_active[2 * i] = ep_active[2 * i + 1] = False
                    events.append(TraceEvent(radius=r, opened=extra, agents=tuple(covered)))
                    opened_any = True
                    break
        # Endpoints now covered by pair-opened stops must not pad the balls
        # of unrelated single candidates below.
        retire_endpoints(r)
        opened_any = True
        while opened_any:
            opened_any = False
            for c in range(m):
                if c in chosen_set or len(chosen) + 1 > k:
                    continue
                ball = sorted(e for e in range(2 * n) if ep_active[e] and within_gc(d[e, c], r))
                if len(ball) >= thr and thr > 0:
                    chosen.append(c)
                    chosen_set.add(c)
                    for e in ball:
                        ep_active[e] = False
                    events.append(TraceEvent(radius=r, opened=(c,), endpoints=tuple(ball)))
                    opened_any = True
                    break
        if not any(ep_active):
            break
        costs = route_costs(instance, chosen)
        triggers: list[float] = []
        for i in range(n):
            if fully_active(i) and math.isfinite(costs[i]):
                triggers.append(float(costs[i]))
        if lam > 0.0:
            for e in range(2 * n):
                if ep_active[e]:
                    de = dist_to_sel(e)
                    if math.isfinite(de):
                        triggers.append(_bump_until(de, lam))
        live = [i for i in range(n) if fully_active(i)]
        if len(live) >= thr > 0:
            for pair in pairs:
                extra = [c for c in pair if c not in chosen_set]
                if not extra or len(chosen) + len(extra) > k:
                    continue
                tc = np.sort(pair_costs[pair][live])
                t = float(tc[thr - 1])
                if math.isfinite(t):
                    triggers.append(t)
        live_eps = [e for e in range(2 * n) if ep_active[e]]
        if lam > 0.0 and len(live_eps) >= thr > 0:
            for c in range(m):
                if c in chosen_set or len(chosen) + 1 > k:
                    continue
                col = np.sort(d[live_eps, c])
                q = float(col[thr - 1])
                if math.isfinite(q):
                    triggers.append(_bump_until(q, lam))
        if not triggers:
            remaining = tuple(e for e in range(2 * n) if ep_active[e])
            events.append(TraceEvent(radius=INF, endpoints=remaining))
            break
        # A retirement trigger can sit at or below r after openings; revisit.
        r = max(r, min(triggers))
    return Solution.of(chosen), RunTrace(tuple(events))


# ---------------------------------------------------------------------------
# Clustering on a line
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LineClusteringInstance:
    """Datapoints and candidate centers on the real line, with a dictator rank."""

    datapoints: tuple[float, ...]
    centers: tuple[float, ...]
    k: int
    ell: int = 1

    def __post_init__(self):
        dp = tuple(sorted(float(x) for x in self.datapoints))
        ce = tuple(sorted(float(x) for x in self.centers))
        if not all(map(math.isfinite, dp + ce)):
            raise ValueError("line coordinates must be finite")
        object.__setattr__(self, "datapoints", dp)
        object.__setattr__(self, "centers", ce)
        if not 1 <= self.k <= len(ce):
            raise ValueError(f"invalid budget k={self.k} for {len(ce)} centers")
        if not 1 <= self.ell <= len(dp) // self.k:
            raise ValueError(f"ell={self.ell} outside [1, floor(n/k)={len(dp) // self.k}]")

    @property
    def n(self) -> int:
        return len(self.datapoints)


def l_dictator_partition(line: LineClusteringInstance) -> tuple[int, ...]:
    """Let the ell-th datapoint of each block pick its nearest unselected center.

    Datapoints are split, in sorted order, into blocks of ``ceil(n/k)``; the
    ``ell``-th member of each block selects the closest center not already
    chosen (ties go to the leftmost).  Returns sorted center indices; fewer
    than ``k`` only when trailing blocks run out of datapoints.
    """
    n, kk, ell = line.n, line.k, line.ell
    if ell > n // kk:
        raise ValueError(f"ell={ell} exceeds floor(n/k)={n // kk}")
    block = -(-n // kk)
    picked: list[int] = []
    for b in range(kk):
        j = b * block + (ell - 1)
        if j >= n:
            break
        x = line.datapoints[j]
        best: tuple[float, int] | None = None
        for ci, c in enumerate(line.centers):
            if ci in picked:
                continue
            dd = abs(x - c)
            if best is None or dd < best[0]:
                best = (dd, ci)
        if best is None:
            break
        picked.append(best[1])
    return tuple(sorted(picked))


def line_sweep_baseline(line: LineClusteringInstance) -> tuple[int, ...]:
    """Left-to-right blocks, each served by the nearest center at or right of it.

    Groups the sorted datapoints into blocks of ``ceil(n/k)`` and assigns each
    block the nearest unselected center at or to the right of its rightmost
    member (falling back to the overall nearest when none remains on the
    right).  Kept only as a demonstrator: it can be arbitrarily unfair when
    centers do not coincide with datapoints.
    """
    n, kk = line.n, line.k
    block = -(-n // kk)
    picked: list[int] = []
    for b in range(kk):
        lo = b * block
        if lo >= n:
            break
        boundary = line.datapoints[min((b + 1) * block, n) - 1]
        choice: int | None = None
        for ci, c in enumerate(line.centers):
            if ci in picked:
                continue
            if c >= boundary:
                choice = ci
                break
        if choice is None:
            best: tuple[float, int] | None = None
            for ci, c in enumerate(line.centers):
                if ci in picked:
                    continue
                dd = abs(boundary - c)
                if best is None or dd < best[0]:
                    best = (dd, ci)
            if best is None:
                break
            choice = best[1]
        picked.append(choice)
    return tuple(sorted(picked))


def line_to_clustering(line: LineClusteringInstance) -> ClusteringInstance:
    """Materialize a line instance as a distance-matrix clustering instance."""
    coords = np.array(line.datapoints + line.centers, dtype=float)
    dist = np.abs(coords[:, None] - coords[None, :])
    n = line.n
    return ClusteringInstance(
        datapoints=np.arange(n),
        centers=np.arange(n, n + len(line.centers)),
        dist=Metric(dist),
        k=line.k,
    )


# ---------------------------------------------------------------------------
# Exact minimum-total-cost oracle
# ---------------------------------------------------------------------------


def exact_min_cost(instance: Instance, max_subsets: int = 1_000_000) -> tuple[Solution, float]:
    """Brute-force minimum of total cost over all candidate subsets of size <= k.

    Ties prefer fewer stops, then the lexicographically smallest stop set.
    Raises :class:`EnumerationGuardError` when the enumeration would exceed
    ``max_subsets`` subsets.
    """
    require_valid_structure(instance)
    m = instance.m
    kk = min(instance.k, m)
    count = sum(math.comb(m, j) for j in range(kk + 1))
    if count > max_subsets:
        raise EnumerationGuardError(
            f"{count} subsets exceed the max_subsets guard of {max_subsets}"
        )
    best_cost = INF
    best_stops: tuple[int, ...] = ()
    for size in range(kk + 1):
        for stops in itertools.combinations(range(m), size):
            cost = float(solution_costs(instance, stops).sum())
            if cost < best_cost:
                best_cost, best_stops = cost, stops
    return Solution(best_stops), best_cost
