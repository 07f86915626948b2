"""Instance generators: stress families, random instances, and file I/O.

Each named family builds one of the hand-crafted instances on which the
selection algorithms hit their worst-case fairness factors (or on which no
good placement exists at all), parameterized by the small gaps (``eps``,
``delta``), the hybrid mixing weight (``lam``) and the size knobs (``h``,
``gamma``, ``r``) that the constructions scale with.

Construction policy shared by all families:

* distances are assembled from the explicitly placed segments and then
  completed by an all-pairs shortest-path closure, so every emitted metric
  satisfies the triangle inequality exactly;
* points in different "regions" of a construction are separated by genuine
  infinity, never by a large finite surrogate (a finite stand-in would bend
  cost ratios and create spurious short paths through decoy stops);
* decoy candidates that exist only to pad the candidate set live at infinite
  distance from everything, so they can never enter any deviation witness.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .algorithms import LineClusteringInstance
from .model import INF, Instance, Metric

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT5 = math.sqrt(5.0)


class InstanceParseError(ValueError):
    """Raised when an instance file is malformed; the message names the field."""


# ---------------------------------------------------------------------------
# Metric assembly helper
# ---------------------------------------------------------------------------


class _MetricBuilder:
    """Collects named points and explicit segment lengths, then closes the metric."""

    def __init__(self):
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        self._edges: dict[tuple[int, int], float] = {}

    def point(self, name: str) -> int:
        if name not in self._index:
            self._index[name] = len(self._names)
            self._names.append(name)
        return self._index[name]

    def points(self, *names: str) -> list[int]:
        return [self.point(n) for n in names]

    def dist(self, a: str, b: str, value: float) -> None:
        i, j = self.point(a), self.point(b)
        if i == j:
            return
        key = (min(i, j), max(i, j))
        self._edges[key] = min(self._edges.get(key, INF), float(value))

    def __getitem__(self, name: str) -> int:
        return self._index[name]

    def build(self) -> Metric:
        p = len(self._names)
        d = np.full((p, p), INF)
        np.fill_diagonal(d, 0.0)
        for (i, j), v in self._edges.items():
            d[i, j] = d[j, i] = v
        for mid in range(p):
            np.minimum(d, d[:, [mid]] + d[[mid], :], out=d)
        return Metric(d)


def _null_transit(m: int) -> Metric:
    return Metric(np.zeros((m, m)))


def _line_region(b: _MetricBuilder, names_at: list[tuple[str, float]]) -> None:
    """Place points on one line segment; all pairwise gaps become segments."""
    for (na, xa), (nb, xb) in itertools.combinations(names_at, 2):
        b.dist(na, nb, abs(xa - xb))


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


def jr_lower_instance() -> Instance:
    """Three agents, six stops, budget 3: no placement represents everyone well.

    Two mirrored regions at infinite separation; within each region the three
    agent endpoints and three stops sit in a rotationally symmetric pattern
    with distances 1, sqrt(3) and 2+sqrt(3).  Every feasible placement leaves
    a two-agent coalition preferring some cross-region stop pair by a factor
    of (1+sqrt(3))/2.
    """
    b = _MetricBuilder()
    ring = [2.0 + SQRT3, SQRT3, 1.0]
    for side, eps_names in (("a", ["a1", "a2", "a3"]), ("b", ["b1", "b2", "b3"])):
        stops = [f"t{j + 1}" for j in (range(3) if side == "a" else range(3, 6))]
        for s, stop in enumerate(stops):
            for e, endpoint in enumerate(eps_names):
                b.dist(stop, endpoint, ring[(e + s) % 3])
    endpoints = [(b["a1"], b["b1"]), (b["a2"], b["b2"]), (b["a3"], b["b3"])]
    labels = tuple(f"t{j}" for j in range(1, 7))
    return Instance(
        endpoints=np.array(endpoints),
        candidates=np.array(b.points(*labels)),
        walk=b.build(),
        transit=_null_transit(6),
        k=3,
        candidate_labels=labels,
    )


def gc_jr_tight_instance(eps: float = 0.01) -> Instance:
    """Seven agents on two mirrored lines where greedy capture is maximally unfair.

    On each line: a lone endpoint at 0, a cluster of two at 1 (on a stop), one
    at 1+(sqrt(5)-1)/2, and three at the far stop just inside radius 1 of the
    fourth.  The far stops open first and strand the four inner agents, whose
    preferred central pair never fills its ball.
    """
    _check(0.0 <= eps < 1.0, f"eps must lie in [0, 1), got {eps}")
    dh = (SQRT5 - 1.0) / 2.0
    return _two_line_instance(
        inner_gap=dh,
        top_far_gap=1.0 - eps / 8.0,
        bottom_far_gap=1.0 - eps / 8.0,
        far_decoys=0,
        extra_labels=("y3", "y4"),
    )


def hybrid_jr_tight_instance(lam: float = 0.5, eps: float = 0.01) -> Instance:
    """The two-line layout scaled so the hybrid sweep at weight ``lam`` fails worst.

    The gap to the top far stop shrinks with ``lam`` so the distance side
    opens it just before the central pair's cost ball fills; four decoy stops
    at infinity pad the candidate set.
    """
    _check(0.0 < lam <= 1.0, f"lam must lie in (0, 1], got {lam}")
    _check(0.0 <= eps < 1.0, f"eps must lie in [0, 1), got {eps}")
    dh = (math.sqrt(lam * lam + 10.0 * lam + 9.0) - lam - 1.0) / 4.0
    return _two_line_instance(
        inner_gap=dh,
        top_far_gap=lam * (1.0 - eps / 2.0),
        bottom_far_gap=1.0 - (1.0 - lam / 2.0) * eps,
        far_decoys=4,
        extra_labels=(),
    )


def _two_line_instance(
    inner_gap: float,
    top_far_gap: float,
    bottom_far_gap: float,
    far_decoys: int,
    extra_labels: tuple[str, ...],
) -> Instance:
    """Shared scaffold of the two tightness lines (seven agents, budget 4)."""
    b = _MetricBuilder()
    top = [("T0", 0.0), ("T1", 1.0), ("T2", 1.0 + inner_gap), ("T3", 1.0 + inner_gap + top_far_gap)]
    bot = [("B0", 0.0), ("B1", 1.0), ("B2", 1.0 + inner_gap), ("B3", 1.0 + inner_gap + bottom_far_gap)]
    _line_region(b, top)
    _line_region(b, bot)
    cand_names = ["T1", "B1", "T3", "B3"]
    labels = ["t1", "t2", "y1", "y2"]
    for j, extra in enumerate(extra_labels):
        cand_names.append("T0" if j % 2 == 0 else "B0")
        labels.append(extra)
    for j in range(far_decoys):
        name = f"D{j}"
        b.point(name)
        cand_names.append(name)
        labels.append(f"y{3 + j}")
    endpoints = [
        (b["T0"], b["B1"]),
        (b["T1"], b["B2"]),
        (b["T1"], b["B0"]),
        (b["T2"], b["B1"]),
        (b["T3"], b["B3"]),
        (b["T3"], b["B3"]),
        (b["T3"], b["B3"]),
    ]
    m = len(cand_names)
    return Instance(
        endpoints=np.array(endpoints),
        candidates=np.array([b[nm] for nm in cand_names]),
        walk=b.build(),
        transit=_null_transit(m),
        k=4,
        candidate_labels=tuple(labels),
    )


def gc_core_tight_instance(eps: float = 0.01, h: int = 10) -> Instance:
    """Two mirrored point clusters where greedy capture's core factor is attained.

    Three co-located agent groups of sizes 6h-1, 6h-1 and 3h+2 travel between
    mirrored regions; the slightly-too-wide cheap stops capture the two big
    groups first, leaving groups 1 and 2 paying a factor 1+sqrt(2)-eps more
    than under the tight stops.  Budget 5; three decoy stops at infinity.
    """
    _check(0.0 <= eps < 1.0, f"eps must lie in [0, 1), got {eps}")
    _check(h >= 1 and int(h) == h, f"h must be a positive integer, got {h}")
    h = int(h)
    b = _MetricBuilder()
    near = [1.0, SQRT2 - 1.0, 1.0]
    wide = [1.0 + SQRT2 - eps, 1.0 - (SQRT2 - 1.0) * eps, 1.0 - (SQRT2 - 1.0) * eps]
    for side, eps_names, tight, loose in (
        ("a", ["a1", "a2", "a3"], "t1", "t2"),
        ("b", ["b1", "b2", "b3"], "t3", "t4"),
    ):
        for e, endpoint in enumerate(eps_names):
            b.dist(tight, endpoint, near[e])
            b.dist(loose, endpoint, wide[e])
    for decoy in ("t5", "t6", "t7"):
        b.point(decoy)
    group_sizes = [6 * h - 1, 6 * h - 1, 3 * h + 2]
    endpoints = []
    for g, size in enumerate(group_sizes):
        endpoints.extend([(b[f"a{g + 1}"], b[f"b{g + 1}"])] * size)
    labels = tuple(f"t{j}" for j in range(1, 8))
    return Instance(
        endpoints=np.array(endpoints),
        candidates=np.array([b[lb] for lb in labels]),
        walk=b.build(),
        transit=_null_transit(7),
        k=5,
        candidate_labels=labels,
    )


def eca_jr_tight_instance(eps: float = 0.01) -> Instance:
    """Four agents across two mirrored regions where expanding cost is worst.

    The slightly cheap stop pair covers agents 2-4 a hair before the tight
    pair would, stranding agent 1 at cost ratio 1+sqrt(2) (minus an eps
    sliver).  Note the eps perturbation makes the raw table of segments
    triangle-infeasible; the shortest-path closure trims two long entries by
    O(eps), which leaves the blocking coalition's ratios untouched.
    """
    _check(0.0 <= eps < 1.0, f"eps must lie in [0, 1), got {eps}")
    b = _MetricBuilder()
    near = [1.0, SQRT2 - 1.0, 1.0 + SQRT2]
    cheap = [1.0 + SQRT2, 1.0 - eps / 4.0, 1.0 - eps / 4.0]
    for side, eps_names, tight, loose in (
        ("a", ["a1", "a23", "a4"], "t1", "t2"),
        ("b", ["b1", "b23", "b4"], "t3", "t4"),
    ):
        for e, endpoint in enumerate(eps_names):
            b.dist(tight, endpoint, near[e])
            b.dist(loose, endpoint, cheap[e])
    endpoints = [
        (b["a1"], b["b1"]),
        (b["a23"], b["b23"]),
        (b["a23"], b["b23"]),
        (b["a4"], b["b4"]),
    ]
    labels = ("t1", "t2", "t3", "t4")
    return Instance(
        endpoints=np.array(endpoints),
        candidates=np.array([b[lb] for lb in labels]),
        walk=b.build(),
        transit=_null_transit(4),
        k=3,
        candidate_labels=labels,
    )


def kz_core_failure_instance(gamma: float = 1.0, r: int = 2) -> Instance:
    """Complete-graph construction on which expanding cost has no core factor.

    Vertices of a complete graph are mutually unreachable stop locations;
    each edge carries two on-edge stops one unit in from either side and
    ``r`` agents traveling across.  Expanding cost spends the whole budget on
    the on-edge pairs at cost 2 each, while the vertex stops would serve the
    vertex-to-vertex agents for free.
    """
    _check(gamma >= 1.0, f"gamma must be >= 1, got {gamma}")
    _check(r >= 2 and int(r) == r, f"r must be an integer >= 2, got {r}")
    r = int(r)
    z = math.ceil(r / (r - 1) * gamma + 1 - 1e-12)
    b = _MetricBuilder()
    for v in range(1, z + 1):
        b.point(f"v{v}")
    edges = list(itertools.combinations(range(1, z + 1), 2))
    for i, j in edges:
        # Branch of the cluster around vertex i, then around vertex j.
        b.dist(f"v{i}", f"s{j}.{i}", 1.0)
        b.dist(f"s{j}.{i}", f"p{i}.{j}", 1.0)
        b.dist(f"v{j}", f"s{i}.{j}", 1.0)
        b.dist(f"s{i}.{j}", f"p{j}.{i}", 1.0)
    endpoints = []
    for i, j in edges:
        endpoints.extend([(b[f"v{i}"], b[f"v{j}"])] * (r - 1))
        endpoints.append((b[f"p{i}.{j}"], b[f"p{j}.{i}"]))
    cand_names = [f"v{v}" for v in range(1, z + 1)]
    labels = [f"t{v}" for v in range(1, z + 1)]
    for i, j in edges:
        cand_names.extend([f"s{j}.{i}", f"s{i}.{j}"])
        labels.extend([f"t{j}{i}" if z < 10 else f"t{j}.{i}",
                       f"t{i}{j}" if z < 10 else f"t{i}.{j}"])
    m = len(cand_names)
    return Instance(
        endpoints=np.array(endpoints),
        candidates=np.array([b[nm] for nm in cand_names]),
        walk=b.build(),
        transit=_null_transit(m),
        k=z * z - z,
        candidate_labels=tuple(labels),
    )


def hybrid_core_tight_instance(
    lam: float = 0.5, eps: float = 0.01, delta: float = 0.5
) -> Instance:
    """Four-zone construction attaining the hybrid sweep's core lower bound.

    Each of four mutually unreachable zones holds a tight stop and a slightly
    cheaper wide stop; group sizes are tuned (via ``h = ceil(2/delta)``) so
    the wide stops always win the sweep while a near-double coalition prefers
    the four tight stops by the bound's factor.  Four decoys at infinity pad
    the candidate set to 12; budget 8.
    """
    _check(0.0 < lam <= 1.0, f"lam must lie in (0, 1], got {lam}")
    _check(0.0 <= eps < 1.0, f"eps must lie in [0, 1), got {eps}")
    _check(0.0 < delta <= 2.0, f"delta must lie in (0, 2], got {delta}")
    h = math.ceil(2.0 / delta - 1e-12)
    q = (math.sqrt(4 * lam * lam + 12 * lam + 1) - 2 * lam - 1) / (4 * lam)
    half = 1.0 / (2.0 * lam)
    b = _MetricBuilder()
    for z in range(1, 5):
        b.dist(f"x{z}", f"t{z}", 1.0)
        b.dist(f"x{z}", f"c{z}", 1.0 + q + half - eps)
        b.dist(f"y{z}", f"t{z}", q)
        b.dist(f"y{z}", f"c{z}", half - q * eps)
        b.dist(f"z{z}", f"t{z}", 1.0 + q)
        b.dist(f"z{z}", f"c{z}", half - q * eps)
    for decoy in ("c5", "c6", "c7", "c8"):
        b.point(decoy)
    groups = [
        (h - 1, ("x1", "x3")),
        (h - 1, ("x2", "x4")),
        (h - 1, ("y1", "y2")),
        (h - 1, ("y3", "y4")),
        (2, ("z1", "z2")),
        (2, ("z3", "z4")),
    ]
    endpoints = []
    for size, (a, bb) in groups:
        endpoints.extend([(b[a], b[bb])] * size)
    labels = ("t1", "t2", "t3", "t4", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8")
    return Instance(
        endpoints=np.array(endpoints),
        candidates=np.array([b[lb] for lb in labels]),
        walk=b.build(),
        transit=_null_transit(12),
        k=8,
        candidate_labels=labels,
    )


def clustering_lb_instance() -> Instance:
    """Twelve endpoints in three unreachable unit T-shapes; budget 6 of 9 centers.

    Whatever an endpoint-only (clustering) selection rule picks, some pairing
    of the endpoints into agents leaves a two-agent coalition improving by a
    factor of 3 (or unboundedly, if a whole shape is skipped).  The emitted
    agent pairing is the adversarial one for selections that take two centers
    in each of the first two shapes.
    """
    b = _MetricBuilder()
    for g in range(3):
        left, top, right, center = (f"x{4 * g + i}" for i in (1, 2, 3, 4))
        b.dist(left, center, 1.0)
        b.dist(center, right, 1.0)
        b.dist(center, top, 1.0)
    endpoints = [
        (b["x1"], b["x8"]),
        (b["x4"], b["x5"]),
        (b["x2"], b["x3"]),
        (b["x6"], b["x7"]),
        (b["x9"], b["x10"]),
        (b["x11"], b["x12"]),
    ]
    cand = ["x1", "x2", "x3", "x5", "x6", "x7", "x9", "x10", "x11"]
    return Instance(
        endpoints=np.array(endpoints),
        candidates=np.array([b[nm] for nm in cand]),
        walk=b.build(),
        transit=_null_transit(9),
        k=6,
        candidate_labels=tuple(cand),
    )


def motivating_instance() -> Instance:
    """Six agents on a small Euclidean grid with four corner stops, budget 3.

    Distances are Euclidean over the drawn coordinates (the grid does not fix
    a metric by itself; Euclidean is this generator's labeled choice) and
    rides between stops are free.  Picking the three stops that ignore the
    four parallel commuters leaves a two-thirds coalition improving on the
    skipped pair.
    """
    coords = {
        "a1": (-1, 5), "a2": (0, 6), "a3": (1, 5), "a4": (0, 4),
        "a5": (-1, 2), "b5": (0, 1), "a6": (5, 6), "b6": (6, 5),
        "b1": (4, 2), "b2": (6, 2), "b3": (5, 1), "b4": (5, 3),
        "c1": (0, 5), "c2": (0, 2), "c3": (5, 5), "c4": (5, 2),
    }
    names = list(coords)
    pts = np.array([coords[nm] for nm in names], dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    walk = Metric(np.sqrt((diff ** 2).sum(axis=2)))
    ix = {nm: i for i, nm in enumerate(names)}
    endpoints = [(ix[f"a{i}"], ix[f"b{i}"]) for i in range(1, 7)]
    endpoints[4] = (ix["a5"], ix["b5"])
    labels = ("c1", "c2", "c3", "c4")
    return Instance(
        endpoints=np.array(endpoints),
        candidates=np.array([ix[lb] for lb in labels]),
        walk=walk,
        transit=_null_transit(4),
        k=3,
        candidate_labels=labels,
    )


def line_pf_example(ell: int = 1) -> LineClusteringInstance:
    """Four datapoints and four centers on a line where block sweeps lose fairness.

    The nearest-right block rule picks the centers at 6 and 13; letting each
    block's ``ell``-th member pick its nearest center yields 2 and 9 instead,
    which is exactly proportionally fair.
    """
    return LineClusteringInstance(
        datapoints=(1.0, 3.0, 8.0, 10.0),
        centers=(2.0, 6.0, 9.0, 13.0),
        k=2,
        ell=ell,
    )


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

TRANSIT_MODES = ("null", "scaled", "random")


def random_euclidean(
    n: int,
    m: int,
    k: int,
    seed: int,
    transit: str = "null",
    factor: float = 1.0,
) -> Instance:
    """Uniform points in the unit square with a choice of transit metric.

    ``transit="null"`` makes rides free; ``"scaled"`` prices them at
    ``factor`` times the Euclidean candidate distance; ``"random"`` draws a
    symmetric matrix and repairs it into a metric by shortest-path closure.
    Deterministic for a given seed.
    """
    if n < 1 or m < 1 or not 1 <= k <= m:
        raise ValueError(f"need n, m >= 1 and 1 <= k <= m, got n={n} m={m} k={k}")
    if transit not in TRANSIT_MODES:
        raise ValueError(f"transit must be one of {TRANSIT_MODES}, got {transit!r}")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, 1.0, size=(2 * n + m, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    walk = np.sqrt((diff ** 2).sum(axis=2))
    cand = np.arange(2 * n, 2 * n + m)
    if transit == "null":
        ride = np.zeros((m, m))
    elif transit == "scaled":
        ride = factor * walk[np.ix_(cand, cand)]
    else:
        raw = rng.uniform(0.0, 1.0, size=(m, m))
        ride = np.minimum(raw, raw.T)
        np.fill_diagonal(ride, 0.0)
        for mid in range(m):
            np.minimum(ride, ride[:, [mid]] + ride[[mid], :], out=ride)
    endpoints = np.arange(2 * n).reshape(n, 2)
    return Instance(
        endpoints=endpoints,
        candidates=cand,
        walk=Metric(walk),
        transit=Metric(ride),
        k=k,
    )


# ---------------------------------------------------------------------------
# Family registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    """A family name plus its parameter assignment."""

    family: str
    params: dict = field(default_factory=dict)


FAMILIES = {
    "motivating": (motivating_instance, ()),
    "jr-lower": (jr_lower_instance, ()),
    "clustering-lb": (clustering_lb_instance, ()),
    "gc-jr-tight": (gc_jr_tight_instance, ("eps",)),
    "gc-core-tight": (gc_core_tight_instance, ("eps", "h")),
    "eca-jr-tight": (eca_jr_tight_instance, ("eps",)),
    "kz": (kz_core_failure_instance, ("gamma", "r")),
    "hybrid-jr-tight": (hybrid_jr_tight_instance, ("lam", "eps")),
    "hybrid-core-tight": (hybrid_core_tight_instance, ("lam", "eps", "delta")),
    "line-pf": (line_pf_example, ("ell",)),
}

_ALIASES = {
    "fig1": "motivating",
    "motivating-fig1": "motivating",
    "table3": "jr-lower",
    "jr-lower-table3": "jr-lower",
    "fig4": "clustering-lb",
    "clustering-impossibility-fig4": "clustering-lb",
    "fig5": "gc-jr-tight",
    "gc-jr-tight-fig5": "gc-jr-tight",
    "table4": "gc-core-tight",
    "gc-core-tight-table4": "gc-core-tight",
    "table5": "eca-jr-tight",
    "eca-jr-tight-table5": "eca-jr-tight",
    "eca-core-fail-kz": "kz",
    "fig6": "hybrid-jr-tight",
    "hybrid-jr-tight-fig6": "hybrid-jr-tight",
    "table6": "hybrid-core-tight",
    "table7": "hybrid-core-tight",
    "hybrid-core-tight-table6": "hybrid-core-tight",
    "fig7": "line-pf",
    "line-fig7": "line-pf",
}


def canonical_family(name: str) -> str:
    """Resolve a family name or alias to its canonical registry key."""
    key = name.strip().lower().replace("_", "-")
    key = _ALIASES.get(key, key)
    if key not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    return key


def generate(spec: FamilySpec | str, **params):
    """Build the named family instance; returns a line instance for ``line-pf``."""
    if isinstance(spec, FamilySpec):
        if params:
            raise ValueError("pass parameters inside FamilySpec or as kwargs, not both")
        name, params = spec.family, dict(spec.params)
    else:
        name = spec
    key = canonical_family(name)
    builder, allowed = FAMILIES[key]
    unknown = set(params) - set(allowed)
    if unknown:
        raise ValueError(f"family {key!r} does not take parameters {sorted(unknown)}")
    return builder(**params)


# ---------------------------------------------------------------------------
# Instance files
# ---------------------------------------------------------------------------


def _encode_tri(d: np.ndarray) -> list:
    out: list = []
    for i in range(d.shape[0]):
        for j in range(i + 1):
            v = d[i, j]
            out.append("inf" if math.isinf(v) else float(v))
    return out


def _decode_tri(values, size: int, fieldname: str) -> np.ndarray:
    expected = size * (size + 1) // 2
    if not isinstance(values, list) or len(values) != expected:
        raise InstanceParseError(
            f"field '{fieldname}' must hold {expected} lower-triangular entries, "
            f"got {len(values) if isinstance(values, list) else type(values).__name__}"
        )
    d = np.zeros((size, size))
    it = iter(values)
    for i in range(size):
        for j in range(i + 1):
            v = next(it)
            if isinstance(v, str):
                if v.lower() not in ("inf", "infinity", "+inf"):
                    raise InstanceParseError(f"field '{fieldname}': bad entry {v!r}")
                x = INF
            else:
                x = float(v)
            d[i, j] = d[j, i] = x
    return d


def write_instance(instance: Instance, path) -> None:
    """Write an instance as UTF-8 JSON with canonical key order.

    Lower-triangular row-major distance arrays; infinities encoded as the
    string ``"inf"``.  Candidate labels, when present, ride along in an
    optional ``labels`` field.
    """
    doc = {
        "n": instance.n,
        "m": instance.m,
        "k": instance.k,
        "points": instance.walk.size,
        "endpoints": [[int(a), int(b)] for a, b in instance.endpoints],
        "candidates": [int(c) for c in instance.candidates],
        "walk": _encode_tri(instance.walk.dist),
        "transit": _encode_tri(instance.transit.dist),
    }
    if instance.candidate_labels is not None:
        doc["labels"] = list(instance.candidate_labels)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_instance(path) -> Instance:
    """Read an instance file written by :func:`write_instance` (any key order)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise InstanceParseError(f"{path}: top level must be an object")
    for fieldname in ("n", "m", "k", "points", "endpoints", "candidates", "walk", "transit"):
        if fieldname not in doc:
            raise InstanceParseError(f"{path}: missing field '{fieldname}'")
    n, m, k, p = (int(doc[key]) for key in ("n", "m", "k", "points"))
    endpoints = doc["endpoints"]
    if not isinstance(endpoints, list) or len(endpoints) != n:
        raise InstanceParseError(f"{path}: field 'endpoints' must list {n} pairs")
    for row in endpoints:
        if not isinstance(row, list) or len(row) != 2:
            raise InstanceParseError(f"{path}: field 'endpoints' entries must be pairs")
    candidates = doc["candidates"]
    if not isinstance(candidates, list) or len(candidates) != m:
        raise InstanceParseError(f"{path}: field 'candidates' must list {m} indices")
    walk = _decode_tri(doc["walk"], p, "walk")
    transit = _decode_tri(doc["transit"], m, "transit")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != m:
            raise InstanceParseError(f"{path}: field 'labels' must list {m} names")
        labels = tuple(str(s) for s in labels)
    return Instance(
        endpoints=np.array(endpoints, dtype=int).reshape(n, 2) if n else np.zeros((0, 2), dtype=int),
        candidates=np.array(candidates, dtype=int),
        walk=Metric(walk),
        transit=Metric(transit),
        k=k,
        candidate_labels=labels,
    )
