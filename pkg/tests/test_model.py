"""Cost model, metric validation, and the two clustering reductions."""

import math

import numpy as np
import pytest

import fairstops as fs
from oracles import naive_agent_cost

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
INF = math.inf


def tiny_instance(walk, endpoints, candidates, k, transit=None):
    walk = np.array(walk, dtype=float)
    m = len(candidates)
    transit = np.zeros((m, m)) if transit is None else np.array(transit, dtype=float)
    return fs.Instance(
        endpoints=np.array(endpoints),
        candidates=np.array(candidates),
        walk=fs.Metric(walk),
        transit=fs.Metric(transit),
        k=k,
    )


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------


def test_metric_triangle_violation_reported():
    d = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
    issues = fs.Metric(d).violations()
    assert any("triangle" in msg for msg in issues)


def test_metric_infinite_entry_dominates():
    # Checks whose right side is infinite hold vacuously.
    d = np.array([[0, 2, INF], [2, 0, INF], [INF, INF, 0]], dtype=float)
    assert fs.Metric(d).violations() == []


def test_metric_asymmetry_and_diagonal():
    d = np.array([[0.0, 1.0], [2.0, 0.5]])
    issues = fs.Metric(d).violations()
    assert any("asymmetry" in m for m in issues)
    assert any("diagonal" in m for m in issues)


def test_solution_requires_strictly_increasing():
    with pytest.raises(ValueError):
        fs.Solution((2, 1))
    with pytest.raises(ValueError):
        fs.Solution((1, 1))
    assert fs.Solution.of([3, 1, 3]).stops == (1, 3)


# ---------------------------------------------------------------------------
# agent_cost / total_cost
# ---------------------------------------------------------------------------


def test_degenerate_route_costs_zero():
    # Both endpoints at the same point: zero cost under any placement.
    walk = [[0, 1], [1, 0]]
    inst = tiny_instance(walk, endpoints=[(0, 0)], candidates=[1], k=1)
    assert fs.agent_cost(inst, 0, ()) == 0.0
    assert fs.agent_cost(inst, 0, (0,)) == 0.0


def test_agent_cost_table4_group1():
    inst = fs.generate("gc-core-tight", eps=0.01, h=10)
    assert fs.agent_cost(inst, 0, (1, 3)) == pytest.approx(2 * (1 + SQRT2 - 0.01), abs=1e-12)
    assert fs.agent_cost(inst, 0, (1, 3)) == pytest.approx(4.80842712474619, abs=1e-9)


def test_agent_cost_table5_tight_pair():
    inst = fs.generate("eca-jr-tight", eps=0.01)
    assert fs.agent_cost(inst, 0, (0, 2)) == pytest.approx(2.0, abs=1e-12)


def test_agent_cost_index_error():
    inst = fs.generate("jr-lower")
    with pytest.raises(IndexError):
        fs.agent_cost(inst, 5, ())


def test_empty_solution_returns_walk():
    walk = [[0, 3, 1], [3, 0, 1], [1, 1, 0]]
    inst = tiny_instance(walk, endpoints=[(0, 1)], candidates=[2], k=1)
    assert fs.agent_cost(inst, 0, ()) == 3.0
    # Routing through the stop beats walking here.
    assert fs.agent_cost(inst, 0, (0,)) == 2.0


def test_total_cost_empty_instance():
    walk = [[0.0, 1.0], [1.0, 0.0]]
    inst = tiny_instance(walk, endpoints=np.zeros((0, 2), dtype=int), candidates=[0, 1], k=1)
    assert fs.total_cost(inst, ()) == 0.0


def test_total_cost_zero_when_everyone_on_a_stop():
    walk = [[0, 5], [5, 0]]
    inst = tiny_instance(walk, endpoints=[(0, 1), (1, 0)], candidates=[0, 1], k=2)
    assert fs.total_cost(inst, (0, 1)) == 0.0


def test_total_cost_table5_eps_zero():
    inst = fs.generate("eca-jr-tight", eps=0.0)
    assert fs.total_cost(inst, (1, 3)) == pytest.approx(2 * (1 + SQRT2) + 6, abs=1e-12)


def test_costs_match_naive_reference(corpus):
    for inst in corpus[:20]:
        stops = tuple(range(0, inst.m, 2))
        vec = fs.solution_costs(inst, stops)
        for i in range(inst.n):
            assert vec[i] == pytest.approx(naive_agent_cost(inst, i, stops), abs=1e-12)


def test_costs_match_naive_reference_random_transit(corpus_random_transit):
    for inst in corpus_random_transit[:10]:
        stops = tuple(range(inst.m))
        vec = fs.solution_costs(inst, stops)
        for i in range(inst.n):
            assert vec[i] == pytest.approx(naive_agent_cost(inst, i, stops), abs=1e-12)


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------


def test_monotonicity_and_walk_cap(corpus):
    for inst in corpus[:25]:
        small = tuple(range(0, inst.m, 2))
        large = tuple(range(inst.m))
        c_small = fs.solution_costs(inst, small)
        c_large = fs.solution_costs(inst, large)
        walk = fs.solution_costs(inst, ())
        assert np.all(c_large <= c_small + 1e-12)
        assert np.all(c_small <= walk + 1e-12)


def test_null_transit_swap_symmetry(corpus):
    for inst in corpus[:10]:
        assert inst.null_transit
        swapped = fs.Instance(
            endpoints=inst.endpoints[:, ::-1],
            candidates=inst.candidates,
            walk=inst.walk,
            transit=inst.transit,
            k=inst.k,
        )
        stops = tuple(range(0, inst.m, 2))
        assert np.allclose(
            fs.solution_costs(inst, stops), fs.solution_costs(swapped, stops)
        )


def test_route_costs_cap_relationship(corpus):
    for inst in corpus[:10]:
        stops = tuple(range(0, inst.m, 2))
        route = fs.route_costs(inst, stops)
        capped = fs.solution_costs(inst, stops)
        walk = fs.solution_costs(inst, ())
        assert np.allclose(np.minimum(route, walk), capped)
    assert np.all(np.isinf(fs.route_costs(corpus[0], ())))


# ---------------------------------------------------------------------------
# validate_instance
# ---------------------------------------------------------------------------


def test_validate_reports_triangle_and_index_errors():
    walk = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    inst = tiny_instance(walk, endpoints=[(0, 7)], candidates=[2], k=1)
    issues = fs.validate_instance(inst)
    assert any("triangle" in m for m in issues)
    assert any("endpoint index" in m for m in issues)


def test_validate_never_throws_on_bad_budget():
    walk = [[0, 1], [1, 0]]
    inst = tiny_instance(walk, endpoints=[(0, 1)], candidates=[0], k=5)
    issues = fs.validate_instance(inst)
    assert any("budget" in m for m in issues), issues


# ---------------------------------------------------------------------------
# Reductions
# ---------------------------------------------------------------------------


def test_induced_clustering_doubles_agents(corpus):
    inst = corpus[0]
    clustering = fs.induce_clustering(inst)
    assert clustering.n == 2 * inst.n
    assert clustering.k == inst.k
    assert np.array_equal(clustering.centers, inst.candidates)


def test_induced_clustering_jr_lower_family():
    inst = fs.generate("jr-lower")
    clustering = fs.induce_clustering(inst)
    assert clustering.n == 6 and clustering.m == 6 and clustering.k == 3


def test_induced_clustering_keeps_coincident_endpoints():
    walk = [[0, 1], [1, 0]]
    inst = tiny_instance(walk, endpoints=[(0, 0)], candidates=[1], k=1)
    clustering = fs.induce_clustering(inst)
    assert clustering.datapoints.tolist() == [0, 0]


def test_clustering_to_trsp_structure():
    line = fs.generate("line-pf")
    clustering = fs.line_to_clustering(line)
    image = fs.clustering_to_trsp(clustering)
    assert image.k == 2 * clustering.k
    assert image.m == 2 * clustering.m
    assert image.n == clustering.n
    assert image.null_transit
    assert fs.validate_instance(image) == []
    # Distances to the two copies of any center agree by construction.
    d = image.walk.dist
    for i in range(image.n):
        a, b = image.endpoints[i]
        for j in range(clustering.m):
            ca, cb = image.candidates[j], image.candidates[j + clustering.m]
            assert d[a, ca] == d[b, cb]
        assert math.isinf(d[a, b])


def test_trace_type_helpers():
    ev = fs.TraceEvent(radius=1.0, opened=(2,), endpoints=(0, 1))
    trace = fs.RunTrace((ev,))
    assert trace.opened() == (2,)
    assert trace.radii() == (1.0,)
