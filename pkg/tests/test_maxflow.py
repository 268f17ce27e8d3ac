import math

import numpy as np
import pytest

from volmrf import FlowGraph, ParameterError, max_flow
from volmrf.maxflow import cut_capacity

from oracles import brute_min_cut


def random_graph(rng, max_nodes=8, max_cap=7, density=None):
    n = int(rng.integers(0, max_nodes + 1))
    g = FlowGraph(n)
    src = rng.integers(0, max_cap + 1, size=n)
    snk = rng.integers(0, max_cap + 1, size=n)
    g.add_tedges(np.arange(n), src, snk)
    arcs = []
    if n > 1:
        p = rng.uniform(0.1, 0.9) if density is None else density
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    c, r = (int(v) for v in rng.integers(0, max_cap + 1, size=2))
                    if rng.random() < 0.5:
                        arcs.append((i, j, c, r))
                    else:
                        arcs.append((j, i, r, c))
        for i, j, c, r in arcs:
            g.add_edges(i, j, c, r)
    return g, n, src.tolist(), snk.tolist(), arcs


def test_single_node_example():
    g = FlowGraph(1)
    g.add_tedges(0, 5, 3)
    for algo in ("bk", "bfs"):
        r = max_flow(g, algo)
        assert r.flow_value == 3
        assert r.side(0) == "SOURCE"


def test_chain_example():
    g = FlowGraph(2)
    g.add_tedges([0, 1], [3, 0], [0, 5])
    g.add_edges(0, 1, 1, 0)
    for algo in ("bk", "bfs"):
        r = max_flow(g, algo)
        assert r.flow_value == 1
        assert r.source_side.tolist() == [True, False]


def test_empty_graph():
    r = max_flow(FlowGraph(0))
    assert r.flow_value == 0 and len(r.source_side) == 0


@pytest.mark.parametrize("bad", [-1.0, math.nan])
def test_rejects_bad_capacities(bad):
    g = FlowGraph(2)
    g.add_edges(0, 1, bad, 1.0)
    with pytest.raises(ParameterError):
        max_flow(g)
    g = FlowGraph(1)
    g.add_tedges(0, bad, 1.0)
    with pytest.raises(ParameterError):
        max_flow(g)


def test_rejects_self_loops_and_missing_nodes():
    g = FlowGraph(2)
    with pytest.raises(ParameterError):
        g.add_edges(1, 1, 1.0, 1.0)
    with pytest.raises(ParameterError):
        g.add_edges(0, 2, 1.0, 1.0)
    with pytest.raises(ParameterError):
        g.add_tedges(3, 1.0, 1.0)


@pytest.mark.parametrize("seed", range(150))
def test_matches_bruteforce(seed):
    rng = np.random.default_rng(seed)
    g, n, src, snk, arcs = random_graph(rng)
    best = brute_min_cut(n, src, snk, arcs)
    bk, bfs = max_flow(g, "bk"), max_flow(g, "bfs")
    assert bk.flow_value == bfs.flow_value == best
    assert float(bk.flow_value).is_integer()
    assert cut_capacity(g, bk.source_side) == best
    np.testing.assert_array_equal(bk.source_side, bfs.source_side)


def test_deterministic_and_graph_unchanged():
    rng = np.random.default_rng(99)
    g, *_ = random_graph(rng, density=0.7)
    before = [a.copy() for a in g.arcs] + [g.cap_source.copy(), g.cap_sink.copy()]
    r1, r2 = max_flow(g), max_flow(g)
    assert r1.flow_value == r2.flow_value
    np.testing.assert_array_equal(r1.source_side, r2.source_side)
    for a, b in zip(before, list(g.arcs) + [g.cap_source, g.cap_sink]):
        np.testing.assert_array_equal(a, b)


def test_grid_graph_real_capacities():
    # 2D grid with float capacities; cross-check the two solvers
    rng = np.random.default_rng(5)
    side = 12
    n = side * side
    g = FlowGraph(n)
    g.add_tedges(np.arange(n), rng.uniform(0, 3, n), rng.uniform(0, 3, n))
    idx = np.arange(n).reshape(side, side)
    for a, b in ((idx[:-1, :], idx[1:, :]), (idx[:, :-1], idx[:, 1:])):
        c = rng.uniform(0, 2, a.size)
        g.add_edges(a.ravel(), b.ravel(), c, c)
    bk, bfs = max_flow(g, "bk"), max_flow(g, "bfs")
    assert bk.flow_value == pytest.approx(bfs.flow_value, rel=1e-12)
    assert cut_capacity(g, bk.source_side) == pytest.approx(bk.flow_value, rel=1e-12)


def test_reset_reuses_storage():
    g = FlowGraph(4, arc_hint=8)
    g.add_tedges([0, 1], [1, 2], [3, 0])
    g.add_edges([0, 1], [2, 3], [1, 1], [1, 1])
    arena = g._ai
    g.reset(3)
    assert g.arc_count == 0 and g.node_count == 3
    assert np.all(g.cap_source == 0) and np.all(g.cap_sink == 0)
    g.add_edges([0], [1], [2.0], [0.0])
    assert g._ai is arena
    first = g.add_nodes(2)
    assert first == 3 and g.node_count == 5
