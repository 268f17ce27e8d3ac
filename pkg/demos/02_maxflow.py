"""
s-t minimum cuts
================

The graph-cut engine behind every expansion move, used directly.
"""

import numpy as np

from volmrf import FlowGraph, max_flow
from volmrf.maxflow import cut_capacity

# Three nodes in a chain.  Terminal capacities are (source -> node, node -> sink).
g = FlowGraph(3)
g.add_tedges([0, 1, 2], [4.0, 1.0, 0.0], [0.0, 1.0, 5.0])
g.add_edges([0, 1], [1, 2], [2.0, 3.0], [0.0, 0.0])

cut = max_flow(g)
print("max flow:", cut.flow_value)
print("sides:", [cut.side(i) for i in range(3)])
print("cut capacity:", cut_capacity(g, cut.source_side))

# The slow Edmonds-Karp reference gives the same flow and the same cut:
# source side is whatever stays reachable from the source.
ref = max_flow(g, algorithm="bfs")
assert ref.flow_value == cut.flow_value
assert np.array_equal(ref.source_side, cut.source_side)

# A 2D grid graph, the shape produced by image segmentation.
rng = np.random.default_rng(0)
side = 100
n = side * side
g = FlowGraph(n)
g.add_tedges(np.arange(n), rng.uniform(0, 1, n), rng.uniform(0, 1, n))
idx = np.arange(n).reshape(side, side)
for a, b in ((idx[:-1], idx[1:]), (idx[:, :-1], idx[:, 1:])):
    g.add_edges(a.ravel(), b.ravel(), 0.5, 0.5)
cut = max_flow(g)
print(f"{side}x{side} grid: flow {cut.flow_value:.4f}, "
      f"{cut.source_side.sum()} nodes on the source side")
