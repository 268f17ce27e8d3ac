"""s-t max-flow / min-cut on sparse graphs.

Two solvers share one graph type:

* ``"bk"``: Boykov-Kolmogorov two-tree augmenting paths, compiled with numba.
  This is the engine behind every expansion move.
* ``"bfs"``: plain Edmonds-Karp in pure Python, kept as a slow reference.

Both report the minimum cut whose source side is exactly the set of nodes
reachable from the source in the final residual graph.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numba
import numpy as np

from .errors import ParameterError

_TERMINAL = -1
_ORPHAN = -2
_NONE = -3
_FREE = 0
_S = 1
_T = 2
_INF_D = 1 << 60


class FlowGraph:
    """Capacitated graph with two implicit terminals.

    Storage is arena-style: arrays grow geometrically and are kept across
    :meth:`reset`, so a graph can be rebuilt many times without reallocating.
    Terminal capacities accumulate over repeated :meth:`add_tedges` calls.
    """

    def __init__(self, node_count: int = 0, arc_hint: int = 0):
        self._src = np.zeros(max(node_count, 1))
        self._snk = np.zeros(max(node_count, 1))
        m = max(arc_hint, 1)
        self._ai = np.zeros(m, dtype=np.int64)
        self._aj = np.zeros(m, dtype=np.int64)
        self._cap = np.zeros(m)
        self._rev = np.zeros(m)
        self.node_count = 0
        self.arc_count = 0
        self.reset(node_count)

    def reset(self, node_count: int = 0) -> None:
        if node_count < 0:
            raise ParameterError("node_count must be >= 0")
        self.node_count = 0
        self.arc_count = 0
        self._grow_nodes(node_count)
        self._src[:node_count] = 0.0
        self._snk[:node_count] = 0.0
        self.node_count = node_count

    def _grow_nodes(self, n):
        if n > len(self._src):
            size = max(n, 2 * len(self._src))
            for name in ("_src", "_snk"):
                new = np.zeros(size)
                old = getattr(self, name)
                new[: len(old)] = old
                setattr(self, name, new)

    def add_nodes(self, count: int) -> int:
        """Append ``count`` nodes with zero terminal capacity; return the first id."""
        first = self.node_count
        self._grow_nodes(first + count)
        self._src[first:first + count] = 0.0
        self._snk[first:first + count] = 0.0
        self.node_count += count
        return first

    def add_tedges(self, nodes, cap_source, cap_sink) -> None:
        nodes = np.atleast_1d(np.asarray(nodes, dtype=np.int64))
        if len(nodes) and (nodes.min() < 0 or nodes.max() >= self.node_count):
            raise ParameterError("terminal edge refers to a missing node")
        np.add.at(self._src, nodes, np.broadcast_to(np.asarray(cap_source, dtype=float), nodes.shape))
        np.add.at(self._snk, nodes, np.broadcast_to(np.asarray(cap_sink, dtype=float), nodes.shape))

    def add_edges(self, i, j, cap, rev_cap) -> None:
        """Add arcs ``i -> j`` with capacity ``cap`` and ``j -> i`` with ``rev_cap``."""
        i = np.atleast_1d(np.asarray(i, dtype=np.int64))
        j = np.atleast_1d(np.asarray(j, dtype=np.int64))
        k = len(i)
        if len(j) != k:
            raise ParameterError("edge endpoint arrays differ in length")
        if k == 0:
            return
        if min(i.min(), j.min()) < 0 or max(i.max(), j.max()) >= self.node_count:
            raise ParameterError("edge refers to a missing node")
        if np.any(i == j):
            raise ParameterError("self-loops are not allowed")
        end = self.arc_count + k
        if end > len(self._ai):
            size = max(end, 2 * len(self._ai))
            for name in ("_ai", "_aj", "_cap", "_rev"):
                old = getattr(self, name)
                new = np.zeros(size, dtype=old.dtype)
                new[: self.arc_count] = old[: self.arc_count]
                setattr(self, name, new)
        s = slice(self.arc_count, end)
        self._ai[s] = i
        self._aj[s] = j
        self._cap[s] = np.broadcast_to(np.asarray(cap, dtype=float), (k,))
        self._rev[s] = np.broadcast_to(np.asarray(rev_cap, dtype=float), (k,))
        self.arc_count = end

    @property
    def cap_source(self) -> np.ndarray:
        return self._src[: self.node_count]

    @property
    def cap_sink(self) -> np.ndarray:
        return self._snk[: self.node_count]

    @property
    def arcs(self):
        """``(i, j, cap_ij, cap_ji)`` arrays of the pairwise arcs."""
        m = self.arc_count
        return self._ai[:m], self._aj[:m], self._cap[:m], self._rev[:m]

    def validate(self) -> None:
        for name, arr in (("source", self.cap_source), ("sink", self.cap_sink),
                          ("arc", self.arcs[2]), ("reverse arc", self.arcs[3])):
            if np.isnan(arr).any():
                raise ParameterError(f"NaN {name} capacity")
            if (arr < 0).any():
                raise ParameterError(f"negative {name} capacity")
            if np.isinf(arr).any():
                raise ParameterError(f"infinite {name} capacity")


@dataclass(frozen=True)
class CutResult:
    flow_value: float
    source_side: np.ndarray  # bool per node; False means sink side

    def side(self, node: int) -> str:
        return "SOURCE" if self.source_side[node] else "SINK"


def cut_capacity(graph: FlowGraph, source_side) -> float:
    """Capacity of the s-t cut defined by a boolean source-side mask."""
    src = np.asarray(source_side, dtype=bool)
    total = float(np.sum(graph.cap_source[~src])) + float(np.sum(graph.cap_sink[src]))
    i, j, c, r = graph.arcs
    total += float(np.sum(c[src[i] & ~src[j]])) + float(np.sum(r[src[j] & ~src[i]]))
    return total


@numba.njit(cache=True)
def _bk_solve(n, tr, head, first, adj, rc):
    parent = np.full(n, _NONE, np.int64)
    tree = np.zeros(n, np.int8)
    ts = np.zeros(n, np.int64)
    dist = np.zeros(n, np.int64)
    queue = np.empty(max(n, 1), np.int64)
    queued = np.zeros(n, np.bool_)
    qh = 0
    qlen = 0
    orphans = np.empty(max(n, 1), np.int64)
    cap = max(n, 1)

    for i in range(n):
        if tr[i] > 0:
            tree[i] = _S
        elif tr[i] < 0:
            tree[i] = _T
        else:
            continue
        parent[i] = _TERMINAL
        dist[i] = 1
        queue[(qh + qlen) % cap] = i
        qlen += 1
        queued[i] = True

    flow = 0.0
    time = 0
    while True:
        # growth
        found = -1
        while qlen > 0:
            i = queue[qh]
            if parent[i] != _NONE:
                if tree[i] == _S:
                    for k in range(first[i], first[i + 1]):
                        a = adj[k]
                        if rc[a] > 0:
                            j = head[a]
                            if parent[j] == _NONE:
                                tree[j] = _S
                                parent[j] = a ^ 1
                                ts[j] = ts[i]
                                dist[j] = dist[i] + 1
                                if not queued[j]:
                                    queue[(qh + qlen) % cap] = j
                                    qlen += 1
                                    queued[j] = True
                            elif tree[j] == _T:
                                found = a
                                break
                            elif ts[j] <= ts[i] and dist[j] > dist[i]:
                                parent[j] = a ^ 1
                                ts[j] = ts[i]
                                dist[j] = dist[i] + 1
                else:
                    for k in range(first[i], first[i + 1]):
                        a = adj[k]
                        if rc[a ^ 1] > 0:
                            j = head[a]
                            if parent[j] == _NONE:
                                tree[j] = _T
                                parent[j] = a ^ 1
                                ts[j] = ts[i]
                                dist[j] = dist[i] + 1
                                if not queued[j]:
                                    queue[(qh + qlen) % cap] = j
                                    qlen += 1
                                    queued[j] = True
                            elif tree[j] == _S:
                                found = a ^ 1
                                break
                            elif ts[j] <= ts[i] and dist[j] > dist[i]:
                                parent[j] = a ^ 1
                                ts[j] = ts[i]
                                dist[j] = dist[i] + 1
            if found >= 0:
                break
            qh = (qh + 1) % cap
            qlen -= 1
            queued[i] = False
        if found < 0:
            break

        # augmentation along source-tree path, bridge arc, sink-tree path
        a = found
        bott = rc[a]
        u = head[a ^ 1]
        while parent[u] != _TERMINAL:
            p = parent[u]
            if rc[p ^ 1] < bott:
                bott = rc[p ^ 1]
            u = head[p]
        if tr[u] < bott:
            bott = tr[u]
        v = head[a]
        while parent[v] != _TERMINAL:
            p = parent[v]
            if rc[p] < bott:
                bott = rc[p]
            v = head[p]
        if -tr[v] < bott:
            bott = -tr[v]

        rc[a] -= bott
        rc[a ^ 1] += bott
        olen = 0
        u = head[a ^ 1]
        while parent[u] != _TERMINAL:
            p = parent[u]
            rc[p] += bott
            rc[p ^ 1] -= bott
            nxt = head[p]
            if rc[p ^ 1] == 0:
                parent[u] = _ORPHAN
                orphans[olen] = u
                olen += 1
            u = nxt
        tr[u] -= bott
        if tr[u] == 0:
            parent[u] = _ORPHAN
            orphans[olen] = u
            olen += 1
        v = head[a]
        while parent[v] != _TERMINAL:
            p = parent[v]
            rc[p ^ 1] += bott
            rc[p] -= bott
            nxt = head[p]
            if rc[p] == 0:
                parent[v] = _ORPHAN
                orphans[olen] = v
                olen += 1
            v = nxt
        tr[v] += bott
        if tr[v] == 0:
            parent[v] = _ORPHAN
            orphans[olen] = v
            olen += 1
        flow += bott

        # adoption
        time += 1
        oh = 0
        while oh < olen:
            i = orphans[oh]
            oh += 1
            side = tree[i]
            dmin = _INF_D
            amin = _NONE
            for k in range(first[i], first[i + 1]):
                a0 = adj[k]
                if side == _S:
                    ok = rc[a0 ^ 1] > 0
                else:
                    ok = rc[a0] > 0
                if not ok:
                    continue
                j = head[a0]
                if tree[j] != side or parent[j] == _NONE:
                    continue
                d = 0
                x = j
                while True:
                    if ts[x] == time:
                        d += dist[x]
                        break
                    p = parent[x]
                    d += 1
                    if p == _TERMINAL:
                        ts[x] = time
                        dist[x] = 1
                        break
                    if p == _ORPHAN:
                        d = _INF_D
                        break
                    x = head[p]
                if d < _INF_D:
                    if d < dmin:
                        amin = a0
                        dmin = d
                    x = j
                    while ts[x] != time:
                        ts[x] = time
                        dist[x] = d
                        d -= 1
                        x = head[parent[x]]
            if amin != _NONE:
                parent[i] = amin
                ts[i] = time
                dist[i] = dmin + 1
            else:
                parent[i] = _NONE
                tree[i] = _FREE
                for k in range(first[i], first[i + 1]):
                    a0 = adj[k]
                    j = head[a0]
                    if tree[j] != side or parent[j] == _NONE:
                        continue
                    if side == _S:
                        ok = rc[a0 ^ 1] > 0
                    else:
                        ok = rc[a0] > 0
                    if ok and not queued[j]:
                        queue[(qh + qlen) % cap] = j
                        qlen += 1
                        queued[j] = True
                    p = parent[j]
                    if p >= 0 and head[p] == i:
                        parent[j] = _ORPHAN
                        orphans[olen] = j
                        olen += 1

    return flow, _residual_source_side(n, tr, head, first, adj, rc)


@numba.njit(cache=True)
def _residual_source_side(n, tr, head, first, adj, rc):
    seen = np.zeros(n, np.bool_)
    stack = np.empty(max(n, 1), np.int64)
    top = 0
    for i in range(n):
        if tr[i] > 0:
            seen[i] = True
            stack[top] = i
            top += 1
    while top > 0:
        top -= 1
        i = stack[top]
        for k in range(first[i], first[i + 1]):
            a = adj[k]
            if rc[a] > 0:
                j = head[a]
                if not seen[j]:
                    seen[j] = True
                    stack[top] = j
                    top += 1
    return seen


def _solve_bk(graph: FlowGraph) -> CutResult:
    n = graph.node_count
    src, snk = graph.cap_source, graph.cap_sink
    base = float(np.sum(np.minimum(src, snk)))
    tr = src - snk
    i, j, c, r = graph.arcs
    m = len(i)
    head = np.empty(2 * m, dtype=np.int64)
    head[0::2] = j
    head[1::2] = i
    rc = np.empty(2 * m)
    rc[0::2] = c
    rc[1::2] = r
    tails = np.empty(2 * m, dtype=np.int64)
    tails[0::2] = i
    tails[1::2] = j
    adj = np.argsort(tails, kind="stable").astype(np.int64)
    first = np.searchsorted(tails[adj], np.arange(n + 1)).astype(np.int64)
    flow, source_side = _bk_solve(n, tr, head, first, adj, rc)
    return CutResult(base + flow, source_side)


def _solve_bfs(graph: FlowGraph) -> CutResult:
    n = graph.node_count
    s, t = n, n + 1
    res = [dict() for _ in range(n + 2)]

    def add(u, v, c):
        res[u][v] = res[u].get(v, 0.0) + c
        res[v].setdefault(u, 0.0)

    for k in range(n):
        add(s, k, float(graph.cap_source[k]))
        add(k, t, float(graph.cap_sink[k]))
    for a, b, c, r in zip(*(x.tolist() for x in graph.arcs)):
        add(a, b, c)
        add(b, a, r)

    flow = 0.0
    while True:
        prev = {s: None}
        q = deque([s])
        while q and t not in prev:
            u = q.popleft()
            for v, c in res[u].items():
                if c > 0 and v not in prev:
                    prev[v] = u
                    q.append(v)
        if t not in prev:
            break
        path = []
        v = t
        while prev[v] is not None:
            path.append((prev[v], v))
            v = prev[v]
        b = min(res[u][v] for u, v in path)
        for u, v in path:
            res[u][v] -= b
            res[v][u] += b
        flow += b

    side = np.zeros(n, dtype=bool)
    for v in prev:
        if v < n:
            side[v] = True
    return CutResult(flow, side)


def max_flow(graph: FlowGraph, algorithm: str = "bk") -> CutResult:
    """Maximum flow value and the minimal minimum cut of ``graph``."""
    graph.validate()
    if graph.node_count == 0:
        return CutResult(0.0, np.zeros(0, dtype=bool))
    if algorithm == "bk":
        return _solve_bk(graph)
    if algorithm == "bfs":
        return _solve_bfs(graph)
    raise ParameterError(f"unknown max-flow algorithm {algorithm!r}")
