"""Exact reduction of complex-impedance networks.

Everything here works on admittances.  Interior nodes are removed by the
star-mesh transform, which is Gaussian elimination (a Schur complement) on
the nodal admittance matrix written in graph form: removing node ``k`` with
neighbour admittances ``y_kj`` adds ``y_ki * y_kj / sum_j y_kj`` between every
pair of its neighbours.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .circuit import (
    EvalContext,
    Network,
    NetworkError,
    OpenCircuitError,
    ResonanceError,
    element_impedance,
)

__all__ = [
    "PIVOT_RTOL",
    "WeightedGraph",
    "series",
    "parallel",
    "delta_to_y",
    "y_to_delta",
    "evaluate",
    "eliminate_node",
    "effective_impedance",
    "graph_impedance",
    "boundary_trace",
]

PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric admittance graph.

    ``adj[u][v]`` is the total admittance (siemens) between ``u`` and ``v``;
    the mapping is kept symmetric.  Treat instances as read-only.
    """

    adj: Mapping
    boundary: tuple = ()

    @property
    def nodes(self) -> tuple:
        return tuple(self.adj)

    def admittance(self, u: Hashable, v: Hashable) -> complex:
        return self.adj[u].get(v, 0j)

    def edges(self) -> list:
        """Edges ``(u, v, y)`` with ``u`` listed before ``v`` in node order."""
        pos = {n: i for i, n in enumerate(self.adj)}
        out = []
        for u, row in self.adj.items():
            for v, y in row.items():
                if pos[u] < pos[v]:
                    out.append((u, v, y))
        return out

    def copy_adj(self) -> dict:
        return {u: dict(row) for u, row in self.adj.items()}

    def to_json(self, **kwargs) -> str:
        doc = {
            "nodes": list(self.adj),
            "edges": [[u, v, {"admittance": [y.real, y.imag]}]
                      for u, v, y in self.edges()],
            "boundary": list(self.boundary),
        }
        return json.dumps(doc, **kwargs)


def series(z1: complex, z2: complex) -> complex:
    return z1 + z2


def _check_sum(s: complex, *parts: complex) -> None:
    scale = max(abs(p) for p in parts)
    if abs(s) <= PIVOT_RTOL * scale:
        raise ResonanceError(f"impedance sum {s!r} vanishes (resonant pair)")


def parallel(z1: complex, z2: complex) -> complex:
    """Parallel combination ``z1*z2/(z1+z2)``; resonant pairs raise."""
    s = z1 + z2
    if z1 == 0 and z2 == 0:
        return 0j
    _check_sum(s, z1, z2)
    return z1 * z2 / s


def delta_to_y(z_ab: complex, z_bc: complex, z_ca: complex):
    """Delta sides -> star legs ``(z_a, z_b, z_c)``."""
    s = z_ab + z_bc + z_ca
    _check_sum(s, z_ab, z_bc, z_ca)
    return z_ab * z_ca / s, z_ab * z_bc / s, z_bc * z_ca / s


def y_to_delta(z_a: complex, z_b: complex, z_c: complex):
    """Star legs -> delta sides ``(z_ab, z_bc, z_ca)``."""
    p = z_a * z_b + z_b * z_c + z_c * z_a
    scale = max(abs(z_a), abs(z_b), abs(z_c))
    for leg in (z_a, z_b, z_c):
        if abs(leg) <= PIVOT_RTOL * scale or scale == 0:
            raise ResonanceError("star leg vanishes; delta side is unbounded")
    return p / z_c, p / z_a, p / z_b


def evaluate(net: Network, ctx: EvalContext) -> WeightedGraph:
    """Turn every element into an admittance at ``ctx``; parallel edges add."""
    adj: dict = {n: {} for n in net.nodes}
    for u, v, el in net.edges:
        z = element_impedance(el, ctx)
        if z == 0:
            raise ResonanceError(
                f"element on ({u!r}, {v!r}) has zero impedance; merge its nodes instead")
        y = 1.0 / z
        adj[u][v] = adj[u].get(v, 0j) + y
        adj[v][u] = adj[v].get(u, 0j) + y
    return WeightedGraph(adj, tuple(net.boundary))


def _pivot(row: Mapping) -> complex:
    s = sum(row.values(), 0j)
    scale = max((abs(y) for y in row.values()), default=0.0)
    if scale == 0 or abs(s) < PIVOT_RTOL * scale:
        raise ResonanceError(f"node admittance sum {s!r} vanishes")
    return s


def _eliminate_inplace(adj: dict, k: Hashable) -> None:
    row = adj[k]
    s = _pivot(row)
    del adj[k]
    items = list(row.items())
    for i, _ in items:
        del adj[i][k]
    for a, (i, yi) in enumerate(items):
        f = yi / s
        ri = adj[i]
        for j, yj in items[a + 1:]:
            w = f * yj
            ri[j] = ri.get(j, 0j) + w
            rj = adj[j]
            rj[i] = rj.get(i, 0j) + w


def eliminate_node(g: WeightedGraph, k: Hashable) -> WeightedGraph:
    """Star-mesh removal of interior node ``k``; returns a new graph."""
    if k in g.boundary:
        raise ValueError(f"cannot eliminate boundary node {k!r}")
    if k not in g.adj:
        raise KeyError(k)
    adj = g.copy_adj()
    _eliminate_inplace(adj, k)
    return WeightedGraph(adj, g.boundary)


def _reduce(adj: dict, keep: Iterable[Hashable], order=None) -> None:
    """Eliminate every node not in ``keep`` from ``adj`` in place.

    Without an explicit ``order`` the next pivot is the interior node of
    smallest current degree; a node whose pivot is singular is deferred until
    fill-in from later eliminations has changed it.
    """
    keep = set(keep)
    if order is not None:
        for k in order:
            if k in keep:
                raise ValueError(f"order names kept node {k!r}")
            _eliminate_inplace(adj, k)
        left = [n for n in adj if n not in keep]
        if left:
            raise ValueError(f"order leaves interior nodes {left[:5]!r}")
        return

    rank = {n: i for i, n in enumerate(adj)}
    heap = [(len(row), rank[n], n) for n, row in adj.items() if n not in keep]
    heapq.heapify(heap)
    deferred: dict = {}
    while heap:
        deg, _, k = heapq.heappop(heap)
        row = adj.get(k)
        if row is None or len(row) != deg or k in deferred:
            continue
        try:
            nbrs = list(row)
            _eliminate_inplace(adj, k)
        except ResonanceError:
            deferred[k] = None
            continue
        for n in nbrs:
            if n in keep:
                continue
            deferred.pop(n, None)
            heapq.heappush(heap, (len(adj[n]), rank[n], n))
    for k in list(deferred):
        _eliminate_inplace(adj, k)


def boundary_trace(net: Network | WeightedGraph, ctx: EvalContext | None = None,
                   order=None) -> WeightedGraph:
    """Equivalent complete network on the boundary terminals.

    ``order`` optionally fixes the elimination sequence of interior nodes.
    """
    g = net if isinstance(net, WeightedGraph) else evaluate(net, ctx)
    if len(g.boundary) < 2:
        raise NetworkError("boundary_trace needs at least two boundary nodes")
    adj = g.copy_adj()
    _reduce(adj, g.boundary, order)
    ordered = {b: adj[b] for b in g.boundary}
    return WeightedGraph(ordered, g.boundary)


def graph_impedance(g: WeightedGraph, a: Hashable, b: Hashable) -> complex:
    """Effective impedance between nodes ``a`` and ``b`` of an admittance graph."""
    if a == b:
        raise ValueError("terminals must be distinct")
    if a not in g.adj or b not in g.adj:
        raise KeyError((a, b))
    scale = max((abs(y) for row in g.adj.values() for y in row.values()), default=0.0)
    adj = g.copy_adj()
    _reduce(adj, (a, b))
    y = adj[a].get(b, 0j)
    if scale == 0 or abs(y) < PIVOT_RTOL * scale:
        raise OpenCircuitError(f"no coupling between {a!r} and {b!r}")
    return 1.0 / y


def effective_impedance(net: Network, ctx: EvalContext, a: Hashable, b: Hashable) -> complex:
    """Two-terminal impedance between ``a`` and ``b`` (unit current injection)."""
    return graph_impedance(evaluate(net, ctx), a, b)
