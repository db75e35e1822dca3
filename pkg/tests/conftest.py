import sys

import numpy as np
import pytest

from fraxim.circuit import Element, make_network


def dense_impedance(net_or_graph, a, b, ctx=None):
    """Independent oracle: ground ``b``, inject 1 A at ``a``, solve the nodal system."""
    from fraxim.reduce import WeightedGraph, evaluate

    g = net_or_graph if isinstance(net_or_graph, WeightedGraph) else evaluate(net_or_graph, ctx)
    nodes = list(g.adj)
    idx = {n: i for i, n in enumerate(nodes)}
    Y = np.zeros((len(nodes), len(nodes)), dtype=complex)
    for u, row in g.adj.items():
        for v, y in row.items():
            Y[idx[u], idx[v]] -= y
            Y[idx[u], idx[u]] += y
    keep = [i for i in range(len(nodes)) if i != idx[b]]
    rhs = np.zeros(len(keep), dtype=complex)
    rhs[keep.index(idx[a])] = 1.0
    v = np.linalg.solve(Y[np.ix_(keep, keep)], rhs)
    return v[keep.index(idx[a])]


def random_positive_z(rng, size=None):
    re = rng.uniform(0.1, 2.0, size)
    im = rng.uniform(-2.0, 2.0, size)
    return re + 1j * im


def random_network(rng, n_nodes, extra_edges, boundary_size=2):
    """Connected random multigraph of fixed(Z) edges with Re Z > 0."""
    nodes = list(range(n_nodes))
    edges = []
    for k in range(1, n_nodes):
        edges.append((int(rng.integers(0, k)), k))
    while len(edges) < n_nodes - 1 + extra_edges:
        u, v = rng.choice(n_nodes, size=2, replace=False)
        edges.append((int(u), int(v)))
    zs = random_positive_z(rng, len(edges))
    boundary = [int(x) for x in rng.choice(n_nodes, size=boundary_size, replace=False)]
    return make_network(nodes, [(u, v, Element.fixed(z)) for (u, v), z in zip(edges, zs)],
                        boundary)


@pytest.fixture
def rng():
    return np.random.default_rng(20140515)


@pytest.fixture
def unit_triangle():
    r1 = Element.resistor(1.0)
    return make_network("abc", [("a", "b", r1), ("b", "c", r1), ("c", "a", r1)], ("a", "b"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.verdict_lines():
        terminalreporter.write_line(line)
