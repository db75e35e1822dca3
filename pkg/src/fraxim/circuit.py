"""Circuit elements, evaluation contexts and finite networks.

A :class:`Network` is an immutable multigraph whose edges carry two-terminal
:class:`Element` objects.  Elements become complex impedances only when
evaluated at an :class:`EvalContext` (angular frequency plus an optional
series regularisation resistance).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

__all__ = [
    "CircuitError",
    "NetworkError",
    "ResonanceError",
    "OpenCircuitError",
    "Element",
    "EvalContext",
    "Network",
    "element_impedance",
    "make_network",
    "merge_nodes",
    "network_to_json",
    "network_from_json",
]

KINDS = ("resistor", "inductor", "capacitor", "fixed")


class CircuitError(Exception):
    """Base class for all errors raised by this package."""


class NetworkError(CircuitError, ValueError):
    """Malformed network: disconnected, self-loop, unknown node..."""


class ResonanceError(CircuitError, ArithmeticError):
    """A pivot or impedance sum vanished (anti-resonance at this frequency)."""


class OpenCircuitError(CircuitError, ArithmeticError):
    """Two terminals are not coupled: the effective admittance vanished."""


@dataclass(frozen=True)
class EvalContext:
    omega: float
    epsilon: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega!r}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon!r}")


@dataclass(frozen=True)
class Element:
    """Two-terminal element.

    ``eps_weight`` multiplies the regularisation resistance that an
    inductor or capacitor picks up at evaluation time.  Builders that rescale
    whole sub-circuits (the Hanoi family) set it so that the rescaling also
    applies to the series resistance.
    """

    kind: str
    value: complex
    eps_weight: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        if self.kind == "fixed":
            object.__setattr__(self, "value", complex(self.value))
        else:
            v = self.value
            if isinstance(v, complex):
                if v.imag != 0:
                    raise ValueError(f"{self.kind} value must be real")
                v = v.real
            v = float(v)
            if self.kind == "resistor" and not v >= 0:
                raise ValueError("resistance must be >= 0")
            if self.kind in ("inductor", "capacitor") and not v > 0:
                raise ValueError(f"{self.kind} value must be > 0")
            object.__setattr__(self, "value", v)
        if not self.eps_weight >= 0:
            raise ValueError("eps_weight must be >= 0")

    @classmethod
    def resistor(cls, R: float) -> "Element":
        return cls("resistor", R)

    @classmethod
    def inductor(cls, L: float, eps_weight: float = 1.0) -> "Element":
        return cls("inductor", L, eps_weight)

    @classmethod
    def capacitor(cls, C: float, eps_weight: float = 1.0) -> "Element":
        return cls("capacitor", C, eps_weight)

    @classmethod
    def fixed(cls, Z: complex) -> "Element":
        return cls("fixed", Z)

    def impedance(self, ctx: EvalContext) -> complex:
        return element_impedance(self, ctx)

    def to_json(self) -> dict:
        if self.kind == "fixed":
            return {"kind": "fixed", "value": [self.value.real, self.value.imag]}
        d = {"kind": self.kind, "value": self.value}
        if self.eps_weight != 1.0:
            d["eps_weight"] = self.eps_weight
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Element":
        value = d["value"]
        if isinstance(value, (list, tuple)):
            value = complex(value[0], value[1])
        return cls(d["kind"], value, d.get("eps_weight", 1.0))


def element_impedance(e: Element, ctx: EvalContext) -> complex:
    """Impedance of ``e`` at ``ctx``; inductors and capacitors carry ε in series."""
    w = ctx.omega
    if e.kind == "resistor":
        return complex(e.value)
    if e.kind == "inductor":
        return complex(e.eps_weight * ctx.epsilon, w * e.value)
    if e.kind == "capacitor":
        return complex(e.eps_weight * ctx.epsilon, -1.0 / (w * e.value))
    return e.value


Edge = tuple  # (u, v, Element)


@dataclass(frozen=True)
class Network:
    nodes: tuple
    edges: tuple
    boundary: tuple

    def __len__(self):
        return len(self.nodes)

    def neighbours(self) -> dict:
        adj: dict = {n: [] for n in self.nodes}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def _is_connected(nodes: Sequence[Hashable], edges: Iterable[Edge]) -> bool:
    if not nodes:
        return True
    adj: dict = {n: [] for n in nodes}
    for u, v, _ in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {nodes[0]}
    todo = deque([nodes[0]])
    while todo:
        n = todo.popleft()
        for m in adj[n]:
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return len(seen) == len(nodes)


def make_network(nodes: Iterable[Hashable], edges: Iterable[Edge],
                 boundary: Iterable[Hashable]) -> Network:
    """Validate and freeze a network.

    Raises :class:`NetworkError` for duplicate or unknown nodes, self-loops,
    repeated boundary nodes, or a disconnected graph.
    """
    nodes = tuple(nodes)
    node_set = set(nodes)
    if len(node_set) != len(nodes):
        raise NetworkError("duplicate node ids")
    frozen_edges = []
    for edge in edges:
        u, v, el = edge
        if u not in node_set or v not in node_set:
            raise NetworkError(f"edge ({u!r}, {v!r}) names an unknown node")
        if u == v:
            raise NetworkError(f"self-loop at node {u!r}")
        if not isinstance(el, Element):
            raise NetworkError(f"edge ({u!r}, {v!r}) does not carry an Element")
        frozen_edges.append((u, v, el))
    boundary = tuple(boundary)
    if len(set(boundary)) != len(boundary):
        raise NetworkError("boundary nodes must be pairwise distinct")
    for b in boundary:
        if b not in node_set:
            raise NetworkError(f"boundary node {b!r} not in node set")
    if not _is_connected(nodes, frozen_edges):
        raise NetworkError("network is disconnected")
    return Network(nodes, tuple(frozen_edges), boundary)


def merge_nodes(net: Network, a: Hashable, b: Hashable) -> Network:
    """Identify node ``b`` with node ``a`` (a zero-impedance short).

    Edges between the two are dropped; the merged node keeps the id ``a``.
    """
    if a not in net.nodes or b not in net.nodes:
        raise NetworkError("merge_nodes: both nodes must belong to the network")
    if a == b:
        return net
    nodes = tuple(n for n in net.nodes if n != b)
    edges = []
    for u, v, el in net.edges:
        u = a if u == b else u
        v = a if v == b else v
        if u != v:
            edges.append((u, v, el))
    boundary = []
    for n in net.boundary:
        n = a if n == b else n
        if n not in boundary:
            boundary.append(n)
    return make_network(nodes, edges, boundary)


def network_to_json(net: Network, **kwargs: Any) -> str:
    doc = {
        "nodes": list(net.nodes),
        "edges": [[u, v, el.to_json()] for u, v, el in net.edges],
        "boundary": list(net.boundary),
    }
    return json.dumps(doc, **kwargs)


def network_from_json(text: str | dict) -> Network:
    doc = json.loads(text) if isinstance(text, str) else text
    edges = [(u, v, Element.from_json(e)) for u, v, e in doc["edges"]]
    return make_network(doc["nodes"], edges, doc["boundary"])
