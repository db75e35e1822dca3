"""Finite level-N approximations of the three self-similar circuit families.

* ladder: N cells of series inductor / shunt capacitor, closed by a termination.
* sg: modified Sierpinski cell.  A level-N cell on outer corners A, B, C has an
  inductor across each outer pair, a capacitor from each outer corner to the
  matching corner of an inner gasket, and the inner gasket is three level-(N-1)
  cells sharing corners pairwise.
* hanoi: three level-(N-1) pieces (top, bottom-left, bottom-right) scaled by r,
  joined by two capacitors (top piece to each bottom piece) and one inductor
  (between the two bottom pieces).

All builders number nodes deterministically.  Depth-0 pieces are made of
termination elements; a ``short`` termination identifies their terminals.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .circuit import Element, EvalContext, Network, element_impedance, make_network

__all__ = [
    "FamilySpec",
    "TERMINATIONS",
    "build",
    "build_ladder",
    "build_sg",
    "build_hanoi",
    "build_gasket",
    "termination_impedance",
    "trace_value",
]

FAMILIES = ("ladder", "sg", "hanoi")
TERMINATIONS = ("short", "open", "inductor", "fixed")


@dataclass(frozen=True)
class FamilySpec:
    """Parameters of one finite circuit.

    ``termination_value`` is only read for ``termination="fixed"``: a complex
    impedance, or for hanoi optionally a ``(z_v, z_l)`` pair of leg values.
    """

    family: str
    L: float = 1.0
    C: float = 1.0
    r: Optional[float] = None
    depth: int = 0
    termination: str = "short"
    termination_value: object = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not (self.L > 0 and self.C > 0):
            raise ValueError("L and C must be > 0")
        if self.family == "hanoi":
            if self.r is None or not 0 < self.r < 1:
                raise ValueError("hanoi needs 0 < r < 1")
        if int(self.depth) != self.depth or self.depth < 0:
            raise ValueError("depth must be a non-negative integer")
        if self.termination not in TERMINATIONS:
            raise ValueError(f"unknown termination {self.termination!r}")
        if self.termination == "fixed" and self.termination_value is None:
            raise ValueError("fixed termination needs termination_value")

    def fixed_legs(self) -> tuple[complex, complex]:
        """(vertical, lateral) impedances of a fixed termination."""
        v = self.termination_value
        if isinstance(v, (tuple, list)):
            return complex(v[0]), complex(v[1])
        return complex(v), complex(v)


class _Builder:
    """Collects nodes and edges; shorts are tracked with a union-find."""

    def __init__(self):
        self.n = 0
        self.edges: list = []
        self.parent: dict = {}

    def node(self) -> int:
        k = self.n
        self.n += 1
        self.parent[k] = k
        return k

    def find(self, k: int) -> int:
        root = k
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[k] != root:
            self.parent[k], k = root, self.parent[k]
        return root

    def short(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller id as representative so numbering is stable
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def edge(self, a: int, b: int, el: Element) -> None:
        self.edges.append((a, b, el))

    def finish(self, boundary: list) -> Network:
        """Apply shorts, drop self-loops and nodes unreachable from the boundary."""
        edges = []
        for a, b, el in self.edges:
            a, b = self.find(a), self.find(b)
            if a != b:
                edges.append((a, b, el))
        bnd = []
        for b in boundary:
            b = self.find(b)
            if b not in bnd:
                bnd.append(b)
        adj: dict = {}
        for a, b, _ in edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen = set(bnd)
        stack = list(bnd)
        while stack:
            for m in adj.get(stack.pop(), ()):
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        roots = sorted(seen)
        relabel = {old: new for new, old in enumerate(roots)}
        edges = [(relabel[a], relabel[b], el) for a, b, el in edges
                 if a in seen]
        return make_network(range(len(roots)), edges, [relabel[b] for b in bnd])


def _termination_edge(bld: _Builder, spec: FamilySpec, a: int, b: int,
                      value: complex, L: float, eps_weight: float = 1.0) -> None:
    t = spec.termination
    if t == "short":
        bld.short(a, b)
    elif t == "inductor":
        bld.edge(a, b, Element.inductor(L, eps_weight))
    elif t == "fixed":
        bld.edge(a, b, Element.fixed(value))


def build_ladder(spec: FamilySpec) -> Network:
    """Ladder with ``spec.depth`` cells; boundary is (input, return rail)."""
    bld = _Builder()
    rail = bld.node()
    top = bld.node()
    inp = top
    for _ in range(spec.depth):
        nxt = bld.node()
        bld.edge(top, nxt, Element.inductor(spec.L))
        bld.edge(nxt, rail, Element.capacitor(spec.C))
        top = nxt
    z_end = spec.fixed_legs()[0] if spec.termination == "fixed" else None
    _termination_edge(bld, spec, top, rail, z_end, spec.L)
    return bld.finish([inp, rail])


def _sg_cell(bld: _Builder, spec: FamilySpec, a: int, b: int, c: int,
             depth: int) -> None:
    if depth == 0:
        z = spec.fixed_legs()[0] if spec.termination == "fixed" else None
        for u, v in ((a, b), (b, c), (c, a)):
            _termination_edge(bld, spec, u, v, z, spec.L)
        return
    for u, v in ((a, b), (b, c), (c, a)):
        bld.edge(u, v, Element.inductor(spec.L))
    a1, b1, c1 = bld.node(), bld.node(), bld.node()
    m_ab, m_bc, m_ca = bld.node(), bld.node(), bld.node()
    for u, v in ((a, a1), (b, b1), (c, c1)):
        bld.edge(u, v, Element.capacitor(spec.C))
    _sg_cell(bld, spec, a1, m_ab, m_ca, depth - 1)
    _sg_cell(bld, spec, m_ab, b1, m_bc, depth - 1)
    _sg_cell(bld, spec, m_ca, m_bc, c1, depth - 1)


def build_sg(spec: FamilySpec) -> Network:
    """Modified Sierpinski circuit; boundary is the three outer corners."""
    bld = _Builder()
    a, b, c = bld.node(), bld.node(), bld.node()
    _sg_cell(bld, spec, a, b, c, spec.depth)
    return bld.finish([a, b, c])


def _hanoi_piece(bld: _Builder, spec: FamilySpec, depth: int, scale: float):
    """Build a piece whose impedances are ``scale`` times the unscaled piece.

    Returns its (top, left, right) terminals.
    """
    if depth == 0:
        centre, top, left, right = bld.node(), bld.node(), bld.node(), bld.node()
        zv, zl = spec.fixed_legs() if spec.termination == "fixed" else (None, None)
        _termination_edge(bld, spec, centre, top,
                          None if zv is None else scale * zv, scale * spec.L, scale)
        _termination_edge(bld, spec, centre, left,
                          None if zl is None else scale * zl, scale * spec.L, scale)
        _termination_edge(bld, spec, centre, right,
                          None if zl is None else scale * zl, scale * spec.L, scale)
        return top, left, right
    sub = scale * spec.r
    t_top, t_left, t_right = _hanoi_piece(bld, spec, depth - 1, sub)
    l_top, l_left, l_right = _hanoi_piece(bld, spec, depth - 1, sub)
    r_top, r_left, r_right = _hanoi_piece(bld, spec, depth - 1, sub)
    bld.edge(t_left, l_top, Element.capacitor(spec.C / scale, scale))
    bld.edge(t_right, r_top, Element.capacitor(spec.C / scale, scale))
    bld.edge(l_right, r_left, Element.inductor(spec.L * scale, scale))
    return t_top, l_left, r_right


def build_hanoi(spec: FamilySpec) -> Network:
    """Hanoi-type circuit; boundary is (top, left, right).

    An element first appearing at scale k (outermost k = 1) has impedance
    scale r**(k-1), and so does its series regularisation resistance.  The
    depth-0 pieces sit at scale r**N.
    """
    bld = _Builder()
    top, left, right = _hanoi_piece(bld, spec, spec.depth, 1.0)
    return bld.finish([top, left, right])


def build_gasket(level: int, element: Element) -> Network:
    """Plain Sierpinski gasket graph; every smallest triangle side is ``element``.

    Boundary is the three outer corners.
    """
    bld = _Builder()

    def tri(a, b, c, lev):
        if lev == 0:
            for u, v in ((a, b), (b, c), (c, a)):
                bld.edge(u, v, element)
            return
        m_ab, m_bc, m_ca = bld.node(), bld.node(), bld.node()
        tri(a, m_ab, m_ca, lev - 1)
        tri(m_ab, b, m_bc, lev - 1)
        tri(m_ca, m_bc, c, lev - 1)

    a, b, c = bld.node(), bld.node(), bld.node()
    tri(a, b, c, level)
    return bld.finish([a, b, c])


_BUILDERS = {"ladder": build_ladder, "sg": build_sg, "hanoi": build_hanoi}


def build(spec: FamilySpec) -> Network:
    return _BUILDERS[spec.family](spec)


def termination_impedance(spec: FamilySpec, ctx: EvalContext):
    """Characteristic value of the depth-0 circuit, in the form the maps use.

    ladder/sg: a complex impedance; hanoi: a ``(z_v, z_l)`` pair.  Returns
    ``None`` for an open termination (unbounded impedance).
    """
    t = spec.termination
    if t == "open":
        return None
    if t == "short":
        z = (0j, 0j)
    elif t == "inductor":
        zl = element_impedance(Element.inductor(spec.L), ctx)
        z = (zl, zl)
    else:
        z = spec.fixed_legs()
    return z if spec.family == "hanoi" else z[0]


def trace_value(spec: FamilySpec, ctx: EvalContext):
    """Characteristic value of the finite circuit, read off its boundary trace.

    ladder: input impedance; sg: side impedance of the equivalent delta
    (mean of the three sides); hanoi: star legs ``(z_v, z_l)`` with z_l the
    mean of the two lateral legs.  A short that collapses the boundary to one
    node gives zero.
    """
    from .reduce import boundary_trace, delta_to_y

    net = build(spec)
    if len(net.boundary) < 2:
        return (0j, 0j) if spec.family == "hanoi" else 0j
    tr = boundary_trace(net, ctx)
    b = net.boundary
    if spec.family == "ladder":
        return 1 / tr.admittance(b[0], b[1])
    if len(b) < 3:
        raise ValueError("three-terminal family collapsed to two terminals")
    sides = [1 / tr.admittance(u, v) for u, v in ((b[0], b[1]), (b[1], b[2]), (b[2], b[0]))]
    if spec.family == "sg":
        return sum(sides) / 3
    z_top, z_left, z_right = delta_to_y(*sides)
    return z_top, (z_left + z_right) / 2
