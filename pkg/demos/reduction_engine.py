"""
Reducing impedance networks by node elimination
===============================================

Every interior node can be removed by the star-mesh transform; what is
left between the terminals is the Schur complement of the admittance
matrix.  This script checks a few textbook facts along the way.
"""
import numpy as np

from fraxim import Element, EvalContext, effective_impedance, make_network
from fraxim.families import build_gasket
from fraxim.reduce import boundary_trace, delta_to_y, evaluate, y_to_delta

ctx = EvalContext(omega=1.0)

# a unit resistor triangle seen across one side: 1 || 2 = 2/3
r = Element.resistor(1.0)
tri = make_network("abc", [("a", "b", r), ("b", "c", r), ("c", "a", r)], ("a", "b"))
print("triangle:", effective_impedance(tri, ctx, "a", "b"))

# delta and star are interchangeable
sides = (1 + 2j, 3 - 1j, 0.5 + 0.5j)
legs = delta_to_y(*sides)
print("star legs:", np.round(legs, 6))
print("back to delta:", np.round(y_to_delta(*legs), 6))

# each gasket level multiplies resistance by 5/3
for level in range(4):
    net = build_gasket(level, r)
    a, b, _ = net.boundary
    print(f"gasket level {level}: R_ab = {effective_impedance(net, ctx, a, b).real:.6f}"
          f"  (2/3 * (5/3)^{level} = {2 / 3 * (5 / 3) ** level:.6f})")

# The full three-terminal trace of a level-1 gasket of complex cells is
# again a triangle, with side 5Z/3.
Z = 0.3 + 0.7j
tr = boundary_trace(build_gasket(1, Element.fixed(Z)), ctx)
u, v, _ = tr.boundary
print("trace side:", 1 / tr.admittance(u, v), " 5Z/3 =", 5 * Z / 3)

# comparing with a dense nodal solve on the admittance matrix
g = evaluate(build_gasket(3, Element.fixed(Z)), ctx)
nodes = list(g.adj)
idx = {n: i for i, n in enumerate(nodes)}
Y = np.zeros((len(nodes), len(nodes)), dtype=complex)
for p, row in g.adj.items():
    for q, y in row.items():
        Y[idx[p], idx[q]] -= y
        Y[idx[p], idx[p]] += y
a, b, _ = build_gasket(3, Element.fixed(Z)).boundary
keep = [i for i in range(len(nodes)) if i != idx[b]]
rhs = np.zeros(len(keep), dtype=complex)
rhs[keep.index(idx[a])] = 1
dense = np.linalg.solve(Y[np.ix_(keep, keep)], rhs)[keep.index(idx[a])]
print("level 3 gasket, elimination vs dense solve:",
      abs(effective_impedance(build_gasket(3, Element.fixed(Z)), ctx, a, b) - dense))
