"""
A Sierpinski gasket of inductors and capacitors
===============================================

Each level of the gasket replaces a triangle by three half-size copies,
with an inductor along every outer side and a capacitor linking each
corner to its copy.  Its characteristic impedance is real-positive only
inside a band of frequencies, and the unregularised recursion never
settles there.
"""
import numpy as np

from fraxim import EvalContext, FamilySpec, build, sg_band, sg_Z, trace_value
from fraxim.limits import family_map, iterate

band = sg_band(1.0, 1.0)
print(f"pass band: {band.omega_lo:.6f} < w < {band.omega_hi:.6f}")

for w in (0.5, 1.0, 3.0, 10.0):
    z = sg_Z(w, 1.0, 1.0)
    print(f"w = {w:5.2f}  Z = {z:.6f}  {'inside' if band.contains(w) else 'outside'}")

# a finite gasket is a graph with 3^(N+1) nodes (a short-circuit
# termination would merge the innermost corners, so use inductors here)
for n in range(5):
    net = build(FamilySpec("sg", depth=n, termination="inductor"))
    print(f"level {n}: {len(net.nodes):4d} nodes, {len(net.edges):4d} elements")

# Without loss the level-to-level map is a rotation about the fixed point:
# the orbit from a finite start keeps its distance forever.
bare = iterate(family_map("sg", EvalContext(1.0, 0.0)), 1 + 0j, max_iter=10_000)
orbit = np.array(bare.history)
target = sg_Z(1.0, 1.0, 1.0)
print(f"eps = 0:    {bare.status}; distance to Z stays in "
      f"[{np.abs(orbit - target).min():.3f}, {np.abs(orbit - target).max():.3f}]")

lossy = iterate(family_map("sg", EvalContext(1.0, 1e-3)), 0j)
print(f"eps = 1e-3: {lossy.status} after {lossy.iterations} levels, "
      f"|Z_eps - Z| = {abs(lossy.value - target):.2e}")

# The same map evaluated by brute-force network reduction.  Six levels are
# far from enough at eps = 1e-3: the recursion is nearly neutral and needs
# hundreds of levels, which is why the iteration above is the practical oracle.
for n in (2, 4, 6):
    z = trace_value(FamilySpec("sg", depth=n), EvalContext(1.0, 1e-3))
    print(f"network level {n}: Z = {z:.5f}")
