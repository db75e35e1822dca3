"""
The infinite LC ladder as a low-pass filter
===========================================

Series inductors and shunt capacitors repeated forever.  Below the
crossover w^2 L C = 4 the input impedance has a positive real part (the
ladder absorbs power although every element is lossless); above it the
impedance is purely imaginary and waves die out along the chain.
"""
import numpy as np

from fraxim import EvalContext, FamilySpec, ladder_Z, ladder_alpha, trace_value
from fraxim.limits import double_limit

L = C = 1.0

# closed form and the per-cell propagation factor
print(f"{'omega':>6} {'Z':>24} {'|alpha|':>8}")
for w in (0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 6.0):
    z = ladder_Z(w, L, C)
    print(f"{w:6.2f} {z.real:11.6f}{z.imag:+11.6f}j {abs(ladder_alpha(w, L, C)):8.5f}")

# The closed form is the eps -> 0 limit of finite, slightly lossy ladders.
# At w = 1 the lossy ladder forgets its termination slowly, so a long
# chain is needed before the finite network matches the infinite one.
ctx = EvalContext(1.0, 1e-3)
for n in (30, 300, 3000):
    z = trace_value(FamilySpec("ladder", L=L, C=C, depth=n), ctx)
    print(f"N = {n:5d}: Z = {z:.6f}   |Z - Z_inf| = {abs(z - ladder_Z(1.0, L, C)):.2e}")

# the same limit through the one-cell map, without building any network
res = double_limit("ladder", 1.0, eps_schedule=(1e-1, 1e-2, 1e-3))
for eps, z in res.sequence:
    print(f"eps = {eps:g}: fixed point {z:.6f}")

# a sampled magnitude response: power delivered into the ladder
ws = np.linspace(0.05, 4, 80)
re = np.array([ladder_Z(w, L, C).real for w in ws])
print("pass band ends near w =", ws[re > 0].max().round(3), "(2/sqrt(LC) = 2)")
