"""
The Hanoi-graph circuit and its scaling ratio r
===============================================

Three copies of the circuit, shrunk by r, are joined by two capacitors and
one inductor.  At r = 1/2 the lateral impedance 2 sqrt(L/C) does not
depend on frequency at all.  For other r below 3/5 there is a finite pass
band, and from 3/5 on the self-consistent impedances are only formal.
"""
from fraxim import EvalContext, FamilySpec, hanoi_band, hanoi_gamma, hanoi_solve, trace_value
from fraxim.closedform import hanoi_residuals
from fraxim.limits import double_limit

# an all-pass network
for w in (0.01, 1.0, 100.0):
    sol = hanoi_solve(w, 4.0, 1.0, 0.5)
    print(f"r = 1/2, w = {w:6.2f}: z_l = {sol.z_l:.6f}, z_v = {sol.z_v:.6f}")

# band edges as r varies
for r in (0.2, 0.4, 0.45, 0.55, 0.59, 0.6, 0.7):
    band = hanoi_band(r, 1.0, 1.0)
    if band.nonempty:
        g = hanoi_gamma(r)
        print(f"r = {r:4.2f}: gamma = {g:8.3f}, band {band.omega_lo:.4f} .. {band.omega_hi:.4f}")
    else:
        print(f"r = {r:4.2f}: no pass band")

# the two-impedance fixed point at r = 0.4 and its residuals
sol = hanoi_solve(1.0, 1.0, 1.0, 0.4)
print("r = 0.4, w = 1:", sol, "residuals", hanoi_residuals(sol, 1.0, 1.0, 1.0, 0.4))

# checked against the lossy recursion
lim = double_limit("hanoi", 1.0, r=0.4, eps_schedule=(1e-3, 1e-4, 1e-5))
for eps, (zv, zl) in lim.sequence:
    print(f"eps = {eps:g}: z_l = {zl:.6f}")

# Beyond r = 3/5 the lossy recursion itself runs away.
sol = hanoi_solve(1.0, 1.0, 1.0, 0.7)
print(f"r = 0.7: z_l = {sol.z_l:.6f}, physical = {sol.physical}")

# finite Hanoi networks: 4 * 3^N nodes, approaching the limit only slowly
for n in (2, 4, 6, 8):
    zv, zl = trace_value(FamilySpec("hanoi", r=0.5, depth=n), EvalContext(1.0, 1e-3))
    print(f"depth {n}: z_l = {zl:.4f}  (limit 2)")
