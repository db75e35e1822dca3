"""
How finite networks approach the infinite one
=============================================

Tabulates Z_{N,eps} from actual finite networks, the same table the
``fraxim converge`` command writes, and shows that only the lossy columns
settle.
"""
from fraxim import EvalContext, FamilySpec, ladder_Z, trace_value

target = ladder_Z(1.0, 1.0, 1.0)
print(f"{'N':>6} {'eps=0':>12} {'eps=1e-2':>12} {'eps=1e-3':>12}")
for n in (10, 50, 100, 200, 400, 800, 1600):
    errs = []
    for eps in (0.0, 1e-2, 1e-3):
        try:
            z = trace_value(FamilySpec("ladder", depth=n), EvalContext(1.0, eps))
            errs.append(f"{abs(z - target):12.3e}")
        except ArithmeticError:
            errs.append(f"{'resonant':>12}")
    print(f"{n:6d} " + " ".join(errs))

# The lossless column never settles: a finite LC ladder is a pure
# reactance.  At w = 1 the one-cell map has period three on the imaginary
# axis (0 -> i -> infinity -> 0), so every third depth is exactly resonant.  The eps = 1e-2
# column stops at an O(eps) offset from the lossless closed form.
z = trace_value(FamilySpec("ladder", depth=100), EvalContext(1.0, 0.0))
print("lossless, N = 100:", z)

# The choice of termination is forgotten once there is loss.
for n in (100, 400, 1600):
    zs = [trace_value(FamilySpec("ladder", depth=n, termination=t), EvalContext(1.0, 1e-2))
          for t in ("short", "open")]
    print(f"N = {n:5d}: |Z_short - Z_open| = {abs(zs[0] - zs[1]):.2e}")
