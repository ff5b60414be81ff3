# Extremal boundary functions.  For b > 0 the maximizer of U(rN) with mean a
# and int sqrt(1-u^2) >= b is u = A/sqrt(1+A^2); as b -> 0 it collapses onto
# the step function of a polar cap.
import numpy as np

from schwarzpick.extremal import build_extremal
from schwarzpick.poisson import evaluate_F_on_axis, functional_L

n, r, a = 3, 0.5, 0.3
t = np.linspace(-1, 1, 9)

for b in (0.9, 0.5, 0.1, 1e-3, 0.0):
    p = build_extremal(n, r, a, b)
    extra = (f"lambda={p.params.lam:.6f} mu={p.params.mu:.3e}" if p.kind == "smooth"
             else f"t_a={p.cap.t_a:.6f}")
    print(f"b={b:<6} {p.kind:6s} {extra}  L={functional_L(p, n, r):.9f}")
    print("   u(t):", np.array2string(p.u(t), precision=4, suppress_small=True))

# %% the extremal harmonic function along the axis: F(0) = a + ib, increasing real part
p = build_extremal(n, r, a, 0.4)
for s in (0.0, 0.125, 0.25, 0.375, 0.5, 0.75):
    print(f"F({s:<5} N) = {evaluate_F_on_axis(p, s):.9f}")
