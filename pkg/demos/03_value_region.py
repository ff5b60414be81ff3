# The region of possible values F(rN) for harmonic F: B^n -> D with F(0) = rho.
# Support values h(beta) come from extremal problems; the polygon is the
# intersection of the sampled half-planes.  SVG drawings land in ./out.
import os

import numpy as np

from schwarzpick.cli import region_svg
from schwarzpick.region import build_region, contains, witness_function

os.makedirs("out", exist_ok=True)
n, r = 3, 0.5

for rho in (0.0, 0.3, 0.6, 0.9):
    R = build_region(n, r, rho, 256)
    z = R.curve.f
    print(f"rho={rho}: area {R.polygon.area():.6f}  "
          f"real extent [{z.real.min():.6f}, {z.real.max():.6f}]  "
          f"imag extent {z.imag.max():.6f}")
    with open(f"out/region_n{n}_rho{rho}.svg", "w") as fh:
        fh.write(region_svg(R))

# %% a query and the harmonic function that realizes an interior value
R = build_region(n, r, 0.6, 256)
w = 0.75 + 0.1j
print(contains(R, w))
W = witness_function(n, r, 0.6, w, region=R)
print(f"beta1={W.beta1:.6f} beta2={W.beta2:.6f} k1={W.k1:.6f}")
print(f"F(0) = {W.evaluate(0.0):.9f}, F(rN) = {W.evaluate(r):.9f}")

# %% rotation: F(0) = 0.6 i gives the region turned by pi/2
Rot = R.rotated(np.pi / 2)
print(contains(Rot, 1j * w))
