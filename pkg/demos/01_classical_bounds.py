# Classical bound: the Poisson integral of +1 / -1 on the two hemispheres,
# evaluated at rN.  For the disk it is Heinz's (4/pi) arctan r; in B^3 it has
# an elementary closed form.  In higher dimensions it grows with n.
import numpy as np

from schwarzpick.poisson import classical_schwarz_bound
from schwarzpick.reference import heinz_bound, hemisphere_bound_3d

radii = [0.1, 0.25, 0.5, 0.75, 0.9]

print("r      n=2 quad    (4/pi)atan r   n=3 quad    closed form")
for r in radii:
    print(f"{r:<6} {classical_schwarz_bound(2, r):.9f} {heinz_bound(r):.9f}    "
          f"{classical_schwarz_bound(3, r):.9f} {hemisphere_bound_3d(r):.9f}")

# %% growth with the dimension at fixed r
r = 0.5
dims = np.arange(2, 13)
vals = [classical_schwarz_bound(int(n), r) for n in dims]
print()
print("n   U(rN) at r = 0.5")
for n, v in zip(dims, vals):
    print(f"{n:<3} {v:.9f}")
