"""Dual finite sections against the Floquet spectrum, and decay of dual states.

The union over dual phases of fattened section eigenvalues approaches the
union spectrum of the direct operator; the distance tracks the fatten
radius 10/N.  Dual eigenvectors at coupling 0.5 decay at rate near log 2.
"""
import math

import numpy as np

from harperlab.duality import decay_fit, dual_section, invariance_check, scaling_check
from harperlab.potential import make_amo

v = make_amo(0.5)
for pq in ((1, 2), (1, 3)):
    for N in (200, 400, 800):
        r = invariance_check(v, pq, N=N)
        print(f"beta = {pq[0]}/{pq[1]}  N = {N:4d}  distance = {r.distance:.5f}  (10/N = {10 / N:.5f})")

s = scaling_check(0.5, (1, 2))
print(f"\nscaling identity: closed form {s.closed_form_distance:.1e}, numeric {s.numeric_distance:.1e}")

sec = dual_section(v, (233, 377), 0.1, 100)
_, vecs = sec.eigenpairs()
gammas = [decay_fit(vecs[:, k], center="peak").gamma for k in range(vecs.shape[1])
          if abs(int(np.argmax(np.abs(vecs[:, k]))) - 100) <= 50]
print(f"\nmedian decay rate {np.median(gammas):.4f} over {len(gammas)} states; log 2 = {math.log(2):.4f}")
