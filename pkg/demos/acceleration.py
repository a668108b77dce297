"""Lyapunov exponent of the complexified cocycle and its quantized slope.

For coupling 0.5 the exponent vanishes on the spectrum until the phase
shift reaches log(2)/(2 pi) and then grows with slope 2 pi.  For coupling
2 it starts at log 2 and has slope 2 pi from the start.
"""
import math

import numpy as np

from harperlab.cocycle import acceleration, local_profile, lyapunov_rational
from harperlab.potential import make_amo

PQ = (13, 21)

for lam, E in ((0.5, 0.2), (2.0, 0.4)):
    v = make_amo(lam)
    print(f"\ncoupling {lam}, E = {E}, frequency {PQ[0]}/{PQ[1]}")
    for eps in np.linspace(0.0, 0.4, 9):
        print(f"  eps = {eps:.2f}  L = {lyapunov_rational(v, PQ, E, eps):.6f}")
    for eps0 in (0.05, 0.2, 0.4):
        acc = acceleration(local_profile(v, PQ, E, eps0, 0.02), eps0)
        print(f"  acceleration at {eps0}: {acc.omega_raw:+.4f} -> {acc.omega}")

print(f"\nkink for coupling 0.5 expected at eps = {math.log(2) / (2 * math.pi):.4f}")
