"""Intersection and union spectra along golden-mean convergents.

At coupling 0.5 the intersection keeps measure 4 - 4*0.5 = 2 at every
approximant while the union shrinks towards it.  The tail diagnostics
(limsup minus liminf, consecutive symmetric differences) both decrease.
"""
from harperlab.numtheory import Frequency, cf_expand
from harperlab.potential import make_amo
from harperlab.spectra import set_limit, spectral_set

v = make_amo(0.5)
seq = list(cf_expand(Frequency.golden(), 8))

for mode in ("intersection", "union"):
    sets = [spectral_set(v, pq, mode) for pq in seq]
    print(f"\n{mode}")
    print("  p/q      measure   tail gap   step to next")
    for i, (pq, s) in enumerate(zip(seq, sets)):
        gap = set_limit(sets, i)[2] if i + 2 <= len(sets) else float("nan")
        step = (s ^ sets[i + 1]).measure if i + 1 < len(sets) else float("nan")
        print(f"  {pq[0]:>2}/{pq[1]:<3} {s.measure:9.5f} {gap:10.5f} {step:12.5f}")
