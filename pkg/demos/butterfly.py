"""Periodic-approximant spectra of the critical almost Mathieu operator.

Prints the union-over-phase spectrum for every reduced p/q with q <= 8 and
writes the full table as CSV when a path is given.
"""
import sys

from harperlab.potential import make_amo
from harperlab.spectra import butterfly_table

QMAX = 8

table = butterfly_table(make_amo(1.0), QMAX)
print(f"{len(table)} frequencies with q <= {QMAX}")
for (p, q), s in table:
    bars = " ".join(f"[{a:+.3f},{b:+.3f}]" for a, b in s)
    print(f"{p:>2}/{q:<2} |S+| = {s.measure:6.3f}  {bars}")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w", encoding="utf-8") as fh:
        fh.write("p,q,lo,hi\n")
        for (p, q), s in table:
            for a, b in s:
                fh.write(f"{p},{q},{a!r},{b!r}\n")
    print("wrote", sys.argv[1])
