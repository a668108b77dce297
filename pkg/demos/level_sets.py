"""Level sets of polynomials with real distinct roots.

Runs the randomized verification suite and shows one of the windows where
the diameter form of the sublevel bound falls short: a cap of 1 - x^2.
"""
import json

from harperlab.polylevel import DistinctRootPoly, bound_report, verify

rep = verify(n=8, trials=200, seed=0)
print(json.dumps(rep.violations, indent=2))

p = DistinctRootPoly(-1.0, [-1.0, 1.0])
r = bound_report(p, 0.9, 1.0)
print(f"\n1 - x^2 on (0.9, 1): measure {r.measured:.4f}, Polya {r.polya:.4f}, sublevel {r.sublevel:.4f}")
