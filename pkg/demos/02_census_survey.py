"""
Thinness across the bundled census
==================================

Computes every census entry up to a crossing bound and tallies the H- and
T-classes.  ``python demos/02_census_survey.py 8`` takes a few seconds; the
default bound 10 covers all prime knots up to 10 crossings and takes a
few minutes.
"""

import sys
import time
from collections import Counter

from khtorsion import bundled_census, compute_homology, classify
from khtorsion.verify import scan_conjectures

limit = int(sys.argv[1]) if len(sys.argv) > 1 else 10

entries = [e for e in bundled_census() if e.diagram.n_crossings <= limit]
print(f"{len(entries)} census entries with at most {limit} crossings")

t0 = time.perf_counter()
results = []
for e in entries:
    t = compute_homology(e.diagram, reduced=True, primes=(2,))
    results.append((e, t, classify(t)))
print(f"computed in {time.perf_counter() - t0:.1f}s")

tally = Counter((r.h_class, r.t_class) for _, _, r in results)
for (h, tc), n in sorted(tally.items()):
    print(f"  {h:8s} {tc:8s} {n}")

# the thick ones, by crossing number
thick = [(e.diagram.n_crossings, e.name, r.verdict()) for e, _, r in results
         if r.h_class == "H-thick" and not e.meta.same_as]
print("\nH-thick entries:")
for n, name, v in sorted(thick):
    print(f"  {name:12s} {v}")

# torsion orders seen anywhere
orders = Counter(q for _, t, _ in results for q in t.torsion_orders())
print("\ntorsion orders:", dict(orders))

print("\nconjecture scan:")
for c in scan_conjectures((t, r) for _, t, r in results):
    print(f"  {c.check_name}: {c.detail}")
