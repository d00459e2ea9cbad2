"""
Knots whose torsion is unusual
==============================

8_19 (first H-thick, first T-thick), 9_42 (H-thick but T-thin), and with
``--stretch`` also 13n_3663 (T-rich, four diagonals) and the (4,5)-torus
knot (torsion of order 4).  The stretch pair takes a few minutes.
"""

import sys

from khtorsion import bundled_census, compute_homology, classify
from khtorsion.render import render_table

names = ["8_19", "9_42"]
pool = {e.name: e for e in bundled_census()}
if "--stretch" in sys.argv:
    pool.update({e.name: e for e in bundled_census("stretch")})
    names += ["13n_3663", "T(4,5)"]

for name in names:
    d = pool[name].diagram
    t = compute_homology(d, reduced=True, primes=(), cap=None)
    r = classify(t)
    print(f"== {name}  ({d.n_crossings} crossings, {t.generators} generators, "
          f"{t.seconds:.1f}s)")
    print(render_table(t.groups, t.reduced))
    print("verdict:", r.verdict())
    print("s =", r.s_value, "  Kh' =", r.knight_poly)
    print("why:", r.reason)
    if r.excess:
        print("excess torsion at", r.excess)
    print("torsion orders:", t.torsion_orders())
    print("reduced torsion:", any(g.has_torsion for g in t.reduced.values()))
    print()
