"""
Side structures: Lee's differential and the mod-2 sequence
==========================================================

Lee's Phi + d has homology of dimension 2^m over Z_p for odd p, whatever
the link.  Over Z_2, nu and X give an exact sequence whose shadow is that
alternating sums of mod-2 Betti numbers vanish column by column.
"""

from khtorsion import bundled_census, compute_homology
from khtorsion.verify import (check_chain_identities, check_gn_acyclic, check_lee_dimension,
                              check_z2_exactness)

pool = {e.name: e.diagram for e in bundled_census()}

for name in ["3_1", "4_1", "L2a1{1}", "L4a1{0}", "5_2", "8_19", "L6a4{0,0}"]:
    d = pool[name]
    lee = check_lee_dimension(d, 3, assert_dim=False)
    print(f"{name:10s} m={d.m_components}  {lee.detail}")

print()
for name in ["3_1", "8_19"]:
    d = pool[name]
    t = compute_homology(d, primes=(2,))
    z2 = check_z2_exactness(d, t)
    print(f"{name}: {z2.detail}")
    for c in check_chain_identities(d, primes=(3,)):
        print(f"   {c.check_name:28s} {'ok' if c.passed else c.detail}")

print()
for n in (1, 2, 6, 10):
    print(check_gn_acyclic(n).subject, check_gn_acyclic(n).detail)
