"""
Homology tables: integral, reduced and mod-p Khovanov homology of a diagram.

One Smith normal form per boundary matrix; H^{i,j} is read off from the
forms of the incoming and outgoing maps.  Mod-p Betti numbers come from
separate mod-p eliminations so they can be cross-checked against the
integral answer through universal coefficients.
"""

from dataclasses import dataclass, field
import time

from .complex import DEFAULT_CAP, KhovanovComplex
from .diagram import LinkDiagram, LinkMetadata, linking_numbers
from .linalg import (AbelianGroup, SmithForm, homology_from_smith, rank_mod_p,
                     smith_normal_form)

__all__ = ["HomologyTable", "compute_homology", "diagonal", "EMPTY"]

EMPTY = AbelianGroup()
_NO_MAP = SmithForm(())


def diagonal(i, j):
    """b = 2i - j."""
    return 2 * i - j


@dataclass
class HomologyTable:
    """Khovanov homology of one link, keyed by bidegree.

    Only nonzero groups are stored.  ``reduced`` uses the shifted grading
    j~ = j + 1, so its Euler characteristic is the Jones polynomial.
    """
    groups: dict
    reduced: dict = None
    meta: LinkMetadata = field(default_factory=LinkMetadata)
    name: str = None
    m_components: int = 1
    n_crossings: int = 0
    linking: tuple = None          # m x m tuple of tuples, None if unknown
    betti: dict = field(default_factory=dict)          # p -> {(i, j): n}
    reduced_betti: dict = field(default_factory=dict)  # p -> {(i, j~): n}
    generators: int = 0
    seconds: float = 0.0

    def group(self, i, j):
        return self.groups.get((i, j), EMPTY)

    def rank(self, i, j):
        return self.group(i, j).rank

    def reduced_group(self, i, j):
        return (self.reduced or {}).get((i, j), EMPTY)

    @property
    def total_rank(self):
        return sum(g.rank for g in self.groups.values())

    def torsion_orders(self):
        return sorted({q for g in self.groups.values() for q, _ in g.torsion})

    def support(self):
        return sorted(self.groups)

    def diagonals(self):
        return sorted({diagonal(i, j) for i, j in self.groups})

    def betti_table(self, p):
        """Mod-p Betti numbers, from the direct computation if present,
        otherwise predicted from the integral table."""
        if p in self.betti:
            return self.betti[p]
        return self.predicted_betti(p)

    def predicted_betti(self, p):
        """h + T_p^{i,j} + T_p^{i+1,j} (universal coefficients)."""
        out = {}
        keys = set(self.groups) | {(i - 1, j) for i, j in self.groups}
        for i, j in keys:
            n = (self.group(i, j).rank + self.group(i, j).T(p)
                 + self.group(i + 1, j).T(p))
            if n:
                out[(i, j)] = n
        return out


def _diagram_linking(d):
    if d.m_components < 2:
        return ()
    return tuple(tuple(int(x) for x in row) for row in linking_numbers(d))


def compute_homology(diagram: LinkDiagram, reduced=True, primes=(2,),
                     cap=DEFAULT_CAP, cx=None):
    """Full homology table of a diagram.

    ``primes`` lists the fields for which mod-p Betti tables are computed
    directly.  ``cx`` may pass in an already built complex.
    """
    t0 = time.perf_counter()
    if cx is None:
        cx = KhovanovComplex(diagram, cap=cap)
    snf = {}
    mats = {}
    for key in cx.bidegrees():
        m = cx.differential(*key)
        mats[key] = m
        snf[key] = smith_normal_form(m)
    groups = {}
    for (i, j), n in cx.dims.items():
        g = homology_from_smith(n, snf.get((i - 1, j), _NO_MAP), snf[(i, j)])
        if not g.is_zero:
            groups[(i, j)] = g

    betti = {}
    for p in primes:
        ranks = {key: rank_mod_p(m, p) for key, m in mats.items()}
        tab = {}
        for (i, j), n in cx.dims.items():
            b = n - ranks[(i, j)] - ranks.get((i - 1, j), 0)
            if b:
                tab[(i, j)] = b
        betti[p] = tab

    red = None
    if reduced:
        red = {}
        rsnf = {key: smith_normal_form(cx.differential(*key, reduced=True))
                for key in cx.bidegrees(reduced=True)}
        for (i, j), n in cx.reduced_dims.items():
            g = homology_from_smith(n, rsnf.get((i - 1, j), _NO_MAP), rsnf[(i, j)])
            if not g.is_zero:
                red[(i, j)] = g

    return HomologyTable(
        groups=groups,
        reduced=red,
        meta=diagram.meta,
        name=diagram.name,
        m_components=diagram.m_components,
        n_crossings=diagram.n_crossings,
        linking=_diagram_linking(diagram),
        betti=betti,
        generators=cx.total,
        seconds=time.perf_counter() - t0,
    )
