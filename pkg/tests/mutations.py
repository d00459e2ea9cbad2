"""Deliberately broken inputs for non-vacuity checks."""

import numpy as np

from khtorsion.complex import KhovanovComplex
from khtorsion.homology import HomologyTable
from khtorsion.linalg import AbelianGroup, SparseIntMatrix


class SignFlippedComplex:
    """A complex whose differential has one entry with the wrong sign.

    The entry is chosen so that the flip must break d^2 = 0: its row is
    hit by the next differential.  ``target`` is the corrupted bidegree.
    """

    def __init__(self, diagram):
        self.cx = KhovanovComplex(diagram)
        for (i, j) in self.cx.bidegrees():
            m = self.cx.differential(i, j)
            nxt = self.cx.differential(i + 1, j).to_dense()
            dense = m.to_dense()
            for r, c in zip(*np.nonzero(dense)):
                if nxt.shape[0] and nxt[:, r].any():
                    dense[r, c] = -dense[r, c]
                    self.target = (i, j)
                    self.bad = SparseIntMatrix.from_dense(dense)
                    return
        raise ValueError("no entry whose sign matters")

    def __getattr__(self, name):
        return getattr(self.cx, name)

    def differential(self, i, j, reduced=False):
        if (i, j) == self.target and not reduced:
            return self.bad
        return self.cx.differential(i, j, reduced)

    def matrix(self, kind, i, j=None, reduced=False, modulus=0):
        if kind == "khovanov_d" and (i, j) == self.target and not reduced:
            return self.bad
        return self.cx.matrix(kind, i, j, reduced, modulus)


def rank_bumped(table: HomologyTable, key):
    """Copy of ``table`` with the rank at ``key`` raised by one."""
    groups = dict(table.groups)
    g = groups.get(key, AbelianGroup())
    groups[key] = AbelianGroup.make(g.rank + 1, g.torsion_dict)
    return HomologyTable(groups=groups, reduced=table.reduced, meta=table.meta,
                         name=table.name, m_components=table.m_components,
                         n_crossings=table.n_crossings, linking=table.linking)
