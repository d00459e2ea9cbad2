"""
Polynomial invariants and thinness classification of homology tables.

Conventions: b = 2i - j labels diagonals.  For a knot with knight-move
invariant s the two exceptional generators sit at (0, s-1) and (0, s+1),
so an H-thin knot lives on b = -s-1 and b = -s+1; the *upper* diagonal is
the one with larger j, i.e. the smaller b.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .homology import EMPTY, HomologyTable, compute_homology, diagonal
from .poly import BigradedPoly, LaurentPoly, Q, QINV, TorsionPoly
from .linalg import factorize

__all__ = [
    "HomologyTable",
    "compute_homology",
    "KnightMove",
    "ThinnessReport",
    "khovanov_polynomial",
    "reduced_polynomial",
    "graded_euler",
    "reduced_euler",
    "jones_reduced",
    "determinant",
    "diagonal_support",
    "exceptional_block",
    "knight_move_decompose",
    "classify_torsion",
    "torsion_polynomial",
    "classify",
]

H_CLASSES = ("H-slim", "H-thin", "H-thick")
T_CLASSES = ("T-thin", "WT-thin", "T-rich", "T-thick")


# -- polynomials -----------------------------------------------------------

def khovanov_polynomial(table: HomologyTable) -> BigradedPoly:
    return BigradedPoly({k: g.rank for k, g in table.groups.items()})


def reduced_polynomial(table: HomologyTable) -> BigradedPoly:
    return BigradedPoly({k: g.rank for k, g in (table.reduced or {}).items()})


def graded_euler(table: HomologyTable) -> LaurentPoly:
    """K_L(q) = sum (-1)^i q^j h^{i,j}."""
    return khovanov_polynomial(table).at_t(-1)


def reduced_euler(table: HomologyTable) -> LaurentPoly:
    return reduced_polynomial(table).at_t(-1)


def jones_reduced(table: HomologyTable) -> LaurentPoly:
    """J_L(q) = K_L(q) / (q + 1/q), checked against the reduced table."""
    K = graded_euler(table)
    J = K.exact_div(Q + QINV)
    if table.reduced is not None:
        Jr = reduced_euler(table)
        if Jr != J:
            raise ArithmeticError(
                f"reduced Euler characteristic {Jr} differs from K/(q+1/q) = {J}")
    return J


def determinant(J: LaurentPoly) -> int:
    """d(L) = |J(sqrt(-1))|, exact over the Gaussian integers."""
    return J.abs_at_i()


def torsion_polynomial(table: HomologyTable) -> TorsionPoly:
    return TorsionPoly({(i, q, j): m
                        for (i, j), g in table.groups.items()
                        for q, m in g.torsion})


# -- diagonals -------------------------------------------------------------

def _thin_pairs(support):
    """Candidate (upper, lower) diagonal pairs covering ``support``."""
    if not support:
        return [(0, 2)]
    lo, hi = min(support), max(support)
    if hi - lo > 2:
        return []
    if hi - lo == 2:
        return [(lo, hi)]
    return [(lo, lo + 2), (lo - 2, lo)]


def _h_class(groups):
    support = {diagonal(i, j) for (i, j), g in groups.items() if not g.is_zero}
    pairs = _thin_pairs(support)
    if not pairs:
        return "H-thick", support, None
    for upper, lower in pairs:
        if not any(g.has_torsion for (i, j), g in groups.items()
                   if diagonal(i, j) == upper):
            return "H-slim", support, upper
    return "H-thin", support, pairs[0][0]


def diagonal_support(table: HomologyTable):
    """Support, H-class, upper diagonal and mod-p thinness.

    Returns (support, h_class, upper, mod_p_thin).  ``upper`` is None for
    H-thick tables.
    """
    h_class, support, upper = _h_class(table.groups)
    mod_p = {}
    for p in sorted(table.betti):
        b = {diagonal(i, j) for (i, j), n in table.betti[p].items() if n}
        mod_p[p] = bool(_thin_pairs(b))
    return frozenset(support), h_class, upper, mod_p


# -- knight move -----------------------------------------------------------

def exceptional_block(s, linking=(), m=1):
    """q^{s-1}(1+q^2) sum_{E in {2..m}} (t q^2)^{2 cut(E)} as {(i, j): n}.

    ``cut(E)`` sums linking numbers between components in E and outside it.
    """
    out = defaultdict(int)
    others = range(1, m)
    for size in range(m):
        for E in combinations(others, size):
            Es = set(E)
            cut = sum(linking[k][l] for k in Es for l in range(m) if l not in Es)
            a = 2 * cut
            out[(a, s - 1 + 2 * a)] += 1
            out[(a, s + 1 + 2 * a)] += 1
    return dict(out)


def _solve(h, eps):
    """g with h - eps = g^{i,j} + g^{i-1,j-4}, or None if impossible."""
    r = defaultdict(int, h)
    for key, n in eps.items():
        r[key] -= n
    if not r:
        return {}
    cols = sorted({i for i, _ in r})
    g = {}
    for i in range(cols[0], cols[-1] + 2):
        js = {j for (ii, j) in r if ii == i} | {j + 4 for (ii, j) in g if ii == i - 1}
        for j in js:
            v = r.get((i, j), 0) - g.get((i - 1, j - 4), 0)
            if v < 0:
                return None
            if v:
                if i == cols[-1] + 1:
                    return None
                g[(i, j)] = v
    return g


@dataclass
class KnightMove:
    ok: bool
    s: int = None
    g: dict = field(default_factory=dict)
    candidates: tuple = ()
    reason: str = ""

    @property
    def kh_prime(self):
        """Kh'(L): g^{i,j} is the coefficient of t^i q^{j-s+1}."""
        if not self.ok:
            return None
        return BigradedPoly({(i, j - self.s + 1): n for (i, j), n in self.g.items()})

    def a_coefficients(self):
        """a_i with Kh' = sum a_i t^i q^{2i}, or None if Kh' has other terms."""
        if not self.ok:
            return None
        a = {}
        for (i, j), n in self.g.items():
            if j != 2 * i + self.s - 1:
                return None
            a[i] = n
        return a

    def overlapping_pairs(self):
        """Knight-move pairs sharing an entry with another pair.

        A pair is ((i, j), (i+1, j+4)) for each g^{i,j} > 0.
        """
        pairs = [((i, j), (i + 1, j + 4)) for (i, j) in sorted(self.g)]
        out = []
        for p in pairs:
            for q in pairs:
                if p != q and (p[1] == q[0] or p[0] == q[1]):
                    out.append(p)
                    break
        return out


def knight_move_decompose(table: HomologyTable, s=None) -> KnightMove:
    """Find s and g^{i,j} >= 0 with h = g^{i,j} + g^{i-1,j-4} + exceptional.

    Every s of the right parity across the q-support is tried unless ``s``
    is given; the answer must be unique.
    """
    m = table.m_components
    if m > 1 and table.linking is None:
        return KnightMove(False, reason="knight-move unchecked: no linking numbers")
    linking = table.linking or ()
    h = {k: g.rank for k, g in table.groups.items() if g.rank}
    if s is not None:
        cands = [s]
    elif h:
        js = [j for _, j in h]
        # the block touches j = s-1 (at i = 0) or is shifted by 4 cut(E)
        lo, hi = min(js) - 1, max(js) + 1
        cands = [x for x in range(lo, hi + 1) if (x - m + 1) % 2 == 0]
    else:
        cands = []
    found = []
    for x in cands:
        g = _solve(h, exceptional_block(x, linking, m))
        if g is not None:
            found.append((x, g))
    if not found:
        return KnightMove(False, reason="no valid s")
    if len(found) > 1:
        return KnightMove(False, candidates=tuple(x for x, _ in found),
                          reason="ambiguous s")
    x, g = found[0]
    return KnightMove(True, s=x, g=g, candidates=(x,))


# -- torsion classes -------------------------------------------------------

def classify_torsion(table: HomologyTable, km: KnightMove):
    """T-class with a reason string and the bidegrees of excessive torsion."""
    orders = table.torsion_orders()
    primes = {next(iter(factorize(q))) for q in orders}
    if primes - {2}:
        return "T-thick", f"odd torsion of order {sorted(q for q in orders if q % 2)}", []
    if not km.ok:
        return "T-thick", f"no knight-move decomposition ({km.reason})", []
    keys = set(table.groups) | {(i + 1, j + 2) for (i, j) in km.g}
    excess, deficit = [], []
    for i, j in sorted(keys):
        T2 = table.group(i, j).T(2)
        g = km.g.get((i - 1, j - 2), 0)
        if T2 > g:
            excess.append((i, j))
        elif T2 < g:
            deficit.append((i, j))
    if not excess and not deficit:
        if all(q == 2 for q in orders):
            return "T-thin", "torsion matches Kh'", []
        return "WT-thin", "2-power torsion matches Kh'", []
    if excess:
        return "T-rich", f"excessive torsion at {excess}", excess
    return "T-thick", f"torsion below Kh' at {deficit}", []


@dataclass
class ThinnessReport:
    diagonal_support: frozenset
    h_class: str
    mod_p_thin: dict
    t_class: str
    s_value: int = None
    knight_poly: BigradedPoly = None
    upper_diagonal: int = None
    reason: str = ""
    excess: list = field(default_factory=list)
    scope_note: str = ""
    knight: KnightMove = None

    @property
    def h_thin(self):
        return self.h_class in ("H-thin", "H-slim")

    def verdict(self):
        trivial = " (trivially)" if self.knight_poly is not None and not self.knight_poly \
            and self.t_class == "T-thin" else ""
        return f"{self.h_class}, {self.t_class}{trivial}"


def classify(table: HomologyTable, s=None) -> ThinnessReport:
    support, h_class, upper, mod_p = diagonal_support(table)
    km = knight_move_decompose(table, s=s)
    t_class, reason, excess = classify_torsion(table, km)
    note = ""
    if table.m_components > 1 and h_class == "H-thick":
        note = "T-class outside the stated scope (H-thick link)"
    return ThinnessReport(
        diagonal_support=support,
        h_class=h_class,
        mod_p_thin=mod_p,
        t_class=t_class,
        s_value=km.s if km.ok else None,
        knight_poly=km.kh_prime,
        upper_diagonal=upper,
        reason=reason,
        excess=excess,
        scope_note=note,
        knight=km,
    )
