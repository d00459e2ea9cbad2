"""
Enhanced Kauffman states and the differentials built on them.

Generators of the chain group in bidegree ``(i, j)`` are the enhanced
states with those gradings, ordered lexicographically by marker word and
then by circle-sign word (``+`` before ``-``).  A sign word is stored as an
integer mask whose most significant bit belongs to circle 0 and where a set
bit means ``-``, so integer order is the lexicographic order.

All differentials are returned as :class:`~khtorsion.linalg.SparseIntMatrix`
of shape ``(target dim, source dim)``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .diagram import State, UnionFind, resolve
from .linalg import SparseIntMatrix

__all__ = [
    "DEFAULT_CAP",
    "GeneratorCapExceeded",
    "InvalidRing",
    "EnhancedState",
    "ChainSlice",
    "DifferentialKind",
    "KhovanovComplex",
    "enumerate_slices",
    "incidence",
    "lee_incidence",
    "build_matrix",
    "reduced_slices",
    "total_generators",
]

DEFAULT_CAP = 5_000_000

KINDS = ("khovanov_d", "nu", "x", "lee_phi", "phi_plus_d")


class GeneratorCapExceeded(RuntimeError):
    """The diagram has more enhanced states than the configured cap."""


class InvalidRing(ValueError):
    pass


@dataclass(frozen=True)
class DifferentialKind:
    name: str
    modulus: int = 0  # 0 means the integers

    def __post_init__(self):
        if self.name not in KINDS:
            raise ValueError(f"unknown differential {self.name!r}")
        if self.name in ("lee_phi", "phi_plus_d"):
            if self.modulus == 0 or self.modulus == 2 or not _is_prime(self.modulus):
                raise InvalidRing(
                    f"{self.name} needs an odd prime modulus, got {self.modulus}")


def _is_prime(p):
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


@dataclass(frozen=True)
class EnhancedState:
    """A state together with a sign on every circle of its smoothing."""
    state: State
    signs: str
    i_grade: int
    j_grade: int

    @property
    def tau(self):
        return self.signs.count("+") - self.signs.count("-")

    @classmethod
    def make(cls, diagram, state, signs):
        if isinstance(state, str):
            state = State.from_word(state)
        k = resolve(diagram, state).n_circles
        if len(signs) != k:
            raise ValueError(f"state has {k} circles, got {len(signs)} signs")
        w = diagram.writhe
        tau = signs.count("+") - signs.count("-")
        i = (w - state.sigma) // 2
        j = -(state.sigma + 2 * tau - 3 * w) // 2
        return cls(state, signs, i, j)


@dataclass
class ChainSlice:
    """Chain group C^{i,j}; generators are decoded lazily."""
    i: int
    j: int
    size: int
    _complex: object = None
    _reduced: bool = False

    @property
    def generators(self):
        return self._complex.generators(self.i, self.j, reduced=self._reduced)

    def __len__(self):
        return self.size


def _popcount(arr):
    arr = np.asarray(arr, dtype=np.int64)
    out = np.zeros_like(arr)
    x = arr.copy()
    while x.any():
        out += x & 1
        x >>= 1
    return out


class _MaskTables:
    """Per circle-count lookup tables for sign masks."""

    def __init__(self):
        self._cache = {}

    def get(self, k):
        if k not in self._cache:
            masks = np.arange(1 << k, dtype=np.int64)
            pc = _popcount(masks)
            rank = np.zeros(1 << k, dtype=np.int64)
            for p in range(k + 1):
                sel = pc == p
                rank[sel] = np.arange(int(sel.sum()))
            bits = ((masks[:, None] >> (k - 1 - np.arange(k))[None, :]) & 1
                    if k else np.zeros((1, 0), dtype=np.int64))
            self._cache[k] = (masks, pc, rank, bits)
        return self._cache[k]


_TABLES = _MaskTables()


def _pack(bits):
    """Rows of 0/1 circle bits to masks (column 0 most significant)."""
    k = bits.shape[1]
    if k == 0:
        return np.zeros(bits.shape[0], dtype=np.int64)
    weights = np.int64(1) << (k - 1 - np.arange(k, dtype=np.int64))
    return bits @ weights


def total_generators(diagram):
    """Number of enhanced states, i.e. the sum of 2^|s| over all states."""
    return sum(1 << k for k in _circle_counts(diagram))


def _circle_counts(diagram):
    n = diagram.n_crossings
    return [_resolve_bits(diagram, s)[0] for s in range(1 << n)]


def _resolve_bits(diagram, s):
    n = diagram.n_crossings
    uf = UnionFind(diagram.n_edges)
    for k, (a, b, c, d) in enumerate(diagram.crossings):
        if (s >> (n - 1 - k)) & 1:
            uf.union(a, d)
            uf.union(b, c)
        else:
            uf.union(a, b)
            uf.union(c, d)
    ids = {}
    circ = []
    for e in range(diagram.n_edges):
        r = uf.find(e)
        if r not in ids:
            ids[r] = len(ids)
        circ.append(ids[r])
    return len(ids), circ


class KhovanovComplex:
    """All chain groups of a diagram, with cached differentials.

    Gradings follow ``i = (w - sigma)/2`` and
    ``j = -(sigma + 2 tau - 3 w)/2``.  Reduced generators (base-point
    circle signed ``+``) carry ``j~ = j + 1``.
    """

    def __init__(self, diagram, cap=DEFAULT_CAP):
        self.diagram = diagram
        n = diagram.n_crossings
        self.n = n
        self.cap = cap
        self.circ = []
        self.k = []
        for s in range(1 << n):
            k, circ = _resolve_bits(diagram, s)
            self.k.append(k)
            self.circ.append(circ)
        self.total = sum(1 << k for k in self.k)
        if cap is not None and self.total > cap:
            raise GeneratorCapExceeded(
                f"{self.total} enhanced states exceed the cap of {cap}; "
                "raise it with --cap")
        self.r = [bin(s).count("1") for s in range(1 << n)]
        self._layout()

    # -- gradings and indexing -------------------------------------------

    def i_of(self, r):
        return r - self.diagram.n_negative

    def j_of(self, r, k, p):
        d = self.diagram
        return r - k + 2 * p + d.n_positive - 2 * d.n_negative

    def _layout(self):
        dims = {}
        start = []
        col_start = []
        col_dims = {}
        for s in range(1 << self.n):
            r, k = self.r[s], self.k[s]
            i = self.i_of(r)
            col_start.append(col_dims.get(i, 0))
            col_dims[i] = col_dims.get(i, 0) + (1 << k)
            _, pc, _, _ = _TABLES.get(k)
            counts = np.bincount(pc, minlength=k + 1)
            row = []
            for p in range(k + 1):
                key = (i, self.j_of(r, k, p))
                row.append(dims.get(key, 0))
                dims[key] = dims.get(key, 0) + int(counts[p])
            start.append(row)
        self.dims = dims
        self.start = start
        self.col_start = col_start
        self.col_dims = col_dims

    def base_circle(self, s):
        return self.circ[s][self.diagram.base_edge]

    def local_index(self, s, masks):
        k = self.k[s]
        _, pc, rank, _ = _TABLES.get(k)
        st = np.asarray(self.start[s], dtype=np.int64)
        return st[pc[masks]] + rank[masks]

    @cached_property
    def _reduced_maps(self):
        """Per slice: full index -> reduced index (-1 if not reduced)."""
        flags = {key: np.zeros(n, dtype=bool) for key, n in self.dims.items()}
        for s in range(1 << self.n):
            k = self.k[s]
            masks, pc, _, bits = _TABLES.get(k)
            keep = bits[:, self.base_circle(s)] == 0
            idx = self.local_index(s, masks)
            i = self.i_of(self.r[s])
            for p in range(k + 1):
                sel = pc == p
                key = (i, self.j_of(self.r[s], k, p))
                flags[key][idx[sel]] = keep[sel]
        maps = {}
        for key, f in flags.items():
            m = np.cumsum(f) - 1
            m[~f] = -1
            maps[key] = m
        return maps

    @cached_property
    def reduced_dims(self):
        out = {}
        for (i, j), m in self._reduced_maps.items():
            n = int((m >= 0).sum())
            if n:
                out[(i, j + 1)] = n
        return out

    def slices(self, reduced=False):
        dims = self.reduced_dims if reduced else self.dims
        return {key: ChainSlice(key[0], key[1], n, self, reduced)
                for key, n in sorted(dims.items())}

    def generators(self, i, j, reduced=False):
        jj = j - 1 if reduced else j
        out = [None] * self.dims.get((i, jj), 0)
        for s in range(1 << self.n):
            if self.i_of(self.r[s]) != i:
                continue
            k = self.k[s]
            masks, pc, _, bits = _TABLES.get(k)
            idx = self.local_index(s, masks)
            st = State(self.n, s)
            for m in range(1 << k):
                if self.j_of(self.r[s], k, int(pc[m])) != jj:
                    continue
                signs = "".join("-" if b else "+" for b in bits[m])
                out[idx[m]] = EnhancedState(st, signs, i, jj)
        if reduced:
            rmap = self._reduced_maps[(i, jj)]
            red = [None] * int((rmap >= 0).sum())
            for full, g in enumerate(out):
                if rmap[full] >= 0:
                    red[rmap[full]] = EnhancedState(g.state, g.signs, i, j)
            return red
        return out

    # -- differentials ----------------------------------------------------

    def _edge_maps(self, s, c):
        """Circle bookkeeping for the marker change at crossing ``c``."""
        s2 = s | (1 << (self.n - 1 - c))
        a, b, cc, d = self.diagram.crossings[c]
        circ1, circ2 = self.circ[s], self.circ[s2]
        k1 = self.k[s]
        # image of every circle of s in s2 (via any of its edges)
        image = [None] * k1
        for e, q in enumerate(circ1):
            if image[q] is None:
                image[q] = circ2[e]
        t = bin(s & ((1 << (self.n - 1 - c)) - 1)).count("1")
        sign = -1 if t % 2 else 1
        if circ1[a] != circ1[cc]:
            # join: circles of a and of c merge
            return s2, "join", (circ1[a], circ1[cc], circ2[a]), image, sign
        return s2, "split", (circ1[a], circ2[a], circ2[b]), image, sign

    def _transfer(self, bits1, image, skip, k2):
        """Copy bits of circles not touched by the change into k2 columns."""
        out = np.zeros((bits1.shape[0], k2), dtype=np.int64)
        for q, q2 in enumerate(image):
            if q not in skip:
                out[:, q2] = bits1[:, q]
        return out

    def _crossing_maps(self, kind):
        """Yield (s, s2, src_masks, tgt_masks, values) for edge maps."""
        for s in range(1 << self.n):
            k1 = self.k[s]
            masks, _, _, bits1 = _TABLES.get(k1)
            for c in range(self.n):
                if (s >> (self.n - 1 - c)) & 1:
                    continue
                s2, how, circles, image, sign = self._edge_maps(s, c)
                k2 = self.k[s2]
                yield (s, s2) + _edge_entries(
                    kind, how, circles, image, sign, masks, bits1, k2, self)

    @cached_property
    def _d_full(self):
        return self._assemble("khovanov_d")

    def _assemble(self, kind, collapse=False):
        """Collect entries of a crossing-change map into per-slice COO.

        With ``collapse`` (always for ``phi_plus_d``) slices are whole
        columns i and generators are indexed within the column.
        """
        rows, cols, vals = {}, {}, {}
        for s, s2, src, tgt, val in self._crossing_maps(kind):
            if len(src) == 0:
                continue
            k1, k2 = self.k[s], self.k[s2]
            _, pc1, _, _ = _TABLES.get(k1)
            _, pc2, _, _ = _TABLES.get(k2)
            if collapse or kind == "phi_plus_d":
                i = self.i_of(self.r[s])
                src_idx = self.col_start[s] + src
                tgt_idx = self.col_start[s2] + tgt
                groups = {i: np.ones(len(src), dtype=bool)}
            else:
                src_idx = self.local_index(s, src)
                tgt_idx = self.local_index(s2, tgt)
                i = self.i_of(self.r[s])
                jsrc = np.array([self.j_of(self.r[s], k1, p) for p in range(k1 + 1)])
                js = jsrc[pc1[src]]
                groups = {(i, int(j)): js == j for j in np.unique(js)}
            for key, sel in groups.items():
                rows.setdefault(key, []).append(tgt_idx[sel])
                cols.setdefault(key, []).append(src_idx[sel])
                vals.setdefault(key, []).append(val[sel])
        out = {}
        for key in rows:
            out[key] = (np.concatenate(rows[key]), np.concatenate(cols[key]),
                        np.concatenate(vals[key]))
        return out

    def _target(self, kind, i, j):
        if kind == "khovanov_d":
            return (i + 1, j)
        if kind == "lee_phi":
            return (i + 1, j + 4)
        if kind == "nu":
            return (i, j + 2)
        if kind == "x":
            return (i, j - 2)
        raise ValueError(kind)

    def differential(self, i, j, reduced=False):
        """Khovanov differential C^{i,j} -> C^{i+1,j} over the integers."""
        return self.matrix("khovanov_d", i, j, reduced=reduced)

    def matrix(self, kind, i, j=None, reduced=False, modulus=0):
        if kind == "phi_plus_d":
            return self._phi_plus_d(i, modulus)
        if reduced:
            if kind != "khovanov_d":
                raise ValueError("only khovanov_d restricts to the reduced complex")
            return self._reduced_d(i, j)
        ti, tj = self._target(kind, i, j)
        shape = (self.dims.get((ti, tj), 0), self.dims.get((i, j), 0))
        store = self._maps(kind)
        if (i, j) not in store or 0 in shape:
            return SparseIntMatrix.zeros(*shape)
        r, c, v = store[(i, j)]
        m = SparseIntMatrix(shape[0], shape[1], r, c, v)
        return m.mod(modulus) if modulus else m

    def _maps(self, kind):
        if kind == "khovanov_d":
            return self._d_full
        if kind == "lee_phi":
            return self._phi_full
        if kind == "nu":
            return self._nu_full
        if kind == "x":
            return self._x_full
        raise ValueError(kind)

    @cached_property
    def _phi_full(self):
        return self._assemble("lee_phi")

    @cached_property
    def _phipd_full(self):
        return self._assemble("phi_plus_d")

    def _phi_plus_d(self, i, modulus):
        shape = (self.col_dims.get(i + 1, 0), self.col_dims.get(i, 0))
        if i in self._phipd_full and 0 not in shape:
            r, c, v = self._phipd_full[i]
            m = SparseIntMatrix(shape[0], shape[1], r, c, v)
        else:
            m = SparseIntMatrix.zeros(*shape)
        return m.mod(modulus) if modulus else m

    @cached_property
    def _lee_sum_full(self):
        parts = [self._assemble("khovanov_d", collapse=True),
                 self._assemble("lee_phi", collapse=True)]
        out = {}
        for part in parts:
            for i, (r, c, v) in part.items():
                if i in out:
                    r0, c0, v0 = out[i]
                    r, c, v = (np.concatenate([r0, r]), np.concatenate([c0, c]),
                               np.concatenate([v0, v]))
                out[i] = (r, c, v)
        return out

    def lee_sum(self, i, modulus=0):
        """Literal d + Phi in the +/- basis, j collapsed: column i -> i+1.

        Independent of the a/b-basis ``phi_plus_d``; both must have
        homology of the same dimension.
        """
        shape = (self.col_dims.get(i + 1, 0), self.col_dims.get(i, 0))
        if i in self._lee_sum_full and 0 not in shape:
            r, c, v = self._lee_sum_full[i]
            m = SparseIntMatrix(shape[0], shape[1], r, c, v)
        else:
            m = SparseIntMatrix.zeros(*shape)
        return m.mod(modulus) if modulus else m

    def _reduced_d(self, i, jt):
        j = jt - 1
        maps = self._reduced_maps
        shape = (self.reduced_dims.get((i + 1, jt), 0),
                 self.reduced_dims.get((i, jt), 0))
        if (i, j) not in self._d_full or 0 in shape:
            return SparseIntMatrix.zeros(*shape)
        r, c, v = self._d_full[(i, j)]
        src = maps[(i, j)][c]
        keep = src >= 0
        tgt = maps[(i + 1, j)][r[keep]]
        if (tgt < 0).any():
            raise AssertionError("reduced generators are not a subcomplex")
        return SparseIntMatrix(shape[0], shape[1], tgt, src[keep], v[keep])

    def _within_state(self, kind):
        rows, cols, vals = {}, {}, {}
        base = self.diagram.base_edge
        for s in range(1 << self.n):
            k = self.k[s]
            masks, pc, _, bits = _TABLES.get(k)
            i = self.i_of(self.r[s])
            if kind == "nu":
                src_l, tgt_l = [], []
                for q in range(k):
                    sel = bits[:, q] == 0
                    src_l.append(masks[sel])
                    tgt_l.append(masks[sel] | (1 << (k - 1 - q)))
                src = np.concatenate(src_l) if src_l else masks[:0]
                tgt = np.concatenate(tgt_l) if tgt_l else masks[:0]
            else:
                if base is None:
                    continue
                q = self.circ[s][base]
                sel = bits[:, q] == 1
                src = masks[sel]
                tgt = masks[sel] ^ (1 << (k - 1 - q))
            if len(src) == 0:
                continue
            si = self.local_index(s, src)
            ti = self.local_index(s, tgt)
            js = np.array([self.j_of(self.r[s], k, p) for p in range(k + 1)])[pc[src]]
            for j in np.unique(js):
                sel = js == j
                key = (i, int(j))
                rows.setdefault(key, []).append(ti[sel])
                cols.setdefault(key, []).append(si[sel])
                vals.setdefault(key, []).append(np.ones(int(sel.sum()), dtype=np.int64))
        return {key: (np.concatenate(rows[key]), np.concatenate(cols[key]),
                      np.concatenate(vals[key])) for key in rows}

    @cached_property
    def _nu_full(self):
        return self._within_state("nu")

    @cached_property
    def _x_full(self):
        return self._within_state("x")

    # -- convenience ---------------------------------------------------------

    def bidegrees(self, reduced=False):
        return sorted(self.reduced_dims if reduced else self.dims)

    def columns(self):
        return sorted(self.col_dims)


def _edge_entries(kind, how, circles, image, sign, masks, bits1, k2, cx):
    """Source masks, target masks and values for one marker change."""
    if how == "join":
        qa, qb, qe = circles
        ba, bb = bits1[:, qa], bits1[:, qb]
        rest = cx._transfer(bits1, image, (qa, qb), k2)
        if kind == "khovanov_d":
            # -- -> -, +- / -+ -> +; ++ -> 0
            sel = (ba | bb) == 1
            rest[:, qe] = ba & bb
            val = np.full(len(masks), sign, dtype=np.int64)
        elif kind == "lee_phi":
            sel = (ba | bb) == 0
            rest[:, qe] = 1
            val = np.full(len(masks), sign, dtype=np.int64)
        else:
            # a/b labels (bit 0 = a): aa -> a (+2), bb -> b (-2)
            sel = ba == bb
            rest[:, qe] = ba
            val = np.where(ba == 0, 2 * sign, -2 * sign).astype(np.int64)
        tgt = _pack(rest)
        return masks[sel], tgt[sel], val[sel]

    qa, qe1, qe2 = circles
    ba = bits1[:, qa]
    rest = cx._transfer(bits1, image, (qa,), k2)
    if kind == "khovanov_d":
        # + -> ++ ; - -> -+ and +-
        plus = ba == 0
        r1 = rest.copy()
        r1[:, qe1] = ba
        r1[:, qe2] = 0
        r2 = rest.copy()
        r2[:, qe1] = 0
        r2[:, qe2] = 1
        src = np.concatenate([masks, masks[~plus]])
        tgt = np.concatenate([_pack(r1), _pack(r2)[~plus]])
        val = np.full(len(src), sign, dtype=np.int64)
        return src, tgt, val
    if kind == "lee_phi":
        sel = ba == 0
        rest[:, qe1] = 1
        rest[:, qe2] = 1
        tgt = _pack(rest)
        return masks[sel], tgt[sel], np.full(int(sel.sum()), sign, dtype=np.int64)
    # a -> aa, b -> bb
    rest[:, qe1] = ba
    rest[:, qe2] = ba
    return masks, _pack(rest), np.full(len(masks), sign, dtype=np.int64)


# -- module-level operations ---------------------------------------------

def enumerate_slices(diagram, cap=DEFAULT_CAP):
    """Map (i, j) -> ChainSlice over all enhanced states of ``diagram``."""
    return KhovanovComplex(diagram, cap).slices()


def reduced_slices(diagram, base_point=None, cap=DEFAULT_CAP):
    """Slices of the base-point-positive subcomplex, keyed by (i, j~)."""
    if base_point is not None and base_point != diagram.base_point:
        diagram = diagram.with_base_point(base_point)
    return KhovanovComplex(diagram, cap).slices(reduced=True)


def build_matrix(diagram, kind, i, j=None, modulus=0, cx=None):
    """Matrix of differential ``kind`` out of slice (i, j).

    ``phi_plus_d`` collapses the j grading; its source is the whole column
    ``i`` and ``j`` is ignored.
    """
    if not isinstance(kind, DifferentialKind):
        kind = DifferentialKind(kind, modulus)
    cx = cx if cx is not None else KhovanovComplex(diagram)
    return cx.matrix(kind.name, i, j, modulus=kind.modulus)


def _circle_sets(diagram, state):
    res = resolve(diagram, state)
    return [frozenset(c) for c in res.circles()]


def _match(diagram, S1, S2, order):
    """Shared conditions I and II; returns the data needed for III."""
    n = diagram.n_crossings
    s1, s2 = S1.state, S2.state
    diff = [c for c in range(n) if s1.negative(c) != s2.negative(c)]
    if len(diff) != 1:
        return None
    c = diff[0]
    if s1.negative(c) or not s2.negative(c):
        return None
    circ1 = _circle_sets(diagram, s1)
    circ2 = _circle_sets(diagram, s2)
    sign1 = dict(zip(circ1, S1.signs))
    sign2 = dict(zip(circ2, S2.signs))
    common = set(circ1) & set(circ2)
    if any(sign1[x] != sign2[x] for x in common):
        return None
    old = [sign1[x] for x in circ1 if x not in common]
    new = [sign2[x] for x in circ2 if x not in common]
    order = list(range(n)) if order is None else list(order)
    pos = {x: k for k, x in enumerate(order)}
    t = sum(1 for x in range(n) if pos[x] > pos[c] and s1.negative(x))
    return old, new, (-1) ** t


def incidence(diagram, S1, S2, order=None):
    """Incidence number (S1 : S2) of the Khovanov differential.

    Direct transcription of the three conditions, evaluated on explicit
    circle sets; slow, used to cross-check the vectorized builders.
    """
    got = _match(diagram, S1, S2, order)
    if got is None:
        return 0
    old, new, sign = got
    if len(old) == 2 and len(new) == 1:
        if old == ["-", "-"] and new == ["-"]:
            return sign
        if sorted(old) == ["+", "-"] and new == ["+"]:
            return sign
        return 0
    if len(old) == 1 and len(new) == 2:
        if old == ["+"] and new == ["+", "+"]:
            return sign
        if old == ["-"] and sorted(new) == ["+", "-"]:
            return sign
    return 0


def lee_incidence(diagram, S1, S2, order=None):
    """Incidence number of the bidegree (1, 4) Lee differential."""
    got = _match(diagram, S1, S2, order)
    if got is None:
        return 0
    old, new, sign = got
    if old == ["+", "+"] and new == ["-"]:
        return sign
    if old == ["+"] and new == ["-", "-"]:
        return sign
    return 0
