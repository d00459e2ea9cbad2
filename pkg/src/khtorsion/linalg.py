"""
Exact sparse integer linear algebra.

Smith normal form is computed in two passes.  Unit pivots (entries +-1)
are eliminated first, Markowitz-style, which is where almost all the work
goes on Khovanov boundary matrices; what is left is diagonalized with
general Euclidean pivots and the diagonal is normalized into invariant
factors through its prime-power decomposition.  Python integers are used
throughout, so intermediate growth cannot overflow.
"""

import heapq
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

__all__ = [
    "CompositionError",
    "SparseIntMatrix",
    "SmithForm",
    "AbelianGroup",
    "smith_normal_form",
    "homology_group",
    "homology_from_smith",
    "rank_mod_p",
    "betti_mod_p",
    "factorize",
    "is_prime",
]


class CompositionError(ArithmeticError):
    """d_out @ d_in is not zero."""


def is_prime(p):
    p = int(p)
    if p < 2:
        return False
    q = 2
    while q * q <= p:
        if p % q == 0:
            return False
        q += 1
    return True


def factorize(n):
    """Prime factorization of ``|n|`` as {prime: exponent}."""
    n = abs(int(n))
    out = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class SparseIntMatrix:
    """Integer matrix in coordinate form.

    Duplicates are summed and zeros dropped on construction, so the stored
    triplets are canonical.  Values are int64 (the differentials have
    entries in {0, +-1, +-2}); elimination converts to Python ints.
    """

    __slots__ = ("n_rows", "n_cols", "rows", "cols", "vals")

    def __init__(self, n_rows, n_cols, rows=(), cols=(), vals=()):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=np.int64).ravel()
        if not (len(rows) == len(cols) == len(vals)):
            raise ValueError("triplet arrays differ in length")
        if len(rows):
            if rows.min() < 0 or rows.max() >= self.n_rows:
                raise IndexError("row index out of range")
            if cols.min() < 0 or cols.max() >= self.n_cols:
                raise IndexError("column index out of range")
            key = rows * max(self.n_cols, 1) + cols
            order = np.argsort(key, kind="stable")
            key, rows, cols, vals = key[order], rows[order], cols[order], vals[order]
            uniq, first = np.unique(key, return_index=True)
            if len(uniq) != len(key):
                vals = np.add.reduceat(vals, first)
                rows, cols = rows[first], cols[first]
            keep = vals != 0
            rows, cols, vals = rows[keep], cols[keep], vals[keep]
        self.rows, self.cols, self.vals = rows, cols, vals

    @classmethod
    def zeros(cls, n_rows, n_cols):
        return cls(n_rows, n_cols)

    @classmethod
    def from_dense(cls, a):
        a = np.asarray(a, dtype=np.int64)
        if a.ndim != 2:
            a = a.reshape(a.shape[0] if a.size else 0, -1)
        r, c = np.nonzero(a)
        return cls(a.shape[0], a.shape[1], r, c, a[r, c])

    @classmethod
    def identity(cls, n):
        idx = np.arange(n)
        return cls(n, n, idx, idx, np.ones(n, dtype=np.int64))

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        return len(self.vals)

    def entries(self):
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()))

    def to_dense(self):
        a = np.zeros(self.shape, dtype=np.int64)
        a[self.rows, self.cols] = self.vals
        return a

    def to_scipy(self):
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=self.shape,
                             dtype=np.int64)

    def row_dicts(self):
        out = [dict() for _ in range(self.n_rows)]
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            out[r][c] = v
        return out

    def mod(self, p):
        return SparseIntMatrix(self.n_rows, self.n_cols, self.rows, self.cols,
                               np.mod(self.vals, p))

    def transpose(self):
        return SparseIntMatrix(self.n_cols, self.n_rows, self.cols, self.rows, self.vals)

    def __matmul__(self, other):
        if self.n_cols != other.n_rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        bound = (int(np.abs(self.vals).max(initial=0)) *
                 int(np.abs(other.vals).max(initial=0)) * max(self.n_cols, 1))
        if bound >= 2 ** 62:
            raise OverflowError("product may overflow int64")
        prod = (self.to_scipy() @ other.to_scipy()).tocoo()
        return SparseIntMatrix(self.n_rows, other.n_cols, prod.row, prod.col, prod.data)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return SparseIntMatrix(
            self.n_rows, self.n_cols,
            np.concatenate([self.rows, other.rows]),
            np.concatenate([self.cols, other.cols]),
            np.concatenate([self.vals, other.vals]))

    def __neg__(self):
        return SparseIntMatrix(self.n_rows, self.n_cols, self.rows, self.cols, -self.vals)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self, modulus=0):
        if modulus:
            return not np.any(np.mod(self.vals, modulus))
        return self.nnz == 0

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return (self.shape == other.shape and np.array_equal(self.rows, other.rows)
                and np.array_equal(self.cols, other.cols)
                and np.array_equal(self.vals, other.vals))

    def __repr__(self):
        return f"SparseIntMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"

    # plain triplet text: "rows cols; r c v; r c v; ..."
    def to_text(self):
        parts = [f"{self.n_rows} {self.n_cols}"]
        parts += [f"{r} {c} {v}" for r, c, v in self.entries()]
        return "; ".join(parts)

    @classmethod
    def from_text(cls, text):
        parts = [p.strip() for p in text.strip().split(";") if p.strip()]
        if not parts:
            raise ValueError("empty triplet text")
        head = parts[0].split()
        if len(head) != 2:
            raise ValueError(f"bad header {parts[0]!r}")
        trip = []
        for p in parts[1:]:
            if not re.fullmatch(r"\d+\s+\d+\s+-?\d+", p):
                raise ValueError(f"bad triplet {p!r}")
            trip.append([int(x) for x in p.split()])
        trip = np.array(trip, dtype=np.int64).reshape(-1, 3)
        return cls(int(head[0]), int(head[1]), trip[:, 0], trip[:, 1], trip[:, 2])


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: tuple

    @property
    def rank(self):
        return len(self.invariant_factors)

    def torsion(self):
        return [d for d in self.invariant_factors if d > 1]

    def rank_mod(self, p):
        return sum(1 for d in self.invariant_factors if d % p)


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank plus finite cyclic summands keyed by prime power."""
    rank: int = 0
    torsion: tuple = ()   # sorted ((prime_power, multiplicity), ...)

    @classmethod
    def make(cls, rank, torsion=None):
        items = sorted((int(q), int(m)) for q, m in dict(torsion or {}).items() if m)
        for q, m in items:
            if m < 0 or len(factorize(q)) != 1:
                raise ValueError(f"bad torsion summand Z_{q}^{m}")
        return cls(int(rank), tuple(items))

    @classmethod
    def from_invariant_factors(cls, rank, factors):
        counts = Counter()
        for d in factors:
            for p, e in factorize(d).items():
                counts[p ** e] += 1
        return cls.make(rank, counts)

    @property
    def torsion_dict(self):
        return dict(self.torsion)

    def t(self, q):
        """Multiplicity of Z_q for a prime power q."""
        return self.torsion_dict.get(q, 0)

    def T(self, p):
        """Sum over k of the multiplicities of Z_{p^k}."""
        return sum(m for q, m in self.torsion if _prime_of(q) == p)

    def torsion_primes(self):
        return sorted({_prime_of(q) for q, _ in self.torsion})

    @property
    def is_zero(self):
        return self.rank == 0 and not self.torsion

    @property
    def has_torsion(self):
        return bool(self.torsion)

    def betti_mod(self, p):
        """Contribution of this group to dimension over Z_p (no Tor term)."""
        return self.rank + self.T(p)

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        for q, m in self.torsion:
            parts.append(f"Z_{q}" if m == 1 else f"Z_{q}^{m}")
        return " + ".join(parts) if parts else "0"


def _prime_of(q):
    return next(iter(factorize(q)))


# -- elimination ------------------------------------------------------------

def _unit_elimination(rows, cols, units):
    """Eliminate pivots whose value lies in ``units``; returns pivot count.

    ``rows`` is a list of dicts, ``cols`` a dict column -> set of rows;
    both are updated in place.  Pivot choice: shortest row first, then the
    unit entry whose column is shortest, ties to the lowest index.
    """
    count = 0
    heap = [(len(r), i) for i, r in enumerate(rows) if r]
    heapq.heapify(heap)
    while heap:
        length, r = heapq.heappop(heap)
        row = rows[r]
        if not row:
            continue
        if length != len(row):
            heapq.heappush(heap, (len(row), r))
            continue
        best = None
        for c, v in row.items():
            if v in units:
                key = (len(cols[c]), c)
                if best is None or key < best[0]:
                    best = (key, c, v)
        if best is None:
            continue
        _, c, u = best
        inv = units[u]
        others = [r2 for r2 in cols[c] if r2 != r]
        for r2 in others:
            row2 = rows[r2]
            f = row2[c] * inv
            for cc, vv in row.items():
                nv = row2.get(cc, 0) - f * vv
                if nv:
                    if cc not in row2:
                        cols[cc].add(r2)
                    row2[cc] = nv
                else:
                    if cc in row2:
                        del row2[cc]
                        cols[cc].discard(r2)
            heapq.heappush(heap, (len(row2), r2))
        for cc in row:
            cols[cc].discard(r)
        del cols[c]
        rows[r] = {}
        count += 1
    return count


_INT_UNITS = {1: 1, -1: -1}


def _build(M):
    rows = M.row_dicts()
    cols = {}
    for r, row in enumerate(rows):
        for c in row:
            cols.setdefault(c, set()).add(r)
    return rows, cols


def _general_diagonal(rows, cols):
    """Diagonalize the remaining entries with Euclidean pivots."""
    diag = []
    live = {r for r, row in enumerate(rows) if row}
    while live:
        # smallest absolute value, then shortest row, then lowest index
        r, c = min(((r, c) for r in live for c in rows[r]),
                   key=lambda rc: (abs(rows[rc[0]][rc[1]]), len(rows[rc[0]]), rc))
        while True:
            v = rows[r][c]
            moved = False
            for r2 in sorted(cols[c] - {r}):
                row2 = rows[r2]
                q = row2[c] // v
                for cc, vv in list(rows[r].items()):
                    nv = row2.get(cc, 0) - q * vv
                    if nv:
                        if cc not in row2:
                            cols[cc].add(r2)
                        row2[cc] = nv
                    elif cc in row2:
                        del row2[cc]
                        cols[cc].discard(r2)
                if not row2:
                    live.discard(r2)
                else:
                    live.add(r2)
                if c in row2:
                    r, moved = r2, True
                    break
            if moved:
                continue
            # column c now holds only the pivot; clear row r by column ops
            row = rows[r]
            for c2 in sorted(set(row) - {c}):
                q = row[c2] // v
                nv = row[c2] - q * v
                if nv:
                    row[c2] = nv
                    c, moved = c2, True
                    break
                del row[c2]
                cols[c2].discard(r)
            if moved:
                continue
            break
        diag.append(abs(rows[r][c]))
        for cc in rows[r]:
            cols[cc].discard(r)
        rows[r] = {}
        live.discard(r)
    return diag


def _normalize(diag):
    """Invariant factors of a diagonal matrix."""
    ones = 0
    powers = {}
    for d in diag:
        if d == 1:
            ones += 1
            continue
        for p, e in factorize(d).items():
            powers.setdefault(p, []).append(e)
    n_big = sum(1 for d in diag if d != 1)
    factors = [1] * n_big
    for p, es in powers.items():
        es = sorted(es)
        # largest exponents go to the last factors
        for t, e in enumerate(es):
            factors[n_big - len(es) + t] *= p ** e
    factors.sort()
    return tuple([1] * ones + factors)


def smith_normal_form(M):
    """Invariant factors d1 | d2 | ... | dr of an integer matrix."""
    rows, cols = _build(M)
    ones = _unit_elimination(rows, cols, _INT_UNITS)
    rest = _general_diagonal(rows, cols)
    factors = _normalize(rest)
    return SmithForm((1,) * ones + factors)


def rank_mod_p(M, p):
    """Rank over the field with ``p`` elements (sparse Gaussian elimination)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    vals = np.mod(M.vals, p)
    Mp = SparseIntMatrix(M.n_rows, M.n_cols, M.rows, M.cols, vals)
    rows, cols = _build(Mp)
    return _unit_elimination_mod(rows, cols, p)


def _unit_elimination_mod(rows, cols, p):
    count = 0
    heap = [(len(r), i) for i, r in enumerate(rows) if r]
    heapq.heapify(heap)
    while heap:
        length, r = heapq.heappop(heap)
        row = rows[r]
        if not row:
            continue
        if length != len(row):
            heapq.heappush(heap, (len(row), r))
            continue
        c = min(row, key=lambda cc: (len(cols[cc]), cc))
        inv = pow(row[c], -1, p)
        for r2 in [x for x in cols[c] if x != r]:
            row2 = rows[r2]
            f = (row2[c] * inv) % p
            for cc, vv in row.items():
                nv = (row2.get(cc, 0) - f * vv) % p
                if nv:
                    if cc not in row2:
                        cols[cc].add(r2)
                    row2[cc] = nv
                elif cc in row2:
                    del row2[cc]
                    cols[cc].discard(r2)
            heapq.heappush(heap, (len(row2), r2))
        for cc in row:
            cols[cc].discard(r)
        del cols[c]
        rows[r] = {}
        count += 1
    return count


def _check_composition(d_in, d_out, modulus=0):
    if d_out.n_cols != d_in.n_rows:
        raise ValueError(
            f"middle dimensions differ: {d_out.shape} after {d_in.shape}")
    if d_in.nnz and d_out.nnz and not (d_out @ d_in).is_zero(modulus):
        raise CompositionError("d_out o d_in is not zero")


def homology_from_smith(dim, snf_in, snf_out):
    """Homology at a slice of dimension ``dim`` from the Smith forms of the
    incoming and outgoing differentials."""
    rank = dim - snf_out.rank - snf_in.rank
    if rank < 0:
        raise CompositionError("ranks exceed the slice dimension")
    return AbelianGroup.from_invariant_factors(rank, snf_in.torsion())


def homology_group(d_in, d_out, check=True):
    """Homology ker(d_out) / im(d_in) as an :class:`AbelianGroup`."""
    if check:
        _check_composition(d_in, d_out)
    dim = d_in.n_rows
    return homology_from_smith(dim, smith_normal_form(d_in), smith_normal_form(d_out))


def betti_mod_p(d_in, d_out, p, check=True):
    if check:
        _check_composition(d_in, d_out, p)
    return d_in.n_rows - rank_mod_p(d_in, p) - rank_mod_p(d_out, p)
