"""
Oriented link diagrams given by planar-diagram (PD) codes.

A crossing is a 4-tuple ``(a, b, c, d)`` of edge labels listed
counterclockwise, starting from the incoming under-strand, so the
under-strand runs ``a -> c``.  The crossing is positive when the
over-strand runs ``d -> b`` and negative when it runs ``b -> d``.

Markers: a positive marker at a crossing is the A-smoothing, which pairs
the edges ``(a, b)`` and ``(c, d)``; a negative marker pairs ``(a, d)``
and ``(b, c)``.

Crossingless components (needed for unlinks and disjoint unions) are
carried as "free loops": edge labels that belong to no crossing.
"""

import re
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

__all__ = [
    "PDError",
    "LinkDiagram",
    "LinkMetadata",
    "State",
    "Resolution",
    "UnionFind",
    "parse_pd",
    "crossing_sign",
    "resolve",
    "linking_numbers",
    "torus_link_pd",
    "braid_closure_pd",
    "CensusEntry",
    "read_census",
    "bundled_census",
]


class PDError(ValueError):
    """Malformed or inconsistent planar-diagram code."""


class UnionFind:
    """Disjoint sets over ``range(n)`` with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return True


@dataclass(frozen=True)
class LinkMetadata:
    signature: int = None
    alternating: bool = None
    split: bool = None
    exceptional: bool = None
    mirror_of: str = None
    same_as: str = None

    def check(self, m_components):
        # signature of an m-component link has parity m - 1
        if self.signature is not None and (self.signature - m_components + 1) % 2:
            raise PDError(
                f"signature {self.signature} has wrong parity for "
                f"{m_components} components")


@dataclass(frozen=True)
class State:
    """A Kauffman state: one marker per crossing.

    ``bits`` encodes the marker word with crossing 0 as the most significant
    bit and ``1`` meaning a negative marker, so integer order equals
    lexicographic order of the word (``+`` before ``-``).
    """
    n: int
    bits: int

    @classmethod
    def from_word(cls, word):
        bits = 0
        for ch in word:
            if ch not in "+-":
                raise ValueError(f"bad marker {ch!r}")
            bits = (bits << 1) | (ch == "-")
        return cls(len(word), bits)

    @property
    def word(self):
        return "".join("-" if self.negative(c) else "+" for c in range(self.n))

    def negative(self, c):
        return (self.bits >> (self.n - 1 - c)) & 1

    @property
    def n_negative(self):
        return bin(self.bits).count("1")

    @property
    def sigma(self):
        """#positive markers minus #negative markers."""
        return self.n - 2 * self.n_negative

    def flip(self, c):
        return State(self.n, self.bits ^ (1 << (self.n - 1 - c)))


@dataclass(frozen=True)
class Resolution:
    """Circles of a smoothed diagram.

    ``circle_of_edge[e]`` is the circle index of edge index ``e``; circles
    are numbered by their smallest edge index.
    """
    n_circles: int
    circle_of_edge: tuple

    def circles(self):
        out = [[] for _ in range(self.n_circles)]
        for e, c in enumerate(self.circle_of_edge):
            out[c].append(e)
        return out


class LinkDiagram:
    """An oriented link diagram.

    Edge labels are arbitrary positive integers; internally edges are
    indexed ``0..n_edges-1`` in increasing label order and ``crossings``
    holds those indices.  Instances are treated as immutable.
    """

    def __init__(self, pd, free_loops=(), name=None, base_point=None,
                 meta=None, orient_hint=None):
        self.name = name
        self.meta = meta if meta is not None else LinkMetadata()
        self.pd = tuple(tuple(int(v) for v in x) for x in pd)
        for x in self.pd:
            if len(x) != 4:
                raise PDError(f"crossing {x} does not have 4 entries")
            if min(x) <= 0:
                raise PDError(f"crossing {x} has a non-positive label")
        self.free_loops = tuple(int(v) for v in free_loops)

        counts = {}
        for x in self.pd:
            for v in x:
                counts[v] = counts.get(v, 0) + 1
        bad = sorted(v for v, k in counts.items() if k != 2)
        if bad:
            raise PDError(f"edge label(s) {bad} do not appear exactly twice")
        clash = set(self.free_loops) & set(counts)
        if clash or len(set(self.free_loops)) != len(self.free_loops):
            raise PDError("free loop labels must be distinct from edge labels")

        self.labels = tuple(sorted(set(counts) | set(self.free_loops)))
        self.index = {v: k for k, v in enumerate(self.labels)}
        self.crossings = tuple(tuple(self.index[v] for v in x) for x in self.pd)
        self.n_crossings = len(self.crossings)
        self.n_edges = len(self.labels)

        self._orient(orient_hint)
        self._check_planar()
        self._trace_components()
        self.signs = tuple(self._sign(k) for k in range(self.n_crossings))
        self.writhe = sum(self.signs)
        self.n_positive = self.signs.count(1)
        self.n_negative = self.signs.count(-1)

        if base_point is None:
            base_point = self.labels[0] if self.labels else None
        if base_point is not None and base_point not in self.index:
            raise PDError(f"base point {base_point} is not an edge label")
        self.base_point = base_point
        self.meta.check(self.m_components)

    # -- orientation -------------------------------------------------------

    def _orient(self, hint):
        # occurrences[e] = [(crossing, position), ...]
        occ = [[] for _ in range(self.n_edges)]
        for k, x in enumerate(self.crossings):
            for p, e in enumerate(x):
                occ[e].append((k, p))
        self._occ = occ
        # incoming[(k, p)] is True when the edge enters crossing k at p
        incoming = {}

        def assign(k, p, value, queue):
            key = (k, p)
            if key in incoming:
                if incoming[key] != value:
                    raise PDError("inconsistent orientation while tracing "
                                  f"crossing {self.pd[k]}")
                return
            incoming[key] = value
            queue.append(key)

        def propagate(queue):
            while queue:
                k, p = queue.pop()
                value = incoming[(k, p)]
                e = self.crossings[k][p]
                # the other end of the same edge has the opposite role
                for kk, pp in occ[e]:
                    if (kk, pp) != (k, p):
                        assign(kk, pp, not value, queue)
                # the opposite end of the same strand has the opposite role
                assign(k, (p + 2) % 4, not value, queue)

        queue = []
        for k in range(self.n_crossings):
            assign(k, 0, True, queue)
            assign(k, 2, False, queue)
        propagate(queue)
        # strands that are over at every crossing are not determined by the
        # code; pick d -> b when the labels read consecutively, else any
        for k in range(self.n_crossings):
            if (k, 1) in incoming:
                continue
            a, b, c, d = self.pd[k]
            if hint is not None:
                forward = hint(self.pd[k])
            else:
                forward = b == d + 1 or d - b > 1
            queue = []
            assign(k, 3, forward, queue)
            propagate(queue)
        self._incoming = incoming

    def _check_planar(self):
        # faces are orbits of (rotate ccw) o (follow edge) on the darts;
        # every connected piece must satisfy V - E + F = 2
        n = self.n_crossings
        if n == 0:
            return
        occ = self._occ
        other = {}
        for e in range(self.n_edges):
            if len(occ[e]) == 2:
                u, v = occ[e]
                other[u], other[v] = v, u
        pieces = UnionFind(n)
        for u, v in other.items():
            pieces.union(u[0], v[0])
        seen = set()
        faces = {}
        for k in range(n):
            for p in range(4):
                if (k, p) in seen:
                    continue
                dart = (k, p)
                while dart not in seen:
                    seen.add(dart)
                    kk, pp = other[dart]
                    dart = (kk, (pp + 1) % 4)
                r = pieces.find(k)
                faces[r] = faces.get(r, 0) + 1
        for r, f in faces.items():
            v = sum(1 for k in range(n) if pieces.find(k) == r)
            if v - 2 * v + f != 2:
                raise PDError("PD code does not describe a planar diagram")

    def _sign(self, k):
        return 1 if self._incoming[(k, 3)] else -1

    def _trace_components(self):
        # head[e]: (crossing, position) where edge e ends
        head = {}
        for (k, p), inc in self._incoming.items():
            if inc:
                head[self.crossings[k][p]] = (k, p)
        seen = set()
        comps = []
        free = {self.index[v] for v in self.free_loops}
        for e0 in range(self.n_edges):
            if e0 in seen:
                continue
            comp = [e0]
            seen.add(e0)
            if e0 not in free:
                e = e0
                while True:
                    k, p = head[e]
                    out = {0: 2, 1: 3, 3: 1}[p]
                    e = self.crossings[k][out]
                    if e == e0:
                        break
                    if e in seen:
                        raise PDError("edges do not close into oriented cycles")
                    seen.add(e)
                    comp.append(e)
            comps.append(tuple(comp))
        self.components = tuple(comps)
        self.m_components = len(comps)
        self.component_of_edge = [0] * self.n_edges
        for ci, comp in enumerate(comps):
            for e in comp:
                self.component_of_edge[e] = ci

    # -- derived data ------------------------------------------------------

    @property
    def edges(self):
        return self.labels

    @property
    def base_edge(self):
        """Edge index of the base point."""
        return self.index[self.base_point]

    def edge_head(self, e):
        for k, p in self._occ[e]:
            if self._incoming[(k, p)]:
                return k, p
        return None

    def smoothing_pairs(self, k, negative):
        """Edge-index pairs joined at crossing ``k`` by its smoothing."""
        a, b, c, d = self.crossings[k]
        if negative:
            return (a, d), (b, c)
        return (a, b), (c, d)

    def with_base_point(self, label):
        return LinkDiagram(self.pd, self.free_loops, self.name, label, self.meta,
                           orient_hint=self._hint())

    def _hint(self):
        # preserves orientation of all-over components under rebuilds
        dirs = {self.pd[k]: self._incoming[(k, 3)] for k in range(self.n_crossings)}
        return lambda x: dirs.get(tuple(x), True)

    def permuted(self, order):
        """Same diagram with crossings listed in ``order``."""
        pd = [self.pd[k] for k in order]
        return LinkDiagram(pd, self.free_loops, self.name, self.base_point,
                           self.meta, orient_hint=self._hint())

    def mirror(self):
        """Mirror image: every crossing switched."""
        pd = []
        for k, (a, b, c, d) in enumerate(self.pd):
            if self.signs[k] > 0:
                pd.append((d, a, b, c))
            else:
                pd.append((b, c, d, a))
        name = None if self.name is None else f"m({self.name})"
        meta = self.meta
        if meta.signature is not None:
            meta = replace(meta, signature=-meta.signature, same_as=None)
        return LinkDiagram(pd, self.free_loops, name, self.base_point, meta)

    def relabeled(self, mapping):
        pd = [tuple(mapping[v] for v in x) for x in self.pd]
        free = [mapping[v] for v in self.free_loops]
        bp = None if self.base_point is None else mapping[self.base_point]
        return LinkDiagram(pd, free, self.name, bp, self.meta)

    def normalized_pd(self):
        """PD relabeled by order of first appearance (crossing order kept)."""
        mapping = {}
        for x in self.pd:
            for v in x:
                mapping.setdefault(v, len(mapping) + 1)
        for v in self.free_loops:
            mapping.setdefault(v, len(mapping) + 1)
        pd = tuple(tuple(mapping[v] for v in x) for x in self.pd)
        return pd, len(self.free_loops)

    def to_text(self):
        parts = []
        if self.pd:
            parts.append(" ".join("X[%d,%d,%d,%d]" % x for x in self.pd))
        if self.free_loops:
            parts.append("unlink %d" % len(self.free_loops))
        return " ⊔ ".join(parts) if parts else "unlink 0"

    def __repr__(self):
        return "LinkDiagram(%s, n=%d, m=%d, w=%d)" % (
            self.name or self.to_text(), self.n_crossings, self.m_components,
            self.writhe)


# -- parsing -------------------------------------------------------------

_TUPLE_RE = re.compile(r"[\[(\{]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\])\}]")
_UNLINK_RE = re.compile(r"^\s*unlink\s+(\d+)\s*$", re.I)
_ALLOWED_RE = re.compile(r"^[\sXPDpd\[\](){},0-9-]*$")


def _parse_block(text):
    m = _UNLINK_RE.match(text)
    if m:
        return [], int(m.group(1))
    if not text.strip() or not _ALLOWED_RE.match(text):
        raise PDError(f"malformed PD code: {text!r}")
    tuples = [tuple(int(v) for v in t) for t in _TUPLE_RE.findall(text)]
    stripped = _TUPLE_RE.sub("", text)
    if re.search(r"\d", stripped):
        raise PDError(f"malformed crossing tuple in {text!r}")
    if not tuples:
        # an empty list such as "[]" denotes the crossingless unknot
        if re.fullmatch(r"[\s\[\]PD{}()]*", text):
            return [], 1
        raise PDError(f"malformed PD code: {text!r}")
    return tuples, 0


def parse_pd(text, name=None, base_point=None, meta=None):
    """Parse PD text into a validated :class:`LinkDiagram`.

    Accepts ``X[1,4,2,3] X[3,6,4,5] ...``, ``PD[X[...], ...]``, nested
    lists such as ``[[1,5,2,4],[3,1,4,6],...]``, the reserved token
    ``unlink N``, and several of these joined by ``⊔`` (disjoint union;
    labels of later blocks are shifted so blocks stay disjoint).
    """
    blocks = [b for b in re.split("⊔|\\bsqcup\\b", text)]
    pd, free = [], []
    offset = 0
    for block in blocks:
        tuples, loops = _parse_block(block)
        labels = [v for x in tuples for v in x]
        if labels and min(labels) <= 0:
            raise PDError(f"non-positive edge label in {block!r}")
        shift = offset
        pd.extend(tuple(v + shift for v in x) for x in tuples)
        top = max(labels) + shift if labels else offset
        for k in range(loops):
            top += 1
            free.append(top)
        offset = top
    if base_point is not None:
        base_point = int(base_point)
    return LinkDiagram(pd, free, name=name, base_point=base_point, meta=meta)


# -- operations ----------------------------------------------------------

def crossing_sign(d, c):
    if not 0 <= c < d.n_crossings:
        raise IndexError(c)
    return d.signs[c]


def resolve(d, s):
    """Smooth ``d`` along state ``s`` and count circles by union-find."""
    if isinstance(s, str):
        s = State.from_word(s)
    if s.n != d.n_crossings:
        raise ValueError("state length does not match crossing count")
    uf = UnionFind(d.n_edges)
    for k in range(d.n_crossings):
        for e, f in d.smoothing_pairs(k, s.negative(k)):
            uf.union(e, f)
    ids = {}
    out = []
    for e in range(d.n_edges):
        r = uf.find(e)
        if r not in ids:
            ids[r] = len(ids)
        out.append(ids[r])
    return Resolution(len(ids), tuple(out))


def linking_numbers(d):
    """Symmetric matrix of pairwise linking numbers (empty if m < 2)."""
    m = d.m_components
    if m < 2:
        return np.zeros((0, 0), dtype=int)
    twice = np.zeros((m, m), dtype=int)
    for k, x in enumerate(d.crossings):
        ca = d.component_of_edge[x[0]]
        cb = d.component_of_edge[x[1]]
        if ca != cb:
            twice[ca, cb] += d.signs[k]
            twice[cb, ca] += d.signs[k]
    if (twice % 2).any():
        raise PDError("odd count of inter-component crossings")
    return twice // 2


def torus_link_pd(k):
    """PD code of the positive (2, k)-torus link, the closure of sigma_1^k.

    Both braid strands run upward; between crossings ``t`` and ``t+1`` the
    left edge is labelled ``t+1`` and the right edge ``k+t+1``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    left = [t + 1 for t in range(k)]
    right = [k + t + 1 for t in range(k)]
    pd = []
    for t in range(k):
        u = (t + 1) % k
        # under strand right[t] -> left[u], over strand left[t] -> right[u]
        pd.append((right[t], right[u], left[u], left[t]))
    return pd


def braid_closure_pd(word, n_strands):
    """PD code of a braid closure; generator k > 0 is sigma_k, -k its inverse.

    Strands run upward.  At a crossing the incoming edges sit bottom-left
    and bottom-right, the outgoing ones top-left and top-right.  Every
    strand must take part in some crossing.
    """
    touched = {abs(g) for g in word} | {abs(g) + 1 for g in word}
    if any(not 1 <= abs(g) < n_strands for g in word):
        raise ValueError(f"generator out of range for {n_strands} strands")
    if touched != set(range(1, n_strands + 1)):
        raise ValueError("every strand needs a crossing")
    cur = list(range(1, n_strands + 1))
    first = list(cur)
    nxt = n_strands + 1
    pd = []
    for g in word:
        k = abs(g) - 1
        new_l, new_r = nxt, nxt + 1
        nxt += 2
        if g > 0:
            pd.append([cur[k + 1], new_r, new_l, cur[k]])
        else:
            pd.append([cur[k], cur[k + 1], new_r, new_l])
        cur[k], cur[k + 1] = new_l, new_r
    close = {cur[p]: first[p] for p in range(n_strands)}
    return [tuple(close.get(v, v) for v in x) for x in pd]


# -- census files --------------------------------------------------------

_BOOL = {"true": True, "yes": True, "y": True, "1": True,
         "false": False, "no": False, "n": False, "0": False}


@dataclass(frozen=True)
class CensusEntry:
    """One census line; ``diagram`` is None when the PD failed to parse."""
    name: str
    pd: str
    meta: LinkMetadata
    base_point: int = None
    diagram: "LinkDiagram" = None
    error: str = None
    line: int = 0


def _parse_meta(fields):
    kw = {}
    base_point = None
    for f in fields:
        if not f.strip():
            continue
        if "=" not in f:
            raise PDError(f"metadata field {f!r} is not key=value")
        k, v = (x.strip() for x in f.split("=", 1))
        if k == "signature":
            kw[k] = int(v)
        elif k in ("alternating", "split", "exceptional"):
            if v.lower() not in _BOOL:
                raise PDError(f"{k}={v!r} is not a boolean")
            kw[k] = _BOOL[v.lower()]
        elif k == "basepoint":
            base_point = int(v)
        elif k in ("mirror_of", "same_as"):
            kw[k] = v
        else:
            raise PDError(f"unknown metadata key {k!r}")
    return LinkMetadata(**kw), base_point


def read_census(source):
    """Parse census text (or a path to it) into :class:`CensusEntry` items.

    One entry per line: ``name <tab> pd [<tab> key=value ...]``.  Blank
    lines and ``#`` comments are skipped.  A bad PD does not abort the
    read; the entry carries the error instead.
    """
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and "\t" not in source and Path(source).is_file()):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = raw.split("\t")
        name = fields[0].strip()
        pd = fields[1].strip() if len(fields) > 1 else ""
        try:
            if not name or len(fields) < 2:
                raise PDError("expected name<TAB>pd")
            meta, bp = _parse_meta(fields[2:])
            d = parse_pd(pd, name=name, base_point=bp, meta=meta)
            out.append(CensusEntry(name, pd, meta, bp, d, None, n))
        except (PDError, ValueError) as exc:
            out.append(CensusEntry(name, pd, LinkMetadata(), None, None, str(exc), n))
    return out


def bundled_census(which="census"):
    """Entries of a census shipped with the package (``census`` or ``stretch``)."""
    from importlib import resources
    text = resources.files("khtorsion").joinpath("data", f"{which}.tsv").read_text(
        encoding="utf-8")
    return read_census(text)
