"""
Exact Laurent polynomials in one variable (q) and two variables (t, q).

Coefficients are Python integers.  Both classes are immutable and hashable
so they can sit in result records and be compared directly in tests.
"""

import math
from collections import defaultdict

__all__ = ["LaurentPoly", "BigradedPoly", "TorsionPoly", "Q", "QINV"]


def _clean(d):
    return {k: int(v) for k, v in d.items() if v}


def _fmt_power(var, e):
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}" if e > 0 else f"{var}^({e})"


def _fmt_term(c, mono):
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def _join(terms):
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


class LaurentPoly:
    """Sum of c_e q^e with integer c_e."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        object.__setattr__(self, "coeffs", _clean(dict(coeffs or {})))

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def monomial(cls, e, c=1):
        return cls({e: c})

    @classmethod
    def from_list(cls, pairs):
        out = defaultdict(int)
        for e, c in pairs:
            out[int(e)] += int(c)
        return cls(out)

    def to_list(self):
        return [[e, c] for e, c in sorted(self.coeffs.items())]

    # arithmetic
    def __add__(self, other):
        other = _lift(other)
        out = defaultdict(int, self.coeffs)
        for e, c in other.coeffs.items():
            out[e] += c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out = defaultdict(int)
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] += c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if len(self.coeffs) == 1:
                (e, c), = self.coeffs.items()
                if abs(c) == 1:
                    return LaurentPoly({e * n: c ** (-n)})
            raise ValueError("only monomials with unit coefficient invert")
        out = LaurentPoly({0: 1})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, e):
        return self.coeffs.get(e, 0)

    @property
    def min_degree(self):
        return min(self.coeffs) if self.coeffs else None

    @property
    def max_degree(self):
        return max(self.coeffs) if self.coeffs else None

    def shift(self, k):
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def divmod(self, other):
        """Long division by ``other``; returns (quotient, remainder)."""
        other = _lift(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return LaurentPoly(), LaurentPoly()
        a_lo, b_lo = self.min_degree, other.min_degree
        a, b = self.shift(-a_lo), other.shift(-b_lo)
        db = b.max_degree
        lead = b[db]
        rem = dict(a.coeffs)
        quot = {}
        for k in range(a.max_degree - db, -1, -1):
            c = rem.get(k + db, 0)
            if not c:
                continue
            if c % lead:
                break
            f = c // lead
            quot[k] = f
            for e, v in b.coeffs.items():
                rem[k + e] = rem.get(k + e, 0) - f * v
        q = LaurentPoly(quot).shift(a_lo - b_lo)
        return q, self - q * other

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    def at_one(self):
        return sum(self.coeffs.values())

    def at_minus_one(self):
        return sum(c if e % 2 == 0 else -c for e, c in self.coeffs.items())

    def at_i(self):
        """Value at q = sqrt(-1) as a Gaussian integer (re, im)."""
        units = ((1, 0), (0, 1), (-1, 0), (0, -1))
        re = im = 0
        for e, c in self.coeffs.items():
            ur, ui = units[e % 4]
            re += c * ur
            im += c * ui
        return re, im

    def abs_at_i(self):
        re, im = self.at_i()
        n2 = re * re + im * im
        r = math.isqrt(n2)
        if r * r != n2:
            raise ArithmeticError(f"|J(i)|^2 = {n2} is not a square")
        return r

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        terms = [_fmt_term(c, _fmt_power("q", e))
                 for e, c in sorted(self.coeffs.items())]
        return _join(terms)


def _lift(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


Q = LaurentPoly({1: 1})
QINV = LaurentPoly({-1: 1})


class BigradedPoly:
    """Sum of c t^i q^j; keys are (i, j)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        object.__setattr__(self, "coeffs", _clean(dict(coeffs or {})))

    def __setattr__(self, *a):
        raise AttributeError("BigradedPoly is immutable")

    @classmethod
    def from_list(cls, triples):
        out = defaultdict(int)
        for i, j, c in triples:
            out[(int(i), int(j))] += int(c)
        return cls(out)

    def to_list(self):
        return [[i, j, c] for (i, j), c in sorted(self.coeffs.items())]

    def __add__(self, other):
        out = defaultdict(int, self.coeffs)
        for k, c in other.coeffs.items():
            out[k] += c
        return BigradedPoly(out)

    def __neg__(self):
        return BigradedPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BigradedPoly({k: c * other for k, c in self.coeffs.items()})
        out = defaultdict(int)
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                out[(a1 + a2, b1 + b2)] += c1 * c2
        return BigradedPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BigradedPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, key):
        return self.coeffs.get(key, 0)

    def shift(self, di, dj):
        return BigradedPoly({(i + di, j + dj): c for (i, j), c in self.coeffs.items()})

    def at_t(self, t):
        """Substitute t = +-1 and return a LaurentPoly in q."""
        if t not in (1, -1):
            raise ValueError("only t = 1 or t = -1 is supported")
        out = defaultdict(int)
        for (i, j), c in self.coeffs.items():
            out[j] += c * (t ** (i % 2))
        return LaurentPoly(out)

    def nonnegative(self):
        return all(c >= 0 for c in self.coeffs.values())

    def total(self):
        return sum(self.coeffs.values())

    def __repr__(self):
        return f"BigradedPoly({self})"

    def __str__(self):
        terms = []
        for (i, j), c in sorted(self.coeffs.items()):
            mono = " ".join(x for x in (_fmt_power("t", i), _fmt_power("q", j)) if x)
            terms.append(_fmt_term(c, mono.replace(" ", "*")))
        return _join(terms)


class TorsionPoly:
    """Sum of t_{p^k}^{i,j} t^i Q_{p^k}^j; keys are (i, p^k, j)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        object.__setattr__(self, "coeffs", _clean(dict(coeffs or {})))

    def __setattr__(self, *a):
        raise AttributeError("TorsionPoly is immutable")

    @classmethod
    def from_list(cls, rows):
        return cls({(int(i), int(q), int(j)): int(c) for i, q, j, c in rows})

    def to_list(self):
        return [[i, q, j, c] for (i, q, j), c in sorted(self.coeffs.items())]

    def orders(self):
        return sorted({q for (_, q, _) in self.coeffs})

    def collapse(self, orders=None):
        """Set Q_{p^k} = q for the given orders (all when None)."""
        out = defaultdict(int)
        for (i, q, j), c in self.coeffs.items():
            if orders is None or q in orders:
                out[(i, j)] += c
        return BigradedPoly(out)

    def __eq__(self, other):
        return isinstance(other, TorsionPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"TorsionPoly({self})"

    def __str__(self):
        terms = []
        for (i, q, j), c in sorted(self.coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0], kv[0][2])):
            mono = "*".join(x for x in (_fmt_power("t", i), _fmt_power(f"Q{q}", j)) if x)
            terms.append(_fmt_term(c, mono or f"Q{q}^0"))
        return _join(terms)
