import pytest
from hypothesis import given, strategies as st

from khtorsion.poly import BigradedPoly, LaurentPoly, Q, QINV, TorsionPoly

laurent = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)


@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(laurent, laurent)
def test_exact_division_recovers_factor(a, b):
    if not b:
        return
    assert (a * b).exact_div(b) == a


@given(laurent)
def test_divmod_identity(a):
    q, r = a.divmod(Q + QINV)
    assert q * (Q + QINV) + r == a


def test_not_divisible():
    with pytest.raises(ArithmeticError):
        (Q + 1).exact_div(Q + QINV)


@given(laurent, laurent)
def test_evaluations_are_ring_maps(a, b):
    assert (a * b).at_one() == a.at_one() * b.at_one()
    assert (a * b).at_minus_one() == a.at_minus_one() * b.at_minus_one()
    (ar, ai), (br, bi) = a.at_i(), b.at_i()
    assert (a * b).at_i() == (ar * br - ai * bi, ar * bi + ai * br)


def test_trefoil_jones_determinant():
    J = LaurentPoly({2: 1, 6: 1, 8: -1})
    assert J.abs_at_i() == 3
    assert str(J) == "q^2 + q^6 - q^8"


def test_list_roundtrip():
    J = LaurentPoly({-3: 2, 1: -1})
    assert LaurentPoly.from_list(J.to_list()) == J
    K = BigradedPoly({(0, 1): 1, (2, 5): 1})
    assert BigradedPoly.from_list(K.to_list()) == K
    T = TorsionPoly({(3, 2, 7): 1, (9, 4, 25): 1})
    assert TorsionPoly.from_list(T.to_list()) == T
    assert T.orders() == [2, 4]
    assert T.collapse([2]) == BigradedPoly({(3, 7): 1})


def test_at_t():
    K = BigradedPoly({(0, 1): 1, (1, 3): 2, (2, 5): 1})
    assert K.at_t(-1) == LaurentPoly({1: 1, 3: -2, 5: 1})
    assert K.at_t(1) == LaurentPoly({1: 1, 3: 2, 5: 1})
    with pytest.raises(ValueError):
        K.at_t(2)


def test_immutable():
    with pytest.raises(AttributeError):
        Q.coeffs = {}
