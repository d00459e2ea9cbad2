import pytest
from hypothesis import given, settings

from khtorsion.diagram import LinkMetadata, parse_pd
from khtorsion.homology import HomologyTable, compute_homology, diagonal
from khtorsion.invariants import (classify, classify_torsion, determinant, diagonal_support,
                                  exceptional_block, graded_euler, jones_reduced,
                                  knight_move_decompose, reduced_euler, torsion_polynomial)
from khtorsion.linalg import AbelianGroup
from khtorsion.poly import BigradedPoly, LaurentPoly

from helpers import HOPF, TREFOIL, braid_diagrams


def table(groups, m=1, linking=()):
    return HomologyTable(groups={k: AbelianGroup.make(*v) for k, v in groups.items()},
                         m_components=m, linking=linking)


def test_unknot_trivially_thin():
    t = compute_homology(parse_pd("unlink 1"))
    r = classify(t)
    assert r.verdict() == "H-slim, T-thin (trivially)"
    assert r.s_value == 0


def test_trefoil_classification():
    t = compute_homology(parse_pd(TREFOIL))
    r = classify(t)
    assert r.verdict() == "H-slim, T-thin"
    assert r.s_value == 2
    assert r.knight_poly == BigradedPoly({(2, 4): 1})
    assert jones_reduced(t) == LaurentPoly({2: 1, 6: 1, 8: -1})
    assert determinant(jones_reduced(t)) == 3


def test_hopf_block():
    t = compute_homology(parse_pd(HOPF))
    km = knight_move_decompose(t)
    assert km.ok and km.g == {}
    assert determinant(jones_reduced(t)) == 2


def test_exceptional_block_knot():
    assert exceptional_block(4) == {(0, 3): 1, (0, 5): 1}


def test_exceptional_block_link_uses_linking():
    blk = exceptional_block(1, ((0, 1), (1, 0)), 2)
    assert blk == {(0, 0): 1, (0, 2): 1, (2, 4): 1, (2, 6): 1}


def test_knight_move_rank_corruption_detected():
    t = compute_homology(parse_pd(TREFOIL))
    assert knight_move_decompose(t).ok
    bad = dict(t.groups)
    g = bad[(2, 5)]
    bad[(2, 5)] = AbelianGroup.make(g.rank + 1, g.torsion_dict)
    km = knight_move_decompose(HomologyTable(groups=bad, m_components=1))
    assert not km.ok


def test_ambiguous_s_reported():
    # a lone pair of generators at (0, 1), (0, 3) fits s = 2 only
    assert knight_move_decompose(table({(0, 1): (1,), (0, 3): (1,)})).s == 2
    # rank 2 in each of two columns admits no decomposition
    assert not knight_move_decompose(table({(0, 1): (2,), (1, 5): (1,)})).ok


def test_link_without_linking_numbers_unchecked():
    t = table({(0, 0): (1,), (0, 2): (1,)}, m=2, linking=None)
    km = knight_move_decompose(t)
    assert not km.ok and "unchecked" in km.reason


def test_t_classes_synthetic():
    base = {(0, 1): (1,), (0, 3): (1,), (2, 5): (1,), (3, 9): (1,)}
    t_thin = table({**base, (3, 7): (0, {2: 1})})
    assert classify(t_thin).t_class == "T-thin"
    wt = table({**base, (3, 7): (0, {4: 1})})
    assert classify(wt).t_class == "WT-thin"
    rich = table({**base, (3, 7): (0, {2: 1}), (1, 3): (0, {2: 1})})
    r = classify(rich)
    assert r.t_class == "T-rich" and r.excess == [(1, 3)]
    odd = table({**base, (3, 7): (0, {3: 1})})
    assert classify(odd).t_class == "T-thick"
    missing = table(base)
    assert classify(missing).t_class == "T-thick"


def test_h_classes_synthetic():
    slim = table({(0, 1): (1,), (0, 3): (1,)})
    assert diagonal_support(slim)[1] == "H-slim"
    thin = table({(0, 1): (1,), (0, 3): (1,), (2, 5): (0, {2: 1}), (1, 3): (0, {2: 1})})
    # support on b = -3 and b = -1; the upper diagonal b = -3 is torsion-free
    assert diagonal_support(thin)[:3] == (frozenset({-3, -1}), "H-slim", -3)
    thick = table({(0, 1): (1,), (0, 3): (1,), (3, 1): (1,)})
    assert diagonal_support(thick)[1] == "H-thick"


def test_h_thin_not_slim():
    # torsion on the upper diagonal (smaller b) makes it H-thin only
    t = table({(0, -1): (1,), (0, 1): (1,), (1, 1): (1,), (1, 3): (0, {2: 1})})
    assert diagonal_support(t)[1] == "H-thin"


@settings(max_examples=25)
@given(braid_diagrams(max_len=6))
def test_reduced_euler_is_jones(d):
    t = compute_homology(d)
    assert reduced_euler(t) * LaurentPoly({1: 1, -1: 1}) == graded_euler(t)


@settings(max_examples=25)
@given(braid_diagrams(max_len=6))
def test_t_thin_torsion_polynomial(d):
    # for T-thin knots Kh_T = t q^{s+1} Kh' with Q_2 -> q
    t = compute_homology(d, reduced=False, primes=())
    r = classify(t)
    if r.t_class != "T-thin" or d.m_components != 1:
        return
    want = r.knight_poly.shift(1, r.s_value + 1)
    assert torsion_polynomial(t).collapse([2]) == want


@settings(max_examples=25)
@given(braid_diagrams(max_len=6))
def test_knight_move_exists_for_knots(d):
    if d.m_components != 1:
        return
    t = compute_homology(d, reduced=False, primes=())
    km = knight_move_decompose(t)
    assert km.ok and km.s % 2 == 0
    assert all(n > 0 for n in km.g.values())


def test_scope_note_for_thick_links():
    t = table({(0, 0): (1,), (0, 2): (1,), (4, 0): (1,)}, m=2, linking=((0, 1), (1, 0)))
    assert "scope" in classify(t).scope_note


def test_diagonal_helper():
    assert diagonal(3, 7) == -1
