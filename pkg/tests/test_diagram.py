import numpy as np
import pytest
from hypothesis import given, strategies as st

from khtorsion.diagram import (LinkMetadata, PDError, braid_closure_pd, crossing_sign,
                               linking_numbers, parse_pd, read_census, resolve,
                               State, torus_link_pd)

from helpers import HOPF, TREFOIL, braid_diagram, braid_diagrams


def test_trefoil_basics():
    d = parse_pd(TREFOIL)
    assert (d.n_crossings, d.m_components, d.writhe) == (3, 1, 3)
    assert d.n_positive == 3 and d.n_negative == 0


def test_parse_accepts_common_spellings():
    a = parse_pd(TREFOIL)
    b = parse_pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]")
    c = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")
    assert a.pd == b.pd == c.pd


def test_unknot_and_unlinks():
    d = parse_pd("unlink 1")
    assert (d.n_crossings, d.m_components) == (0, 1)
    assert parse_pd("unlink 3").m_components == 3


@pytest.mark.parametrize("bad", [
    "[[1,2,3]]",                      # short tuple
    "[[1,2,3,4]]",                    # labels appear once
    "[[1,5,2,4],[3,1,4,6],[5,3,6,2],[7,7,7,7]]",
    "hello",
])
def test_malformed_pd_rejected(bad):
    with pytest.raises(PDError):
        parse_pd(bad)


def test_nonplanar_pd_rejected():
    # a consistent-looking gluing that cannot be drawn in the plane
    with pytest.raises(PDError):
        parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]")


def test_mirror_flips_signs():
    d = parse_pd(TREFOIL, meta=LinkMetadata(signature=-2))
    m = d.mirror()
    assert m.writhe == -3
    assert m.meta.signature == 2


def test_hopf_linking_number():
    d = parse_pd(HOPF)
    lk = linking_numbers(d)
    assert d.m_components == 2
    assert abs(lk[0][1]) == 1 and lk[0][1] == lk[1][0]


def test_torus_link_pd_components():
    for k in range(1, 8):
        d = parse_pd(str([list(x) for x in torus_link_pd(k)]))
        assert d.m_components == (2 if k % 2 == 0 else 1)
        assert d.writhe == k


def test_braid_closure_needs_every_strand():
    with pytest.raises(ValueError):
        braid_closure_pd([1], 3)


@given(braid_diagrams())
def test_writhe_invariant_under_relabel(d):
    labels = sorted({v for x in d.pd for v in x})
    rng = np.random.default_rng(len(labels))
    perm = dict(zip(labels, (int(v) + 100 for v in rng.permutation(labels))))
    e = d.relabeled(perm)
    assert e.writhe == d.writhe
    assert e.m_components == d.m_components


@given(braid_diagrams(), st.randoms(use_true_random=False))
def test_sign_invariant_under_crossing_order(d, rnd):
    order = list(range(d.n_crossings))
    rnd.shuffle(order)
    e = d.permuted(order)
    assert [e.signs[k] for k in range(e.n_crossings)] == [d.signs[k] for k in order]


@given(braid_diagrams())
def test_crossing_sign_agrees_with_signs(d):
    assert [crossing_sign(d, k) for k in range(d.n_crossings)] == list(d.signs)


@given(braid_diagrams())
def test_braid_writhe_is_exponent_sum(d):
    word = eval(d.name[len("braid"):])
    assert d.writhe == sum(1 if g > 0 else -1 for g in word)


@given(braid_diagrams())
def test_circle_count_parity(d):
    # flipping one marker changes the number of circles by exactly one
    n = d.n_crossings
    s0 = State.from_word("+" * n)
    k0 = resolve(d, s0).n_circles
    for c in range(n):
        assert abs(resolve(d, s0.flip(c)).n_circles - k0) == 1


def test_census_reader_keeps_going():
    text = ("# comment\n"
            "3_1\t" + TREFOIL + "\tsignature=-2\talternating=true\n"
            "broken\t[[1,2,3]]\n"
            "\n"
            "hopf\t" + HOPF + "\tsplit=false\n")
    entries = read_census(text)
    assert [e.name for e in entries] == ["3_1", "broken", "hopf"]
    assert entries[0].meta.signature == -2 and entries[0].meta.alternating
    assert entries[1].diagram is None and entries[1].error
    assert entries[2].diagram.m_components == 2


def test_census_rejects_unknown_metadata():
    e = read_census("x\t" + TREFOIL + "\tcolour=red\n")[0]
    assert e.diagram is None and "colour" in e.error


def test_signature_parity_checked():
    e = read_census("x\t" + TREFOIL + "\tsignature=-1\n")[0]
    assert e.diagram is None


def test_bundled_census_loads(census_entries):
    assert len(census_entries) > 290
    assert all(e.error is None for e in census_entries)
    names = {e.name for e in census_entries}
    assert {"0_1", "3_1", "8_19", "9_42", "10_124", "TL_9"} <= names


def test_base_point_choice():
    d = parse_pd(TREFOIL)
    assert d.with_base_point(4).base_point == 4
