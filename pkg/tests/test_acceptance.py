"""
Acceptance criteria, one test each.  A PASS/FAIL line per criterion is
printed in the terminal summary (see conftest.py).

Criterion 11 needs a few minutes and a few GB; set KHTORSION_SKIP_STRETCH=1
to skip it.
"""

import time

import pytest

from khtorsion.complex import KhovanovComplex
from khtorsion.diagram import bundled_census, parse_pd
from khtorsion.homology import compute_homology
from khtorsion.invariants import classify, graded_euler, knight_move_decompose
from khtorsion.linalg import AbelianGroup
from khtorsion import verify as V

from conftest import stretch_enabled
from mutations import SignFlippedComplex, rank_bumped

Z = AbelianGroup.make(1)

# pinned tolerances
UNKNOT_BUDGET_S = 1e-3
ALT_MAX_CROSSINGS = 10
LEE_MAX_CROSSINGS = 8
DENSE_MAX_CROSSINGS = 5
GN_MAX = 12


def _alt(census, max_n):
    return [r for r in census.values()
            if r.alternating_nonsplit and r.diagram.n_crossings <= max_n]


@pytest.mark.criterion(1, "unknot: Z at (0,-1),(0,1); reduced Z at (0,0); < 1 ms")
def test_c01_unknot():
    d = parse_pd("unlink 1")
    compute_homology(d)  # warm caches
    best = float("inf")
    for _ in range(20):
        t0 = time.perf_counter()
        t = compute_homology(d, reduced=True, primes=())
        best = min(best, time.perf_counter() - t0)
    assert t.groups == {(0, -1): Z, (0, 1): Z}
    assert t.reduced == {(0, 0): Z}
    assert best < UNKNOT_BUDGET_S, f"{best * 1e3:.3f} ms"


@pytest.mark.criterion(2, "Euler characteristic equals the bracket oracle on the whole census")
def test_c02_euler_oracle(census):
    bad = []
    for name, r in census.items():
        K = graded_euler(r.table)
        Ko = V.oracle_jones(r.diagram)
        if K != Ko:
            bad.append(f"{name}: {K} != {Ko}")
    names = set(census)
    assert {f"TL_{k}" for k in range(2, 10)} <= names
    # all 165 prime knots with 10 crossings
    assert sum(1 for n in names if n.startswith("10_")) == 165
    assert not bad, bad[:5]


@pytest.mark.criterion(3, "sparse SNF homology equals dense oracle for all diagrams <= 5 crossings")
def test_c03_dense_equivalence(census):
    small = [r for r in census.values() if r.diagram.n_crossings <= DENSE_MAX_CROSSINGS]
    assert len(small) >= 15
    bad = []
    for r in small:
        for d in (r.diagram, r.diagram.mirror()):
            sparse = compute_homology(d, reduced=False, primes=()).groups
            if sparse != V.dense_homology(d):
                bad.append(d.name)
    assert not bad, bad


@pytest.mark.criterion(4, "8_19 is H-thick and T-thick")
def test_c04_8_19(census):
    for name in ("8_19", "T(3,4)"):
        rep = census[name].report
        assert (rep.h_class, rep.t_class) == ("H-thick", "T-thick"), name


@pytest.mark.criterion(5, "9_42 is H-thick and T-thin")
def test_c05_9_42(census):
    rep = census["9_42"].report
    assert (rep.h_class, rep.t_class) == ("H-thick", "T-thin")


@pytest.mark.criterion(6, "alternating non-split census <= 10 crossings: 2-power torsion only")
def test_c06_theorem_a(census):
    alt = _alt(census, ALT_MAX_CROSSINGS)
    assert len(alt) > 200
    bad = [r.name for r in alt if not V.check_theorem_A(r.table, r.report).passed]
    odd = [r.name for r in alt if any(q & (q - 1) for q in r.table.torsion_orders())]
    orders = sorted({q for r in alt for q in r.table.torsion_orders()})
    print(f"torsion orders seen on {len(alt)} alternating entries: {orders}")
    assert not bad and not odd, (bad, odd)


@pytest.mark.criterion(7, "WT-thin, Z_2 torsion, d(L) and rank bounds on alternating entries")
def test_c07_theorem_b(census):
    alt = _alt(census, ALT_MAX_CROSSINGS)
    bad = []
    exceptional = []
    for r in alt:
        res = V.check_theorem_B(r.table, r.report)
        if not res.passed:
            bad.append(f"{r.name}: {res.detail}")
        if V.is_exceptional(r.table):
            exceptional.append(r.name)
    assert sorted(exceptional) == sorted(["0_1", "L2a1{0}", "L2a1{1}", "TL_2"])
    assert not bad, bad[:5]


@pytest.mark.criterion(8, "mod-2 column sums vanish, nu X + X nu = id, G_n acyclic for n <= 12")
def test_c08_z2_suite(census):
    bad = []
    for name, r in census.items():
        ex = V.check_z2_exactness(r.diagram, r.table)
        if not ex.passed:
            bad.append(f"{name}: {ex.detail}")
        for c in V.check_chain_identities(r.diagram, only={"nu X + X nu = id mod 2"}):
            if not c.passed:
                bad.append(f"{name}: {c.detail}")
    for n in range(1, GN_MAX + 1):
        if not V.check_gn_acyclic(n).passed:
            bad.append(f"G_{n}")
    assert not bad, bad[:5]


@pytest.mark.criterion(9, "Lee homology mod 3 has dimension 2^m on alternating entries <= 8")
def test_c09_lee(census):
    alt = _alt(census, LEE_MAX_CROSSINGS)
    assert len(alt) > 50
    bad = []
    for r in alt:
        res = V.check_lee_dimension(r.diagram, 3)
        if not res.passed:
            bad.append(f"{r.name}: {res.detail}")
    assert not bad, bad[:5]


@pytest.mark.criterion(10, "alternating entries are H-slim on the (sigma +- 1)-diagonals")
def test_c10_diagonal_support(census):
    cal = V.calibrate_diagonals()
    assert cal == 1
    alt = [r for r in _alt(census, ALT_MAX_CROSSINGS) if r.entry.meta.signature is not None]
    bad = []
    for r in alt:
        res = V.check_diagonal_support(r.table, r.report, cal)
        if not res.passed:
            bad.append(f"{r.name}: {res.detail}")
    assert not bad, bad[:5]


@pytest.mark.criterion(11, "(4,5)-torus knot has Z_4 torsion and is T-rich")
@pytest.mark.skipif(not stretch_enabled(), reason="KHTORSION_SKIP_STRETCH is set")
def test_c11_torus_4_5():
    e = [e for e in bundled_census("stretch") if e.name == "T(4,5)"][0]
    d = e.diagram
    assert (d.n_crossings, d.m_components) == (15, 1)
    t = compute_homology(d, reduced=True, primes=(), cap=None)
    rep = classify(t)
    assert 4 in t.torsion_orders()
    assert rep.t_class == "T-rich"
    assert any(g.has_torsion for g in t.reduced.values())


@pytest.mark.criterion(12, "sign-corrupted d fails d^2 = 0; rank-corrupted table fails knight move")
def test_c12_mutations(census):
    for name in ("3_1", "4_1", "L2a1{1}", "8_19"):
        d = census[name].diagram
        bad = SignFlippedComplex(d)
        res = V.check_chain_identities(d, cx=bad, only={"d^2=0"})
        assert not res[0].passed and "(i,j)=" in res[0].detail, name
        t = census[name].table
        assert knight_move_decompose(t).ok, name
        for key in list(t.groups)[:3]:
            assert not knight_move_decompose(rank_bumped(t, key)).ok, (name, key)
