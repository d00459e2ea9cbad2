import csv
import io

import pytest

from khtorsion.diagram import LinkMetadata, parse_pd
from khtorsion.homology import compute_homology
from khtorsion.invariants import classify, graded_euler, knight_move_decompose
from khtorsion import verify as V

from helpers import HOPF, TREFOIL
from mutations import SignFlippedComplex, rank_bumped


@pytest.mark.parametrize("n,dims", [(1, "1,1"), (2, "1,2,1"), (8, None), (12, None)])
def test_gn_acyclic(n, dims):
    r = V.check_gn_acyclic(n)
    assert r.passed
    if dims:
        assert r.detail == "dims " + dims


def test_gn_range():
    with pytest.raises(ValueError):
        V.check_gn_acyclic(13)


def test_calibration_is_plus_one():
    assert V.calibrate_diagonals() == 1


@pytest.mark.parametrize("pd,m", [("unlink 1", 1), (HOPF, 2), (TREFOIL, 1)])
def test_lee_dimension_small(pd, m):
    r = V.check_lee_dimension(parse_pd(pd), 5)
    assert r.passed, r.detail


def test_lee_rejects_two():
    with pytest.raises(ValueError):
        V.check_lee_dimension(parse_pd(TREFOIL), 2)


def test_sign_flip_breaks_d_squared():
    d = parse_pd(TREFOIL, name="3_1")
    bad = SignFlippedComplex(d)
    res = V.check_chain_identities(d, cx=bad, only={"d^2=0"})
    assert len(res) == 1 and not res[0].passed
    i, j = bad.target
    assert str((i, j)) in res[0].detail or str((i - 1, j)) in res[0].detail


def test_rank_bump_breaks_knight_move():
    t = compute_homology(parse_pd(TREFOIL))
    assert knight_move_decompose(t).ok
    assert not knight_move_decompose(rank_bumped(t, (2, 5))).ok
    assert classify(rank_bumped(t, (2, 5))).t_class == "T-thick"


def test_oracle_known_values():
    assert V.oracle_jones(parse_pd("unlink 1")) == graded_euler(
        compute_homology(parse_pd("unlink 1")))
    t = compute_homology(parse_pd(TREFOIL))
    assert V.oracle_jones(parse_pd(TREFOIL)) == graded_euler(t)


def test_dense_snf_textbook():
    assert V.dense_snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == (2, 6, 12)


def test_dense_homology_trefoil():
    d = parse_pd(TREFOIL)
    assert V.dense_homology(d) == compute_homology(d, reduced=False, primes=()).groups


def test_theorem_b_exceptional_metadata():
    d = parse_pd(HOPF, name="hopf", meta=LinkMetadata(signature=-1, alternating=True,
                                                       split=False, exceptional=True))
    t = compute_homology(d)
    assert V.check_theorem_B(t).passed
    # without the exceptional flag the Hopf link must fail the corollary
    d2 = parse_pd(HOPF, name="hopf", meta=LinkMetadata(signature=-1, alternating=True,
                                                        split=False))
    r = V.check_theorem_B(compute_homology(d2))
    assert not r.passed and "Z_2" in r.detail


def test_diagonal_support_wrong_signature_fails():
    d = parse_pd(TREFOIL, name="3_1", meta=LinkMetadata(signature=2, alternating=True,
                                                         split=False))
    assert not V.check_diagonal_support(compute_homology(d)).passed


def test_verify_entry_all_pass():
    d = parse_pd(TREFOIL, name="3_1", meta=LinkMetadata(signature=-2, alternating=True,
                                                         split=False))
    res = V.verify_entry(d)
    assert res.checks and all(c.passed for c in res.checks)


def test_report_format():
    checks = [V.CheckResult("d^2=0", "3_1", True), V.CheckResult("x", "y", False, "why")]
    text = V.write_report(checks, header=["suites: chain"])
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    assert rows[0] == ["check", "subject", "passed", "detail"]
    assert rows[1] == ["d^2=0", "3_1", "true", ""]
    assert rows[2] == ["x", "y", "false", "why"]


def test_conjecture_scan_flags_odd_torsion():
    from khtorsion.homology import HomologyTable
    from khtorsion.linalg import AbelianGroup
    t = HomologyTable(groups={(0, 1): AbelianGroup.make(1), (0, 3): AbelianGroup.make(1),
                              (1, 3): AbelianGroup.make(0, {3: 1})}, name="fake", n_crossings=3,
                      linking=())
    res = {r.check_name.split(" (")[0]: r for r in V.scan_conjectures([(t, classify(t))])}
    assert not res["Conjecture 2"].passed and "fake" in res["Conjecture 2"].detail
    assert not res["Conjecture 1"].passed
    assert all(r.level == "conjecture" for r in res.values())
