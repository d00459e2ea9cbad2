import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from khtorsion.linalg import (AbelianGroup, CompositionError, SparseIntMatrix, factorize,
                              homology_group, is_prime, rank_mod_p, smith_normal_form)
from khtorsion.verify import dense_snf


def int_matrices(max_rows=5, max_cols=5, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def _det(M):
    # Bareiss fraction-free elimination
    M = [list(r) for r in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            sw = next((r for r in range(k + 1, n) if M[r][k]), None)
            if sw is None:
                return 0
            M[k], M[sw] = M[sw], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


def determinantal_divisors(M):
    """gcd of all k x k minors, k = 1..min(r, c)."""
    r, c = len(M), len(M[0])
    out = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = math.gcd(g, _det([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g)
    return out


@given(int_matrices())
def test_snf_matches_determinantal_divisors(M):
    snf = smith_normal_form(SparseIntMatrix.from_dense(np.array(M)))
    dd = determinantal_divisors(M)
    assert len(snf.invariant_factors) == len(dd)
    prod = 1
    for d, want in zip(snf.invariant_factors, dd):
        prod *= d
        assert prod == want


@given(int_matrices(6, 6, -6, 6))
def test_snf_matches_textbook_route(M):
    snf = smith_normal_form(SparseIntMatrix.from_dense(np.array(M)))
    assert snf.invariant_factors == dense_snf(M)


@given(int_matrices(6, 6), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_two_routes(M, p):
    A = SparseIntMatrix.from_dense(np.array(M))
    snf = smith_normal_form(A)
    assert rank_mod_p(A, p) == snf.rank_mod(p)


@given(int_matrices(4, 4), int_matrices(4, 4))
def test_sparse_product_matches_numpy(M, N):
    A = np.array(M)
    B = np.array(N)
    if A.shape[1] != B.shape[0]:
        B = np.resize(B, (A.shape[1], B.shape[1]))
    got = (SparseIntMatrix.from_dense(A) @ SparseIntMatrix.from_dense(B)).to_dense()
    assert (got == A @ B).all()


def test_snf_known_cases():
    assert smith_normal_form(SparseIntMatrix.from_dense(np.array([[2, 4], [6, 8]]))).invariant_factors == (2, 4)
    assert smith_normal_form(SparseIntMatrix.from_dense(np.array([[6]]))).invariant_factors == (6,)
    assert smith_normal_form(SparseIntMatrix.zeros(3, 2)).invariant_factors == ()


def test_homology_of_multiplication_by_two():
    # Z --2--> Z: homology at the target is Z_2
    d_in = SparseIntMatrix.from_dense(np.array([[2]]))
    d_out = SparseIntMatrix.zeros(0, 1)
    g = homology_group(d_in, d_out)
    assert g == AbelianGroup.make(0, {2: 1})


def test_homology_rejects_non_complex():
    d_in = SparseIntMatrix.from_dense(np.array([[1]]))
    d_out = SparseIntMatrix.from_dense(np.array([[1]]))
    with pytest.raises(CompositionError):
        homology_group(d_in, d_out)


def test_abelian_group_prime_power_split():
    g = AbelianGroup.from_invariant_factors(1, [2, 12])
    assert g.torsion_dict == {2: 1, 4: 1, 3: 1}
    assert g.T(2) == 2 and g.t(4) == 1 and g.T(3) == 1
    assert str(AbelianGroup.make(2, {2: 1})) == "Z^2 + Z_2"


def test_bad_torsion_summand():
    with pytest.raises(ValueError):
        AbelianGroup.make(0, {6: 1})


@given(st.integers(2, 5000))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(p ** e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)


def test_sparse_sums_duplicates():
    A = SparseIntMatrix(2, 2, [0, 0, 1], [0, 0, 1], [1, 1, 5])
    assert A.to_dense().tolist() == [[2, 0], [0, 5]]
    assert (A + A - A).to_dense().tolist() == A.to_dense().tolist()
    assert not A.is_zero() and SparseIntMatrix(2, 2, [0], [0], [4]).is_zero(2)


@given(int_matrices(5, 5))
def test_triplet_text_roundtrip(M):
    A = SparseIntMatrix.from_dense(np.array(M))
    B = SparseIntMatrix.from_text(A.to_text())
    assert B == A
