import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ordclass.errors import NonPositiveDefinite
from ordclass.linalg import (
    char_poly_int, det_int, hnf, hnf_rows, identity_matrix, kernel_basis,
    ldl_decomposition, lll_reduce, mat_inverse_int, mat_mul, rank_int,
    short_vectors, snf, solve_left_frac, solve_left_int, vec_mat,
)
from oracles import brute_short_vectors, frac_det, frac_inverse, lattice_same_rowspan

small_int = st.integers(min_value=-30, max_value=30)


def rand_matrix(rng, m, n, lo=-20, hi=20):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def rand_unimodular(rng, n, steps=12):
    U = identity_matrix(n)
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-3, 3)
        for k in range(n):
            U[i][k] += q * U[j][k]
    if rng.random() < 0.5:
        i, j = rng.randrange(n), rng.randrange(n)
        U[i], U[j] = U[j], U[i]
    return U


def is_hnf(H):
    lastcol = -1
    rows = [r for r in H if any(r)]
    zrows = [r for r in H if not any(r)]
    if H != rows + zrows:
        return False
    pivcols = []
    for r in rows:
        c = next(i for i, x in enumerate(r) if x)
        if c <= lastcol or r[c] <= 0:
            return False
        lastcol = c
        pivcols.append(c)
    for i, r in enumerate(rows):
        for j in range(i):
            if not (0 <= rows[j][pivcols[i]] < r[pivcols[i]]):
                return False
    return True


def test_hnf_identity():
    H, U = hnf(identity_matrix(4))
    assert H == identity_matrix(4)
    assert U == identity_matrix(4)


def test_hnf_row_swap_invariance():
    assert hnf_rows([[2, 0], [0, 3]]) == hnf_rows([[0, 3], [2, 0]]) == [[2, 0], [0, 3]]


def test_hnf_worked_example():
    # [[4,6],[2,2]]: (4,6) - 2*(2,2) = (0,2); (2,2) - (0,2) = (2,0)
    assert hnf_rows([[4, 6], [2, 2]]) == [[2, 0], [0, 2]]


def test_hnf_transform_and_shape():
    rng = random.Random(7)
    for _ in range(120):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = rand_matrix(rng, m, n)
        H, U = hnf(M)
        assert mat_mul(U, M) == H
        assert abs(det_int(U)) == 1
        assert is_hnf(H)


def test_hnf_class_function():
    rng = random.Random(11)
    for _ in range(80):
        n = rng.randint(1, 5)
        M = rand_matrix(rng, n, n)
        P = rand_unimodular(rng, n)
        assert hnf_rows(M) == hnf_rows(mat_mul(P, M))


def test_hnf_idempotent():
    rng = random.Random(13)
    for _ in range(60):
        M = rand_matrix(rng, 4, 4)
        H = hnf_rows(M)
        if H:
            assert hnf_rows(H) == H


def test_snf_examples():
    S, U, V = snf([[2, 0], [0, 4]])
    assert S == [[2, 0], [0, 4]]
    S, U, V = snf([[2, 0], [0, 3]])
    assert S == [[1, 0], [0, 6]]
    S, U, V = snf([[0, 0], [0, 0]])
    assert S == [[0, 0], [0, 0]]


def test_snf_properties():
    rng = random.Random(17)
    for _ in range(150):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = rand_matrix(rng, m, n)
        S, U, V = snf(M)
        assert mat_mul(mat_mul(U, M), V) == S
        assert abs(det_int(U)) == 1
        assert abs(det_int(V)) == 1
        diag = [S[i][i] for i in range(min(m, n))]
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert S[i][j] == 0
        for a, b in zip(diag, diag[1:]):
            if a:
                assert b % a == 0
            else:
                assert b == 0
        if m == n:
            assert abs(det_int(M)) == abs(frac_det(M))
            prod = 1
            for d in diag:
                prod *= d
            assert abs(prod) == abs(det_int(M))


def test_kernel_examples():
    assert kernel_basis(identity_matrix(3)) == []
    K = kernel_basis([[1, 1], [1, 1]])
    assert len(K) == 1
    assert K[0] in ([1, -1], [-1, 1])


def test_kernel_properties():
    rng = random.Random(23)
    for _ in range(100):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        M = rand_matrix(rng, m, n, -8, 8)
        K = kernel_basis(M)
        for v in K:
            assert vec_mat(v, M) == [0] * n
        assert len(K) + rank_int(M) == m
        if K:
            assert rank_int(K) == len(K)


def test_det_against_oracle():
    rng = random.Random(29)
    for _ in range(150):
        n = rng.randint(1, 6)
        M = rand_matrix(rng, n, n)
        assert det_int(M) == frac_det(M)


def test_inverse_against_oracle():
    rng = random.Random(31)
    count = 0
    while count < 120:
        n = rng.randint(1, 6)
        M = rand_matrix(rng, n, n)
        if det_int(M) == 0:
            with pytest.raises(ZeroDivisionError):
                mat_inverse_int(M)
            continue
        N, d = mat_inverse_int(M)
        oracle = frac_inverse(M)
        assert d > 0
        for i in range(n):
            for j in range(n):
                assert Fraction(N[i][j], d) == oracle[i][j]
        count += 1


def test_solve_left():
    A = [[2, 1], [1, 1]]
    assert solve_left_frac(A, [3, 2]) == [Fraction(1), Fraction(1)]
    assert solve_left_int(A, [3, 2]) == [1, 1]
    assert solve_left_int([[2, 0], [0, 2]], [1, 0]) is None


def test_char_poly():
    assert char_poly_int([[5]]) == (-5, 1)
    # companion matrix of x^3 - 2x - 7 (rows: alpha * e_i)
    C = [[0, 1, 0], [0, 0, 1], [7, 2, 0]]
    assert char_poly_int(C) == (-7, -2, 0, 1)
    rng = random.Random(37)
    for _ in range(40):
        n = rng.randint(1, 5)
        M = rand_matrix(rng, n, n, -6, 6)
        cp = char_poly_int(M)
        # oracle: det(kI - M) at integer points
        for k in range(n + 2):
            kI_minus_M = [[(k if i == j else 0) - M[i][j] for j in range(n)]
                          for i in range(n)]
            val = frac_det(kI_minus_M)
            acc = 0
            for c in reversed(cp):
                acc = acc * k + c
            assert val == acc


def test_lll_identity_like():
    B = [[1, 0], [0, 1]]
    G = [[1, 0], [0, 1]]
    B2, T = lll_reduce(B, G)
    assert abs(det_int(T)) == 1


def test_lll_short_first_vector():
    B = [[1, 0], [100, 1]]
    G = [[1, 0], [0, 1]]
    B2, T = lll_reduce(B, G)
    assert abs(det_int(T)) == 1
    # same lattice
    assert lattice_same_rowspan([[int(x) for x in r] for r in B2], B)
    v = B2[0]
    assert v[0] * v[0] + v[1] * v[1] <= 2


def test_lll_rejects_non_pd():
    with pytest.raises(NonPositiveDefinite):
        lll_reduce([[1, 0], [0, 1]], [[1, 0], [0, -1]])
    with pytest.raises(NonPositiveDefinite):
        ldl_decomposition([[0, 0], [0, 1]])


def test_lll_random_lattice_preserved():
    rng = random.Random(41)
    for _ in range(40):
        n = rng.randint(2, 4)
        while True:
            B = rand_matrix(rng, n, n, -15, 15)
            if det_int(B) != 0:
                break
        G = identity_matrix(n)
        B2, T = lll_reduce(B, G)
        assert abs(det_int(T)) == 1
        B2i = [[int(x) for x in row] for row in B2]
        assert hnf_rows(B2i) == hnf_rows(B)


def test_short_vectors_against_brute_force():
    rng = random.Random(43)
    for _ in range(25):
        n = rng.randint(1, 3)
        # random PD Gram: A*A^T + I
        A = rand_matrix(rng, n, n, -3, 3)
        G = [[sum(A[i][k] * A[j][k] for k in range(n)) + (i == j)
              for j in range(n)] for i in range(n)]
        bound = rng.randint(1, 25)
        got = {tuple(v) for v in short_vectors(G, bound)}
        want = brute_short_vectors(G, bound, 30)
        assert got == want


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small_int, min_size=3, max_size=3), min_size=1, max_size=5))
def test_hypothesis_hnf_snf_consistency(M):
    H, U = hnf(M)
    assert mat_mul(U, M) == H
    assert abs(det_int(U)) == 1
    S, P, Q = snf(M)
    assert mat_mul(mat_mul(P, M), Q) == S
    # HNF and SNF agree on rank
    assert rank_int(M) == sum(1 for i in range(min(len(M), 3)) if S[i][i])
