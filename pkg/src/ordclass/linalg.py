"""Exact integer/rational matrix kernel.

Matrices are lists (or tuples) of rows; rows are lists/tuples of Python ints
unless a function documents Fraction entries.  Functions never mutate their
arguments.  Row convention throughout: lattice bases are rows, and transforms
act on the left (H = U*M).
"""

import math
from fractions import Fraction

from .errors import NonPositiveDefinite


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(m, n):
    return [[0] * n for _ in range(m)]


def copy_matrix(M):
    return [list(r) for r in M]


def transpose(M):
    return [list(col) for col in zip(*M)]


def mat_mul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_eq(A, B):
    return len(A) == len(B) and all(tuple(a) == tuple(b) for a, b in zip(A, B))


def vec_mat(v, M):
    out = [0] * len(M[0])
    for c, row in zip(v, M):
        if c:
            for j, x in enumerate(row):
                out[j] += c * x
    return out


def scale_matrix(M, c):
    return [[c * x for x in row] for row in M]


def hnf(M, transform=True):
    """Row Hermite normal form.

    Returns (H, U) with U unimodular and U*M = H when transform is True,
    otherwise (H, None).  H keeps the full row count: pivot rows first
    (upper triangular, positive pivots, entries above each pivot reduced
    into [0, pivot)), then zero rows.
    """
    m = len(M)
    if m == 0:
        return [], ([] if transform else None)
    n = len(M[0])
    ext = n + m if transform else n
    work = []
    for i, row in enumerate(M):
        r = list(row)
        if transform:
            r += [1 if k == i else 0 for k in range(m)]
        work.append(r)

    pivots = []   # (col, row) pairs in pivot-column order
    rest = work
    for col in range(n):
        cand = [r for r in rest if r[col]]
        if not cand:
            continue
        rest = [r for r in rest if not r[col]]
        while len(cand) > 1:
            cand.sort(key=lambda r: abs(r[col]))
            r0 = cand[0]
            keep = [r0]
            for r in cand[1:]:
                q = r[col] // r0[col]
                if q:
                    for k in range(col, ext):
                        r[k] -= q * r0[k]
                if r[col]:
                    keep.append(r)
                else:
                    rest.append(r)
            cand = keep
        piv = cand[0]
        if piv[col] < 0:
            for k in range(col, ext):
                piv[k] = -piv[k]
        pivots.append((col, piv))

    # reduce entries above each pivot into [0, pivot); ascending pivot order
    # so already-normalized columns stay untouched (each pivot row is zero
    # strictly left of its pivot column)
    for idx in range(len(pivots)):
        col, piv = pivots[idx]
        p = piv[col]
        for _, upper in pivots[:idx]:
            q = upper[col] // p
            if q:
                for k in range(col, ext):
                    upper[k] -= q * piv[k]

    rows = [piv for _, piv in pivots] + rest
    H = [r[:n] for r in rows]
    if transform:
        U = [r[n:] for r in rows]
        return H, U
    return H, None


def hnf_rows(M):
    """Nonzero rows of the row HNF of M (no transform)."""
    H, _ = hnf(M, transform=False)
    return [r for r in H if any(r)]


def kernel_basis(M):
    """Z-basis of the left kernel {v : v*M = 0}, as rows; [] if trivial."""
    H, U = hnf(M)
    out = []
    for h, u in zip(H, U):
        if not any(h):
            out.append(u)
    return out


def rank_int(M):
    return len(hnf_rows(M)) if M else 0


def snf(M):
    """Smith normal form: returns (S, U, V) with S = U*M*V diagonal,
    d1 | d2 | ..., U and V unimodular."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = copy_matrix(M)
    U = identity_matrix(m)
    V = identity_matrix(n)

    def row_op(i, j, q):  # row_i -= q*row_j
        Ai, Aj = A[i], A[j]
        for k in range(n):
            Ai[k] -= q * Aj[k]
        Ui, Uj = U[i], U[j]
        for k in range(m):
            Ui[k] -= q * Uj[k]

    def col_op(i, j, q):  # col_i -= q*col_j
        for r in A:
            r[i] -= q * r[j]
        for r in V:
            r[i] -= q * r[j]

    t = 0
    while t < min(m, n):
        # smallest-absolute-value nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or abs(x) < abs(best[2])):
                    best = (i, j, x)
        if best is None:
            break
        bi, bj, _ = best
        if bi != t:
            A[t], A[bi] = A[bi], A[t]
            U[t], U[bi] = U[bi], U[t]
        if bj != t:
            for r in A:
                r[t], r[bj] = r[bj], r[t]
            for r in V:
                r[t], r[bj] = r[bj], r[t]
        dirty = False
        for i in range(t + 1, m):
            q = A[i][t] // A[t][t]
            if q:
                row_op(i, t, q)
            if A[i][t]:
                dirty = True
        for j in range(t + 1, n):
            q = A[t][j] // A[t][t]
            if q:
                col_op(j, t, q)
            if A[t][j]:
                dirty = True
        if dirty:
            continue
        # divisibility fix-up: pivot must divide every trailing entry
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % A[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_op(t, bad, -1)  # fold the offending row into the pivot row
            continue
        if A[t][t] < 0:
            for k in range(n):
                A[t][k] = -A[t][k]
            for k in range(m):
                U[t][k] = -U[t][k]
        t += 1
    return A, U, V


def det_int(M):
    """Determinant of a square integer matrix, fraction-free (Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    A = copy_matrix(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = A[k][k]
        for i in range(k + 1, n):
            Ai, Ak = A[i], A[k]
            aik = Ai[k]
            for j in range(k + 1, n):
                Ai[j] = (pk * Ai[j] - aik * Ak[j]) // prev
            Ai[k] = 0
        prev = pk
    return sign * A[n - 1][n - 1]


def mat_inverse_int(M):
    """Inverse of a nonsingular integer matrix as (N, d): M^{-1} = N/d,
    with N integral and d a positive integer.

    Fraction-free Gauss-Jordan (one-step Bareiss division rule); the
    invariant C*M = d*I is checked on the final diagonal.
    """
    n = len(M)
    A = [list(row) + [1 if i == j else 0 for j in range(n)]
         for i, row in enumerate(M)]
    prev = 1
    for k in range(n):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    break
            else:
                raise ZeroDivisionError("singular matrix")
        pk = A[k][k]
        Ak = A[k]
        for i in range(n):
            if i == k:
                continue
            Ai = A[i]
            aik = Ai[k]
            if i < k:
                # processed diagonal must be promoted to the new pivot
                Ai[i] = (pk * Ai[i]) // prev
            for j in range(k + 1, 2 * n):
                Ai[j] = (pk * Ai[j] - aik * Ak[j]) // prev
            Ai[k] = 0
        prev = pk
    d = A[n - 1][n - 1]
    for i in range(n):
        if A[i][i] != d:
            raise RuntimeError("fraction-free inverse lost exactness")
    N = [A[i][n:] for i in range(n)]
    if d < 0:
        d = -d
        N = [[-x for x in row] for row in N]
    return N, d


def solve_left_frac(A, b):
    """Solve x*A = b exactly over Q for nonsingular square integer A.

    b is a vector (ints or Fractions); returns a list of Fractions.
    """
    N, d = mat_inverse_int(A)
    return [Fraction(x, d) for x in vec_mat(b, N)]


def solve_left_int(A, b):
    """Integer solution x with x*A = b, or None if none exists."""
    x = solve_left_frac(A, b)
    out = []
    for c in x:
        if c.denominator != 1:
            return None
        out.append(int(c))
    return out


def char_poly_int(M):
    """Characteristic polynomial det(xI - M) of an integer matrix,
    ascending coefficients, via Newton's identities (exact integers)."""
    n = len(M)
    if n == 0:
        return (1,)
    Mk = identity_matrix(n)
    traces = []
    for _ in range(n):
        Mk = mat_mul(Mk, M)
        traces.append(sum(Mk[i][i] for i in range(n)))
    e = [1]
    for k in range(1, n + 1):
        s = 0
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * traces[i - 1]
        assert s % k == 0
        e.append(s // k)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    for k in range(1, n + 1):
        coeffs[n - k] = (-1) ** k * e[k]
    return tuple(coeffs)


def ldl_decomposition(G):
    """G = L*D*L^T with L unit lower triangular, D diagonal, over Fractions.
    Raises NonPositiveDefinite when any pivot is <= 0."""
    n = len(G)
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        s = Fraction(G[j][j])
        for k in range(j):
            s -= L[j][k] * L[j][k] * D[k]
        if s <= 0:
            raise NonPositiveDefinite("Gram matrix is not positive definite")
        D[j] = s
        for i in range(j + 1, n):
            t = Fraction(G[i][j])
            for k in range(j):
                t -= L[i][k] * L[j][k] * D[k]
            L[i][j] = t / s
    return L, D


def rref_mod(M, p):
    """Reduced row echelon form over F_p.  Returns (R, pivot_columns)."""
    R = [[x % p for x in row] for row in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if R[i][c]:
                pr = i
                break
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = pow(R[r][c], p - 2, p) if p > 2 else R[r][c]
        if inv != 1:
            R[r] = [(x * inv) % p for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                Ri, Rr = R[i], R[r]
                for j in range(cols):
                    if Rr[j]:
                        Ri[j] = (Ri[j] - f * Rr[j]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def nullspace_mod(M, p):
    """Basis rows of {v : v*M = 0 (mod p)} for an integer matrix M."""
    rows = len(M)
    if rows == 0:
        return []
    # transpose so we can row-reduce [M^T | I] and read combinations
    cols = len(M[0])
    aug = [[M[i][c] % p for i in range(rows)] for c in range(cols)]
    R, pivots = rref_mod(aug, p)
    pivset = set(pivots)
    basis = []
    for free in range(rows):
        if free in pivset:
            continue
        v = [0] * rows
        v[free] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r][free]) % p
        basis.append(v)
    return basis


def solve_mod(A, b, p):
    """One solution x of x*A = b (mod p), or None."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [[A[i][c] % p for i in range(rows)] + [b[c] % p]
           for c in range(cols)]
    R, pivots = rref_mod(aug, p)
    x = [0] * rows
    for r, c in enumerate(pivots):
        if c == rows:
            return None  # pivot in the augmented column: inconsistent
        x[c] = R[r][rows]
    return x


def is_positive_definite(G):
    try:
        ldl_decomposition(G)
        return True
    except NonPositiveDefinite:
        return False


def lll_reduce(B, G, delta=Fraction(3, 4)):
    """Exact rational LLL of the row basis B against the quadratic form G.

    Inner product: <x, y> = x * G * y^T on coordinate rows.  G must be
    symmetric positive definite (checked).  Returns (B2, T) with T
    unimodular integer and B2 = T*B (rows of Fractions).
    """
    n = len(B)
    ldl_decomposition(G)  # raises if not PD
    basis = [[Fraction(x) for x in row] for row in B]
    T = identity_matrix(n)
    Gf = [[Fraction(x) for x in row] for row in G]
    ncols = len(B[0])

    def ip(u, v):
        tot = Fraction(0)
        for i in range(ncols):
            ui = u[i]
            if ui:
                Gi = Gf[i]
                tot += ui * sum(Gi[j] * v[j] for j in range(ncols) if v[j])
        return tot

    mu = [[Fraction(0)] * n for _ in range(n)]
    Bst = [Fraction(0)] * n
    ortho = [None] * n

    def update_gs():
        for i in range(n):
            v = list(basis[i])
            for j in range(i):
                mu[i][j] = ip(basis[i], ortho[j]) / Bst[j]
                oj = ortho[j]
                muij = mu[i][j]
                for k in range(ncols):
                    v[k] -= muij * oj[k]
            ortho[i] = v
            Bst[i] = ip(v, v)

    update_gs()

    def size_reduce(k, l):
        if abs(mu[k][l]) * 2 > 1:
            q = math.floor(mu[k][l] + Fraction(1, 2))
            bk, bl = basis[k], basis[l]
            for t in range(ncols):
                bk[t] -= q * bl[t]
            Tk, Tl = T[k], T[l]
            for t in range(n):
                Tk[t] -= q * Tl[t]
            for j in range(l):
                mu[k][j] -= q * mu[l][j]
            mu[k][l] -= q

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        if Bst[k] < (delta - mu[k][k - 1] ** 2) * Bst[k - 1]:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            T[k], T[k - 1] = T[k - 1], T[k]
            update_gs()
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                size_reduce(k, l)
            k += 1
    return basis, T


def _isqrt_frac_upper(f):
    """Smallest integer s >= 0 with s*s >= f, for a Fraction f >= 0."""
    if f <= 0:
        return 0
    num, den = f.numerator, f.denominator
    s = math.isqrt(num // den)
    while s * s * den < num:
        s += 1
    return s


def short_vectors(G, bound):
    """All nonzero integer rows v (up to sign; first nonzero entry positive)
    with v*G*v^T <= bound.  G symmetric positive definite (ints/Fractions).
    Fincke-Pohst enumeration on the LDL decomposition."""
    n = len(G)
    L, D = ldl_decomposition(G)
    bound = Fraction(bound)
    results = []
    x = [0] * n

    def rec(i, remaining):
        c = Fraction(0)
        for j in range(i + 1, n):
            if x[j]:
                c += L[j][i] * x[j]
        lim = remaining / D[i]
        s = _isqrt_frac_upper(lim)
        xi = math.ceil(-c - s)
        while True:
            off = xi + c
            val = D[i] * off * off
            if off > 0 and val > remaining:
                break
            if val <= remaining:
                x[i] = xi
                if i == 0:
                    if any(x):
                        v = list(x)
                        for t in v:
                            if t:
                                if t < 0:
                                    v = [-a for a in v]
                                break
                        results.append(tuple(v))
                else:
                    rec(i - 1, remaining - val)
                x[i] = 0
            xi += 1

    rec(n - 1, bound)
    seen = set()
    out = []
    for v in results:
        if v not in seen:
            seen.add(v)
            out.append(list(v))
    return out
