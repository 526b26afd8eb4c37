"""Polynomial arithmetic and factorization over prime fields F_p.

Coefficients ascending, lists of ints reduced mod p; the zero polynomial
is the empty list.  Randomized steps (equal-degree splitting) draw from a
deterministically seeded generator so runs are reproducible.
"""

import random


def trim(f, p):
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def madd(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return trim(out, p)


def msub(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] - c) % p
    return trim(out, p)


def mmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = (out[i + j] + a * b) % p
    return trim(out, p)


def mdivmod(f, g, p):
    f = trim(f, p)
    g = trim(g, p)
    assert g, "division by zero polynomial"
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    while len(r) >= len(g) and r:
        c = (r[-1] * inv) % p
        d = len(r) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            r[i + d] = (r[i + d] - c * b) % p
        r = trim(r, p)
    return trim(q, p), r


def mmod(f, g, p):
    return mdivmod(f, g, p)[1]


def monic(f, p):
    f = trim(f, p)
    if not f or f[-1] == 1:
        return f
    inv = pow(f[-1], p - 2, p)
    return [(c * inv) % p for c in f]


def mgcd(f, g, p):
    f, g = trim(f, p), trim(g, p)
    while g:
        f, g = g, mmod(f, g, p)
    return monic(f, p)


def mxgcd(f, g, p):
    """(d, u, v) with u*f + v*g = d, d the monic gcd."""
    r0, r1 = trim(f, p), trim(g, p)
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = mdivmod(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, msub(u0, mmul(q, u1, p), p)
        v0, v1 = v1, msub(v0, mmul(q, v1, p), p)
    if not r0:
        return [], u0, v0
    lead = r0[-1]
    if lead != 1:
        inv = pow(lead, p - 2, p)
        r0 = [(c * inv) % p for c in r0]
        u0 = [(c * inv) % p for c in u0]
        v0 = [(c * inv) % p for c in v0]
    return r0, u0, v0


def minv_mod(f, g, p):
    """Inverse of f modulo g over F_p; f and g must be coprime."""
    d, u, _ = mxgcd(f, g, p)
    assert d == [1], "polynomial not invertible modulo g"
    return mmod(u, g, p)


def mpowmod(f, e, mod, p):
    """f^e mod (mod, p) by binary exponentiation."""
    result = [1]
    base = mmod(f, mod, p)
    while e:
        if e & 1:
            result = mmod(mmul(result, base, p), mod, p)
        base = mmod(mmul(base, base, p), mod, p)
        e >>= 1
    return result


def mderiv(f, p):
    return trim([(i * c) % p for i, c in enumerate(f)][1:], p)


def squarefree_part(f, p):
    """Product of the distinct irreducible factors of monic f over F_p."""
    f = monic(f, p)
    if len(f) <= 1:
        return f
    d = mderiv(f, p)
    if not d:
        # f = g(x^p) = g(x)^p: take p-th root and recurse
        root = [pow(c, 1, p) for c in f[::p]]
        return squarefree_part(root, p)
    g = mgcd(f, d, p)
    w, _ = mdivmod(f, g, p)
    w = monic(w, p)
    # factors of g not already in w, with multiplicity stripped
    rest = g
    while True:
        h = mgcd(rest, w, p)
        if len(h) <= 1:
            break
        rest, _ = mdivmod(rest, h, p)
    rest = squarefree_part(rest, p) if len(rest) > 1 else [1]
    return monic(mmul(w, rest, p), p)


def _distinct_degree(f, p):
    """[(degree d, product of irreducible factors of degree d)] for
    squarefree monic f."""
    out = []
    h = [0, 1]  # x
    v = list(f)
    d = 0
    while len(v) - 1 >= 2 * (d + 1):
        d += 1
        h = mpowmod(h, p, v, p)
        g = mgcd(msub(h, [0, 1], p), v, p)
        if len(g) > 1:
            out.append((d, g))
            v, _ = mdivmod(v, g, p)
            v = monic(v, p)
            h = mmod(h, v, p)
    if len(v) > 1:
        out.append((len(v) - 1, v))
    return out


def _equal_degree_split(f, d, p, rng):
    """One nontrivial monic factor of squarefree monic f, all of whose
    irreducible factors have degree d (Cantor-Zassenhaus)."""
    n = len(f) - 1
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = trim(a, p)
        if len(a) <= 1:
            continue
        g = mgcd(a, f, p)
        if 1 < len(g) < len(f):
            return g
        if p == 2:
            # trace map T(a) = a + a^2 + ... + a^(2^(d-1))
            t = list(a)
            acc = list(a)
            for _ in range(d - 1):
                acc = mpowmod(acc, 2, f, p)
                t = madd(t, acc, p)
            g = mgcd(t, f, p)
        else:
            e = (p ** d - 1) // 2
            b = mpowmod(a, e, f, p)
            g = mgcd(msub(b, [1], p), f, p)
        if 1 < len(g) < len(f):
            return g


def _equal_degree_factor(f, d, p, rng, out):
    if len(f) - 1 == d:
        out.append(monic(f, p))
        return
    g = _equal_degree_split(f, d, p, rng)
    h, r = mdivmod(f, g, p)
    assert not r
    _equal_degree_factor(g, d, p, rng, out)
    _equal_degree_factor(monic(h, p), d, p, rng, out)


def factor_squarefree_mod(f, p, seed=0):
    """Sorted monic irreducible factors of a squarefree monic f over F_p."""
    rng = random.Random((seed, p, tuple(f)).__hash__())
    out = []
    for d, g in _distinct_degree(monic(f, p), p):
        _equal_degree_factor(g, d, p, rng, out)
    out.sort(key=lambda h: (len(h), h[::-1]))
    return out


def factor_mod(f, p, seed=0):
    """Full factorization: list of (monic irreducible, multiplicity)."""
    f = monic(f, p)
    sq = squarefree_part(f, p)
    result = []
    for q in factor_squarefree_mod(sq, p, seed):
        e = 0
        while True:
            cand, r = mdivmod(f, q, p)
            if r:
                break
            f = cand
            e += 1
        result.append((q, e))
    assert len(f) == 1
    return result
