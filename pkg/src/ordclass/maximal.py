"""Maximal orders via radical-idealizer iteration, integer factorization
at desk scale, and conductors."""

from math import gcd, isqrt

from .errors import FactorizationError
from .lattices import ZLattice
from .linalg import nullspace_mod, vec_mat

# deterministic Miller-Rabin witness set, valid for n < 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIME_BOUND = 10000
_RHO_BUDGET = 2_000_000


def is_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n, budget):
    """A nontrivial factor of composite odd n, or None within budget."""
    spent = 0
    c = 1
    while spent < budget:
        x = y = 2
        d = 1
        count = 0
        while d == 1 and spent < budget:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
            spent += 1
            count += 1
        if 1 < d < n:
            return d
        c += 1  # cycle degenerated; retry with a new polynomial
    return None


def factor_integer(n, budget=_RHO_BUDGET):
    """[(prime, exponent)] with primes ascending; n may be negative
    (sign discarded); |n| must be >= 1."""
    n = abs(n)
    assert n >= 1
    factors = {}

    def add(p, e=1):
        factors[p] = factors.get(p, 0) + e

    for p in range(2, _SMALL_PRIME_BOUND):
        if p * p > n:
            break
        while n % p == 0:
            n //= p
            add(p)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            add(m)
            continue
        r = isqrt(m)
        if r * r == m:
            stack.append(r)
            stack.append(r)
            continue
        d = _pollard_rho(m, budget)
        if d is None:
            raise FactorizationError("could not factor %d within budget" % m)
        stack.append(d)
        stack.append(m // d)
    return sorted(factors.items())


def mul_coords(table, u, v):
    """Product of two coordinate vectors on the basis of S via the
    integer structure constants table."""
    n = len(u)
    out = [0] * n
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                if b:
                    ab = a * b
                    row = table[i][j]
                    for k in range(n):
                        if row[k]:
                            out[k] += ab * row[k]
    return out


def radical_kernel_mod_p(S, p):
    """F_p basis rows (S-basis coordinates) of the nilradical of S/pS:
    the kernel of the (p^k)-power map with p^k >= n."""
    n = S.algebra.n
    table = S.structure_constants()
    q = p
    while q < n:
        q *= p

    def pow_mod_p(vec, e):
        # accumulator starts at 1 in S-basis coordinates (the basis need
        # not contain 1 itself)
        acc = [x % p for x in S.one_coords()]
        base = list(vec)
        while e:
            if e & 1:
                acc = [x % p for x in mul_coords(table, acc, base)]
            base = [x % p for x in mul_coords(table, base, base)]
            e >>= 1
        return acc

    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append(pow_mod_p(e, q))
    return nullspace_mod(rows, p)


def p_radical(S, p):
    """The radical of pS in S: elements whose p-power-iterate lies in pS."""
    kernel = radical_kernel_mod_p(S, p)
    lat_rows = [[p * x for x in r] for r in S.mat]
    for v in kernel:
        lat_rows.append(vec_mat([x % p for x in v], [list(r) for r in S.mat]))
    return ZLattice(S.algebra, S.den, lat_rows)


def p_maximal_order(S, p):
    """Smallest over-order of S whose index in the maximal order is coprime
    to p: fixed point of the radical-idealizer step."""
    while True:
        rad = p_radical(S, p)
        S2 = rad.multiplicator_ring()
        if S2.key() == S.key():
            return S
        S = S2


def singular_primes(S):
    """Primes p with p^2 dividing disc(S) - the only candidates at which
    S can fail to be p-maximal."""
    return [p for p, e in factor_integer(S.discriminant()) if e >= 2]


def maximal_order(S):
    got = S._cache.get("maxorder")
    if got is not None:
        return got
    A = S.algebra
    got = A._cache.get("maxorder")
    if got is not None and got.contains_lattice(S):
        S._cache["maxorder"] = got
        return got
    O = S
    for p in singular_primes(S):
        O = p_maximal_order(O, p)
    S._cache["maxorder"] = O
    O._cache["maxorder"] = O
    A._cache["maxorder"] = O
    return O


def conductor(R):
    """(R : O_K): the largest ideal of the maximal order contained in R."""
    got = R._cache.get("conductor")
    if got is None:
        got = R.colon(maximal_order(R))
        R._cache["conductor"] = got
    return got
