"""Dense univariate polynomial helpers over Z and Q.

Polynomials are tuples of coefficients in ascending degree order; the zero
polynomial is the empty tuple.  Integer inputs stay integer wherever the
operation allows it; division-based routines use Fraction internally.
"""

from fractions import Fraction
from itertools import product
from math import gcd, isqrt

from .errors import FactorizationUnavailable


def pnormalize(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def pdeg(p):
    # degree of the zero polynomial is -1 by convention
    return len(p) - 1


def padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return pnormalize(out)


def pneg(p):
    return tuple(-c for c in p)


def psub(p, q):
    return padd(p, pneg(q))


def pscale(p, c):
    if c == 0:
        return ()
    return tuple(c * a for a in p)


def pmul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return pnormalize(out)


def pdivmod(p, q):
    """Exact division with remainder over Q; q must be nonzero."""
    assert q, "division by the zero polynomial"
    p = [Fraction(c) for c in p]
    dq = len(q) - 1
    lead = Fraction(q[-1])
    quot = [Fraction(0)] * max(0, len(p) - dq)
    while len(p) - 1 >= dq and any(p):
        while p and p[-1] == 0:
            p.pop()
        if len(p) - 1 < dq:
            break
        c = p[-1] / lead
        k = len(p) - 1 - dq
        quot[k] = c
        for i, b in enumerate(q):
            p[k + i] -= c * b
        p.pop()
    return pnormalize(quot), pnormalize(p)


def pmod(p, q):
    return pdivmod(p, q)[1]


def pgcd(p, q):
    """Monic gcd over Q."""
    p, q = pnormalize(p), pnormalize(q)
    while q:
        p, q = q, pmod(p, q)
    if not p:
        return ()
    lead = Fraction(p[-1])
    return tuple(Fraction(c) / lead for c in p)


def pxgcd(p, q):
    """Extended gcd over Q: returns (g, u, v) with u*p + v*q = g, g monic."""
    r0, r1 = pnormalize(p), pnormalize(q)
    u0, u1 = (Fraction(1),), ()
    v0, v1 = (), (Fraction(1),)
    while r1:
        qq, rr = pdivmod(r0, r1)
        r0, r1 = r1, rr
        u0, u1 = u1, psub(u0, pmul(qq, u1))
        v0, v1 = v1, psub(v0, pmul(qq, v1))
    if not r0:
        return (), u0, v0
    lead = Fraction(r0[-1])
    inv = 1 / lead
    return (pscale(r0, inv), pscale(u0, inv), pscale(v0, inv))


def pderiv(p):
    return pnormalize([i * c for i, c in enumerate(p)][1:])


def peval(p, x):
    out = 0
    for c in reversed(p):
        out = out * x + c
    return out


def is_squarefree(p):
    g = pgcd(p, pderiv(p))
    return pdeg(g) <= 0


def ppow_mod(base, e, mod):
    """base**e reduced mod the polynomial `mod`, exponent e >= 0."""
    result = (Fraction(1),)
    base = pmod(base, mod)
    while e:
        if e & 1:
            result = pmod(pmul(result, base), mod)
        base = pmod(pmul(base, base), mod)
        e >>= 1
    return result


def content(p):
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def primitive_part(p):
    c = content(p)
    if c in (0, 1):
        return pnormalize(p)
    return tuple(a // c for a in p)


def to_int_poly(p):
    """Clear denominators; returns an integer polynomial proportional to p."""
    denlcm = 1
    for c in p:
        c = Fraction(c)
        denlcm = denlcm * c.denominator // gcd(denlcm, c.denominator)
    return tuple(int(Fraction(c) * denlcm) for c in p)


def sturm_chain(p):
    """Sturm chain of a square-free polynomial (Fraction coefficients)."""
    p = pnormalize([Fraction(c) for c in p])
    chain = [p]
    if pdeg(p) >= 1:
        chain.append(pderiv(p))
        while pdeg(chain[-1]) > 0:
            rem = pmod(chain[-2], chain[-1])
            if not rem:
                break
            chain.append(pneg(rem))
    return chain


def _sign_changes(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def _sturm_variations(chain, x):
    signs = []
    for q in chain:
        v = peval(q, x)
        signs.append(0 if v == 0 else (1 if v > 0 else -1))
    return _sign_changes(signs)


def sturm_count_interval(chain, a, b):
    """Distinct real roots in (a, b] for a Sturm chain of a square-free
    polynomial; a and b are exact rationals with a < b."""
    assert Fraction(a) < Fraction(b)
    return _sturm_variations(chain, a) - _sturm_variations(chain, b)


def root_bound(p):
    """Integer B with all real roots of p in (-B, B) (Cauchy bound)."""
    p = pnormalize([Fraction(c) for c in p])
    assert pdeg(p) >= 1
    lead = abs(p[-1])
    m = max(abs(c) for c in p[:-1]) if pdeg(p) >= 1 else Fraction(0)
    b = Fraction(1) + m / lead
    return int(b) + 1


def isolate_real_roots(p):
    """Disjoint rational intervals (a, b], one per distinct real root of a
    square-free polynomial, sorted increasingly."""
    p = pnormalize([Fraction(c) for c in p])
    if pdeg(p) <= 0:
        return []
    chain = sturm_chain(p)
    B = root_bound(p)
    total = sturm_count_interval(chain, -B, B)
    out = []
    stack = [(Fraction(-B), Fraction(B), total)]
    while stack:
        a, b, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        left = sturm_count_interval(chain, a, mid)
        stack.append((a, mid, left))
        stack.append((mid, b, cnt - left))
    out.sort()
    return out


def refine_root_interval(p, a, b, width):
    """Shrink an isolating interval (a, b] of p to length <= width by
    bisection (exact rational arithmetic)."""
    p = pnormalize([Fraction(c) for c in p])
    a, b = Fraction(a), Fraction(b)
    fb = peval(p, b)
    if fb == 0:
        return b, b
    sb = 1 if fb > 0 else -1
    while b - a > width:
        mid = (a + b) / 2
        fm = peval(p, mid)
        if fm == 0:
            return mid, mid
        if (1 if fm > 0 else -1) == sb:
            b = mid
        else:
            a = mid
    return a, b


def newton_refine_real(p, a, b, bits):
    """Shrink an isolating interval of p to width <= 2**-bits.

    Interval Newton contraction with exact rational interval arithmetic,
    interleaved with bisection so progress is guaranteed; endpoints are
    rounded to dyadics to keep denominators proportional to the accuracy.
    Requires sign(p(a)) * sign(p(b)) < 0.
    """
    p = pnormalize([Fraction(c) for c in p])
    dp = pderiv(p)
    a, b = Fraction(a), Fraction(b)
    fa, fb = peval(p, a), peval(p, b)
    if fa == 0:
        return a, a
    if fb == 0:
        return b, b
    assert (fa > 0) != (fb > 0), "endpoints do not bracket a sign change"
    sb = 1 if fb > 0 else -1
    target = Fraction(1, 2 ** bits)

    def ideval(lo, hi):
        """Interval evaluation of dp on [lo, hi] (exact rationals)."""
        rlo = rhi = Fraction(dp[-1])
        for c in reversed(dp[:-1]):
            cands = (rlo * lo, rlo * hi, rhi * lo, rhi * hi)
            rlo, rhi = min(cands) + c, max(cands) + c
        return rlo, rhi

    while b - a > target:
        # one bisection step: guaranteed halving
        x = (a + b) / 2
        fx = peval(p, x)
        if fx == 0:
            return x, x
        if (1 if fx > 0 else -1) == sb:
            b = x
        else:
            a = x
        if b - a <= target:
            break
        # one interval Newton step: N([a,b]) = m - p(m)/dp([a,b])
        dlo, dhi = ideval(a, b)
        if dlo <= 0 <= dhi:
            continue
        m = (a + b) / 2
        fm = peval(p, m)
        if fm == 0:
            return m, m
        qa, qb = fm / dlo, fm / dhi
        nlo, nhi = m - max(qa, qb), m - min(qa, qb)
        na, nb = max(a, nlo), min(b, nhi)
        assert na <= nb, "interval Newton lost the root"
        # round endpoints outward to dyadics with accuracy-matched size
        width = nb - na
        if width > 0:
            acc = (width.denominator // max(1, abs(width.numerator)))
            k = 2 * acc.bit_length() + 16
            na = Fraction((na * 2 ** k).__floor__(), 2 ** k)
            nb = Fraction(-((-nb * 2 ** k).__floor__()), 2 ** k)
            na, nb = max(a, na), min(b, nb)
        if peval(p, na) == 0:
            return na, na
        if peval(p, nb) == 0:
            return nb, nb
        a, b = na, nb
    return a, b


def sturm_real_root_count(p):
    """Number of distinct real roots of a square-free polynomial."""
    p = pnormalize([Fraction(c) for c in p])
    if pdeg(p) <= 0:
        return 0
    chain = sturm_chain(p)

    # signs at -infinity and +infinity from leading terms
    at_plus = [1 if q[-1] > 0 else -1 for q in chain if q]
    at_minus = []
    for q in chain:
        if not q:
            continue
        s = 1 if q[-1] > 0 else -1
        if pdeg(q) % 2 == 1:
            s = -s
        at_minus.append(s)
    return _sign_changes(at_minus) - _sign_changes(at_plus)


def _divisors(n):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _signed_divisors(n):
    out = []
    for d in _divisors(n):
        out.append(d)
        out.append(-d)
    return out

# Kronecker interpolation guard: cap on candidate divisor tuples per degree
_KRONECKER_BUDGET = 2_000_000


def _monic_divisor_search(f, max_deg):
    """Find a monic integral divisor of f with 1 <= deg <= max_deg, or None.

    Kronecker's method: a degree-d divisor is determined by its values at
    d+1 points, each of which must divide f at that point.
    """
    n = pdeg(f)
    for d in range(1, max_deg + 1):
        pts = []
        x = 0
        while len(pts) < d + 1:
            v = peval(f, x)
            if v != 0:
                pts.append((x, v))
            x = -x + (1 if x <= 0 else 0)  # 0, 1, -1, 2, -2, ...
        choice_lists = [_signed_divisors(v) for (_, v) in pts]
        total = 1
        for lst in choice_lists:
            total *= len(lst)
            if total > _KRONECKER_BUDGET:
                raise FactorizationUnavailable(
                    "naive factorization budget exceeded at degree %d" % n)
        xs = [x for (x, _) in pts]
        # Lagrange basis denominators
        for vals in product(*choice_lists):
            # interpolate candidate through (xs[i], vals[i]) exactly
            cand = ()
            ok = True
            for i, (xi, vi) in enumerate(zip(xs, vals)):
                num = (Fraction(vi),)
                den = 1
                for j, xj in enumerate(xs):
                    if j == i:
                        continue
                    num = pmul(num, (-xj, 1))
                    den *= (xi - xj)
                cand = padd(cand, pscale(num, Fraction(1, den)))
            if pdeg(cand) != d:
                continue
            for c in cand:
                if Fraction(c).denominator != 1:
                    ok = False
                    break
            if not ok or cand[-1] != 1:
                continue
            q, r = pdivmod(f, cand)
            if not r:
                return tuple(int(c) for c in cand), tuple(int(Fraction(c)) for c in q)
    return None


def factor_monic_squarefree(f):
    """Factor a monic square-free integer polynomial into monic irreducibles.

    Naive: integer-root stripping plus Kronecker divisor search.  Only
    supports degree <= 8; larger inputs raise FactorizationUnavailable.
    """
    f = pnormalize(f)
    assert f and f[-1] == 1 and all(isinstance(c, int) for c in f)
    if pdeg(f) > 8:
        raise FactorizationUnavailable(
            "naive factorization supports degree <= 8 only (got %d)" % pdeg(f))
    factors = []
    # strip integer roots (monic, so rational roots are integers dividing f(0))
    changed = True
    while changed and pdeg(f) >= 1:
        changed = False
        if f[0] == 0:
            factors.append((0, 1))
            f = tuple(int(Fraction(c)) for c in pdivmod(f, (0, 1))[0])
            changed = True
            continue
        for r in _signed_divisors(f[0]):
            if peval(f, r) == 0:
                factors.append((-r, 1))
                f = tuple(int(Fraction(c)) for c in pdivmod(f, (-r, 1))[0])
                changed = True
                break
    # Kronecker search on the rest
    stack = [f] if pdeg(f) >= 1 else []
    while stack:
        g = stack.pop()
        if pdeg(g) == 1:
            factors.append(g)
            continue
        found = _monic_divisor_search(g, pdeg(g) // 2)
        if found is None:
            factors.append(g)
        else:
            d, q = found
            stack.append(d)
            stack.append(q)
    factors.sort(key=lambda p: (pdeg(p), p))
    return factors


def pinterpolate(xs, ys):
    """Interpolating polynomial through the points (xs[i], ys[i]).

    Exact Newton divided differences; returns Fraction coefficients.
    """
    n = len(xs)
    assert n == len(ys) and len(set(xs)) == n
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = ()
    for i in range(n - 1, -1, -1):
        poly = padd((coef[i],), pmul(poly, (-xs[i], 1)))
    return poly


# -- Hensel-lifted divisor search ------------------------------------------
#
# The naive Kronecker search above is fine for the small defining polynomials
# of input algebras, but root extraction inside unit/relation saturation needs
# divisors of norm polynomials whose degree and coefficients are far larger.
# The classical lift-and-recombine method handles those exactly.


def _zmod(f, m):
    f = [c % m for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _zmul(f, g, m):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _zmod(out, m)


def _zsub(f, g, m):
    out = [0] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] -= c
    return _zmod(out, m)


def _zdivmod_monic(f, g, m):
    """divmod by a monic polynomial; valid modulo any modulus m."""
    assert g and g[-1] % m == 1 % m
    r = _zmod(f, m)
    q = [0] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g):
        c = r[-1]
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[k + i] = (r[k + i] - c * b) % m
        while r and r[-1] == 0:
            r.pop()
    return q, r


def _hensel_pair_step(f, g, h, s, t, m):
    """One quadratic lifting step.

    Input: f ≡ g*h (mod m), s*g + t*h ≡ 1 (mod m), f, g, h monic mod m,
    deg s < deg h, deg t < deg g.  Output: the same data modulo m*m.
    """
    mm = m * m
    e = _zsub(f, _zmul(g, h, mm), mm)
    # split the correction: u on the g side, w on the h side
    u = _zdivmod_monic(_zmul(t, e, mm), g, mm)[1]
    w, rem = _zdivmod_monic(_zsub(e, _zmul(h, u, mm), mm), g, mm)
    assert not rem, "lift correction is not divisible as expected"
    g1 = _zmod([a + b for a, b in
                zip(g + [0] * len(u), u + [0] * len(g))], mm)
    h1 = _zmod([a + b for a, b in
                zip(h + [0] * len(w), w + [0] * len(h))], mm)
    # refresh the Bezout pair for the lifted factors
    d = _zsub(_zmod([a + b for a, b in
                     zip(_zmul(s, g1, mm) + [0] * len(_zmul(t, h1, mm)),
                         _zmul(t, h1, mm) + [0] * len(_zmul(s, g1, mm)))],
                    mm), [1], mm)
    tau = _zdivmod_monic(_zmul(t, [-c % mm for c in d], mm), g1, mm)[1]
    sig, rem = _zdivmod_monic(
        _zsub([-c % mm for c in d], _zmul(h1, tau, mm), mm), g1, mm)
    assert not rem
    s1 = _zmod([a + b for a, b in
                zip(s + [0] * len(sig), sig + [0] * len(s))], mm)
    t1 = _zmod([a + b for a, b in
                zip(t + [0] * len(tau), tau + [0] * len(t))], mm)
    return g1, h1, s1, t1, mm


def _hensel_lift_tree(f, facs, p, target):
    """Lift a pairwise-coprime monic factorization of f from mod p to mod
    p^k >= target.  Returns (lifted factor list, modulus)."""
    from .modpolys import mxgcd

    m = p
    while m < target:
        m *= p
    if len(facs) == 1:
        return [_zmod(f, m)], m
    half = len(facs) // 2
    g = [1]
    for q in facs[:half]:
        g = _zmul(g, q, p)
    h = [1]
    for q in facs[half:]:
        h = _zmul(h, q, p)
    d, s, t = mxgcd(g, h, p)
    assert d == [1], "mod-p factors are not coprime"
    s, t = list(s), list(t)
    mod = p
    while mod < m:
        g, h, s, t, mod = _hensel_pair_step(_zmod(f, mod * mod), g, h, s, t, mod)
    left, _ = _hensel_lift_tree(g, facs[:half], p, m)
    right, _ = _hensel_lift_tree(h, facs[half:], p, m)
    return left + right, m


def _symmetric(c, m):
    c %= m
    return c - m if 2 * c > m else c


_RECOMBINE_BUDGET = 200_000


def bounded_monic_divisors(f, max_deg, seed=0):
    """All monic integer divisors g of f with 1 <= deg g <= max_deg.

    f must be a monic square-free integer polynomial.  Exhaustive for the
    requested degree range; handles large degrees and coefficients via mod-p
    factorization plus quadratic Hensel lifting and bounded recombination.
    """
    from .modpolys import factor_squarefree_mod, mderiv, mgcd, trim

    f = pnormalize(f)
    assert f and f[-1] == 1 and all(isinstance(c, int) for c in f)
    n = pdeg(f)
    max_deg = min(max_deg, n)
    if max_deg <= 0 or n == 0:
        return []
    if n == 1:
        return [f]
    # pick an odd prime with square-free reduction and as few factors as we
    # can find cheaply: fewer mod-p factors means fewer subsets below
    best = None
    tried = 0
    p = 3
    while tried < 6:
        for q in range(2, p):
            if p % q == 0:
                break
        else:
            fp = trim(list(f), p)
            if len(fp) == n + 1 and mgcd(fp, mderiv(fp, p), p) == [1]:
                tried += 1
                facs = factor_squarefree_mod(fp, p, seed=seed)
                if best is None or len(facs) < len(best[1]):
                    best = (p, facs)
                if len(facs) <= 2:
                    break
        p += 2
    assert best is not None
    p, facs = best
    if len(facs) == 1:
        return [f] if n <= max_deg else []
    # Mignotte-style bound covering both the coefficients of low-degree
    # monic divisors and their values at x = +-1 (used by the filters below)
    norm2 = isqrt(sum(c * c for c in f)) + 1
    bound = 2 * (max_deg + 2) * (2 ** max_deg) * norm2 + 1
    lifted, m = _hensel_lift_tree(list(f), facs, p, bound)
    degs = [len(g) - 1 for g in lifted]
    f1, fm1 = peval(f, 1), peval(f, -1)
    v1 = [peval(g, 1) % m for g in lifted]
    vm1 = [peval(g, -1) % m for g in lifted]
    found = []
    count = 0
    from itertools import combinations
    for k in range(1, len(lifted)):
        for idxs in combinations(range(len(lifted)), k):
            if sum(degs[i] for i in idxs) > max_deg:
                continue
            count += 1
            if count > _RECOMBINE_BUDGET:
                raise FactorizationUnavailable(
                    "divisor recombination budget exceeded")
            # cheap value filters before the exact division
            w = 1
            for i in idxs:
                w = (w * v1[i]) % m
            if f1 != 0 and f1 % _nonzero(_symmetric(w, m)) != 0:
                continue
            w = 1
            for i in idxs:
                w = (w * vm1[i]) % m
            if fm1 != 0 and fm1 % _nonzero(_symmetric(w, m)) != 0:
                continue
            g = [1]
            for i in idxs:
                g = _zmul(g, lifted[i], m)
            cand = pnormalize([_symmetric(c, m) for c in g])
            if pdeg(cand) != sum(degs[i] for i in idxs) or cand[-1] != 1:
                continue
            q, r = pdivmod(f, cand)
            if not r:
                found.append(cand)
    if n <= max_deg:
        found.append(f)
    found.sort(key=lambda g: (pdeg(g), g))
    return found


def _nonzero(c):
    return c if c else 1


def poly_to_string(p):
    return ",".join(str(c) for c in p)


def poly_from_string(s):
    coeffs = tuple(int(t.strip()) for t in s.split(","))
    return pnormalize(coeffs)
