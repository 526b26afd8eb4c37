"""Numeric complex embeddings and T2 norm forms.

Floating point enters the package only here, and only to *suggest*
candidates (reduced bases, short vectors).  Every caller verifies the
suggestions with exact arithmetic, so precision never affects correctness,
only speed.
"""

from fractions import Fraction

import mpmath

from .errors import NonPositiveDefinite
from .linalg import is_positive_definite, lll_reduce, mat_mul, short_vectors


def complex_roots(coeffs, prec=80):
    """All complex roots of a monic squarefree integer polynomial."""
    with mpmath.workprec(prec):
        poly = [mpmath.mpf(1)] + [mpmath.mpf(c) for c in reversed(coeffs[:-1])]
        return mpmath.polyroots(poly, maxsteps=200, extraprec=prec)


def power_basis_t2(algebra, prec=80):
    """Numeric T2 Gram of the power basis: M[i][j] = sum_k r_k^i * conj(r_k)^j
    (real part; the root multiset is conjugation-closed)."""
    n = algebra.n
    roots = complex_roots(list(algebra.f), prec)
    with mpmath.workprec(prec):
        pows = []
        for r in roots:
            row = [mpmath.mpc(1)]
            for _ in range(n - 1):
                row.append(row[-1] * r)
            pows.append(row)
        M = [[mpmath.mpf(0)] * n for _ in range(n)]
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    M[i][j] += (pows[k][i] * mpmath.conj(pows[k][j])).real
    return M


def t2_gram_int(algebra, rows, scale_bits=64, prec=None):
    """Scaled integer T2 Gram of integer coefficient rows, certified
    positive definite by exact arithmetic.  Retries at higher precision
    if rounding spoiled definiteness."""
    n = algebra.n
    if prec is None:
        size = max(abs(x) for r in rows for x in r) + 2
        prec = 2 * scale_bits + 8 * n + size.bit_length()
    for attempt in range(4):
        M = power_basis_t2(algebra, prec)
        with mpmath.workprec(prec):
            scale = mpmath.mpf(2) ** scale_bits
            BM = [[mpmath.fsum(r[k] * M[k][j] for k in range(n))
                   for j in range(n)] for r in rows]
            G = []
            for i, r in enumerate(rows):
                G.append([int(mpmath.nint(
                    mpmath.fsum(BM[i][k] * r2[k] for k in range(n)) * scale))
                    for i2, r2 in enumerate(rows)])
        # symmetrize rounding noise away
        for i in range(len(G)):
            for j in range(i):
                v = G[i][j] + G[j][i]
                v = v // 2 if v % 2 == 0 else (v + 1) // 2
                G[i][j] = G[j][i] = v
        if is_positive_definite(G):
            return G
        prec *= 2
    raise NonPositiveDefinite("could not certify a rounded T2 Gram")


def lll_reduced_basis(lat, scale_bits=64):
    """Yield (integer row, denominator) pairs for an LLL-reduced basis of the
    lattice, shortest (numerically) first."""
    rows = [list(r) for r in lat.mat]
    G = t2_gram_int(lat.algebra, rows, scale_bits=scale_bits)
    n = len(rows)
    _, T = lll_reduce([[Fraction(1 if i == j else 0) for j in range(n)]
                       for i in range(n)], G)
    red = mat_mul(T, rows)
    for r in red:
        yield r, lat.den


def short_lattice_vectors(lat, t2_bound, scale_bits=48, slack_bits=8):
    """Candidate vectors of the lattice with T2 norm <= t2_bound (a Fraction
    or int), as (integer row, denominator) pairs.  Numeric bound is padded;
    callers must verify any exact property they need."""
    rows = [list(r) for r in lat.mat]
    G = t2_gram_int(lat.algebra, rows, scale_bits=scale_bits)
    # the Gram is for the integer numerator rows; elements are rows/den
    bound = int(Fraction(t2_bound) * lat.den ** 2 * (2 ** scale_bits))
    bound += bound >> slack_bits
    out = []
    for coeffs in short_vectors(G, bound):
        vec = [0] * lat.algebra.n
        for c, r in zip(coeffs, rows):
            if c:
                for k in range(lat.algebra.n):
                    vec[k] += c * r[k]
        out.append((vec, lat.den))
    return out


# ---------------------------------------------------------------------------
# certified archimedean places (rigorous interval arithmetic)
#
# Unlike the helpers above, everything below this line is *certified*: real
# roots come from exact Sturm isolation and complex roots from a Krawczyk
# inclusion test evaluated in outward-rounded interval arithmetic, so every
# returned enclosure is a mathematical guarantee, not an approximation.

from fractions import Fraction as _F

from mpmath import iv as _iv
from mpmath.libmp import to_rational as _to_rational

from . import polys


def _iv_frac(q):
    """Interval enclosure of an exact rational at the current precision."""
    q = _F(q)
    if q.denominator == 1:
        return _iv.mpf(q.numerator)
    return _iv.mpf(q.numerator) / _iv.mpf(q.denominator)


def _iv_bounds(x):
    """Exact rational endpoints of an ivmpf."""
    a, b = x._mpi_
    return _F(*_to_rational(a)), _F(*_to_rational(b))


def _iv_span(lo, hi):
    """Interval enclosing [lo, hi] for exact rationals lo <= hi."""
    a = _iv_frac(lo)._mpi_[0]
    b = _iv_frac(hi)._mpi_[1]
    # make_mpf wraps the raw endpoints without re-rounding at mp.prec
    return _iv.mpf([mpmath.mp.make_mpf(a), mpmath.mp.make_mpf(b)])


def _box(rlo, rhi, ilo, ihi):
    return _iv.mpc(_iv_span(rlo, rhi), _iv_span(ilo, ihi))


def _cpoly_iv(coeffs, z):
    """Interval Horner evaluation of an integer/rational polynomial."""
    acc = _iv.mpc(0, 0)
    for c in reversed(coeffs):
        acc = acc * z + _iv_frac(c)
    return acc


def _cfrac_add(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _cfrac_mul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _cfrac_inv(u):
    d = u[0] * u[0] + u[1] * u[1]
    return (u[0] / d, -u[1] / d)


def _cfrac_poly(coeffs, z):
    acc = (_F(0), _F(0))
    for c in reversed(coeffs):
        acc = _cfrac_add(_cfrac_mul(acc, z), (_F(c), _F(0)))
    return acc


def _box_bounds(z):
    rlo, rhi = _iv_bounds(z.real)
    ilo, ihi = _iv_bounds(z.imag)
    return rlo, rhi, ilo, ihi


def _krawczyk_verify(f, df, box):
    """True if the Krawczyk operator maps the box strictly into itself,
    certifying a unique root of f inside.  box = (rlo, rhi, ilo, ihi)."""
    rlo, rhi, ilo, ihi = box
    m = ((rlo + rhi) / 2, (ilo + ihi) / 2)
    dfm = _cfrac_poly(df, m)
    if dfm == (0, 0):
        return False
    Y = _cfrac_inv(dfm)
    fm = _cfrac_poly(f, m)
    Z = _box(rlo, rhi, ilo, ihi)
    Yiv = _iv.mpc(_iv_frac(Y[0]), _iv_frac(Y[1]))
    miv = _iv.mpc(_iv_frac(m[0]), _iv_frac(m[1]))
    fmiv = _iv.mpc(_iv_frac(fm[0]), _iv_frac(fm[1]))
    K = miv - Yiv * fmiv + (_iv.mpc(1, 0) - Yiv * _cpoly_iv(df, Z)) * (Z - miv)
    krlo, krhi, kilo, kihi = _box_bounds(K)
    return rlo < krlo and krhi < rhi and ilo < kilo and kihi < ihi


def _krawczyk_contract(f, df, box, width, max_iter=64):
    """Contract a certified box until both sides are <= width."""
    rlo, rhi, ilo, ihi = box
    for _ in range(max_iter):
        if rhi - rlo <= width and ihi - ilo <= width:
            return rlo, rhi, ilo, ihi
        m = ((rlo + rhi) / 2, (ilo + ihi) / 2)
        dfm = _cfrac_poly(df, m)
        Y = _cfrac_inv(dfm)
        fm = _cfrac_poly(f, m)
        Z = _box(rlo, rhi, ilo, ihi)
        Yiv = _iv.mpc(_iv_frac(Y[0]), _iv_frac(Y[1]))
        miv = _iv.mpc(_iv_frac(m[0]), _iv_frac(m[1]))
        fmiv = _iv.mpc(_iv_frac(fm[0]), _iv_frac(fm[1]))
        K = (miv - Yiv * fmiv
             + (_iv.mpc(1, 0) - Yiv * _cpoly_iv(df, Z)) * (Z - miv))
        krlo, krhi, kilo, kihi = _box_bounds(K)
        nrlo, nrhi = max(rlo, krlo), min(rhi, krhi)
        nilo, nihi = max(ilo, kilo), min(ihi, kihi)
        assert nrlo <= nrhi and nilo <= nihi, "Krawczyk contraction lost root"
        if (nrlo, nrhi, nilo, nihi) == (rlo, rhi, ilo, ihi):
            break
        rlo, rhi, ilo, ihi = nrlo, nrhi, nilo, nihi
    return rlo, rhi, ilo, ihi


class ArchimedeanPlaces:
    """Certified archimedean places of a number field Q[x]/(f).

    `real` holds exact rational brackets (a, b), one per real root; `cplx`
    holds rational boxes (rlo, rhi, ilo, ihi) with ilo > 0, one per complex
    conjugate pair, each Krawczyk-certified to contain exactly one root.
    Together with conjugates they account for all n roots, so the list of
    places is provably complete.
    """

    def __init__(self, algebra):
        self.algebra = algebra
        f = algebra.f
        self.real = [polys.refine_root_interval(f, a, b, _F(1, 16))
                     for a, b in polys.isolate_real_roots(f)]
        self.r1 = len(self.real)
        assert (algebra.n - self.r1) % 2 == 0
        self.r2 = (algebra.n - self.r1) // 2
        self.weights = [1] * self.r1 + [2] * self.r2
        self.width_bits = 4
        self.cplx = self._certify_complex()

    def _certify_complex(self):
        if self.r2 == 0:
            return []
        f = list(self.algebra.f)
        df = [i * c for i, c in enumerate(f)][1:]
        prec = 80
        for attempt in range(12):
            roots = complex_roots(f, prec)
            with mpmath_workprec(prec):
                # the r2 roots with largest imaginary part; real roots carry
                # at most numerical jitter, so these converge to the genuine
                # upper-half-plane roots as precision grows
                upper = sorted(roots, key=lambda z: -z.imag)[:self.r2]
                cand = []
                for z in upper:
                    sep = min([abs(z - w) for w in roots if w is not z]
                              + [2 * abs(z.imag)])
                    # shrink the box each attempt: the Krawczyk test needs
                    # C * h < 1 for a conditioning constant C of f
                    cand.append((z, sep / 2 ** (3 + attempt)))
            old = _iv.prec
            _iv.prec = 2 * prec
            try:
                boxes = []
                for z, h in cand:
                    hh = _F(*_to_rational(mpmath.mpf(h)._mpf_))
                    re = _F(*_to_rational(mpmath.mpf(z.real)._mpf_))
                    im = _F(*_to_rational(mpmath.mpf(z.imag)._mpf_))
                    box = (re - hh, re + hh, im - hh, im + hh)
                    if hh <= 0 or box[2] <= 0 or not _krawczyk_verify(f, df, box):
                        boxes = None
                        break
                    boxes.append(box)
                if boxes is not None and _disjoint_boxes(boxes):
                    return boxes
            finally:
                _iv.prec = old
            prec = min(2 * prec, 8192)
        raise AssertionError("could not certify complex root boxes")

    # -- refinement --------------------------------------------------------

    def ensure_width(self, bits):
        """Refine all enclosures to width <= 2**-bits."""
        if bits <= self.width_bits:
            return
        f = list(self.algebra.f)
        df = [i * c for i, c in enumerate(f)][1:]
        width = _F(1, 2 ** bits)
        self.real = [polys.newton_refine_real(f, a, b, bits)
                     for a, b in self.real]
        if self.cplx:
            old = _iv.prec
            _iv.prec = 2 * bits + 64
            try:
                self.cplx = [_krawczyk_contract(f, df, box, width)
                             for box in self.cplx]
            finally:
                _iv.prec = old
        self.width_bits = bits

    # -- rigorous evaluations ------------------------------------------------

    def abs_sq(self, vec, prec):
        """Interval enclosures of |sigma(vec)|^2, one per place, evaluated at
        the given working precision.  vec has rational coefficients."""
        old = _iv.prec
        _iv.prec = prec
        try:
            out = []
            for a, b in self.real:
                x = _iv_span(a, b)
                acc = _iv.mpf(0)
                for c in reversed(list(vec)):
                    acc = acc * x + _iv_frac(c)
                out.append(acc * acc)
            for rlo, rhi, ilo, ihi in self.cplx:
                z = _box(rlo, rhi, ilo, ihi)
                val = _cpoly_iv(list(vec), z)
                out.append(val.real * val.real + val.imag * val.imag)
            return out
        finally:
            _iv.prec = old

    def log_abs_factored(self, terms, prec):
        """Enclosures of log|sigma(prod g^e)| per place for a formal product
        given as [(coeff vector, integer exponent)], or None if any factor's
        enclosure touches zero (caller should refine and retry)."""
        old = _iv.prec
        _iv.prec = prec
        try:
            total = [_iv.mpf(0)] * (self.r1 + self.r2)
            for vec, e in terms:
                if not e:
                    continue
                sq = self.abs_sq(vec, prec)
                for i, s in enumerate(sq):
                    lo, _ = _iv_bounds(s)
                    if lo <= 0:
                        return None
                    total[i] = total[i] + _iv.log(s) * e / 2
            return total
        finally:
            _iv.prec = old


def _disjoint_boxes(boxes):
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            a, b = boxes[i], boxes[j]
            if not (a[1] < b[0] or b[1] < a[0]
                    or a[3] < b[2] or b[3] < a[2]):
                return False
    return True


def mpmath_workprec(prec):
    return mpmath.workprec(prec)


def certified_places(algebra):
    """Cached certified archimedean places of a field algebra."""
    got = algebra._cache.get("places")
    if got is None:
        got = ArchimedeanPlaces(algebra)
        algebra._cache["places"] = got
    return got
