"""Arithmetic in K = Q[x]/(f) for a monic square-free integer polynomial f.

K is a finite product of number fields but is never factored here; all
arithmetic uses the power basis 1, a, ..., a^(n-1) where a is the class of x.
Elements are coefficient vectors on that basis (ints or Fractions).
"""

from fractions import Fraction
from math import gcd

from . import polys
from .errors import SquareFreeViolation, ZeroDivisor
from .linalg import det_int


class EtaleAlgebra:
    """Q[x]/(f), f monic square-free integral."""

    def __init__(self, coeffs):
        coeffs = polys.pnormalize(coeffs)
        if not coeffs or coeffs[-1] != 1:
            raise SquareFreeViolation("defining polynomial must be monic")
        if any(not isinstance(c, int) for c in coeffs):
            raise SquareFreeViolation("defining polynomial must be integral")
        if polys.pdeg(coeffs) < 1:
            raise SquareFreeViolation("defining polynomial must be nonconstant")
        if not polys.is_squarefree(coeffs):
            raise SquareFreeViolation("defining polynomial must be square-free")
        self.f = coeffs
        self.n = polys.pdeg(coeffs)
        n = self.n
        # reduction table: integer coordinate rows of a^k for k = n .. 2n-2
        table = [[-c for c in coeffs[:n]]]  # a^n
        for _ in range(n - 2):
            shifted = [0] + table[-1][:]  # multiply by a
            hi = shifted.pop()            # coefficient that lands on a^n
            if hi:
                shifted = [c + hi * d for c, d in zip(shifted, table[0])]
            table.append(shifted)
        self._reduction = table
        # power sums p_k = Tr(a^k), k = 0 .. 2n-2, via Newton's identities
        p = [n]
        a = coeffs  # a[i] = coefficient of x^i, a[n] = 1
        for k in range(1, 2 * n - 1):
            s = 0
            if k <= n:
                for i in range(1, k):
                    s -= a[n - i] * p[k - i]
                s -= k * a[n - k]
            else:
                for i in range(1, n + 1):
                    s -= a[n - i] * p[k - i]
            p.append(s)
        self._power_traces = p
        self._trace_gram = [[p[i + j] for j in range(n)] for i in range(n)]
        self._cache = {}

    def __repr__(self):
        return "EtaleAlgebra(%s)" % (polys.poly_to_string(self.f),)

    def __eq__(self, other):
        return isinstance(other, EtaleAlgebra) and self.f == other.f

    def __hash__(self):
        return hash(("EtaleAlgebra", self.f))

    # -- raw coefficient-vector arithmetic (hot paths) ------------------

    def mul_vec(self, u, v):
        """Product of two coefficient vectors (preserves int-ness)."""
        n = self.n
        out = [0] * (2 * n - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        out[i + j] += a * b
        res = out[:n]
        red = self._reduction
        for k in range(n, 2 * n - 1):
            c = out[k]
            if c:
                row = red[k - n]
                for j in range(n):
                    if row[j]:
                        res[j] += c * row[j]
        return res

    def pow_vec(self, u, e):
        assert e >= 0
        result = [0] * self.n
        result[0] = 1
        base = list(u)
        while e:
            if e & 1:
                result = self.mul_vec(result, base)
            base = self.mul_vec(base, base)
            e >>= 1
        return result

    def one_vec(self):
        v = [0] * self.n
        v[0] = 1
        return v

    def alpha_vec(self):
        v = [0] * self.n
        if self.n == 1:
            # a = root of x + c0, i.e. the rational -c0
            v[0] = -self.f[0]
        else:
            v[1] = 1
        return v

    def trace_vec(self, u):
        return sum(c * p for c, p in zip(u, self._power_traces))

    def mult_matrix_vec(self, u):
        """Rows: coordinates of u * a^i for i = 0..n-1."""
        rows = [list(u)]
        for _ in range(self.n - 1):
            prev = rows[-1]
            # multiply by a: shift and reduce
            shifted = [0] + list(prev)
            hi = shifted.pop()
            if hi:
                red = self._reduction[0]
                shifted = [c + hi * d for c, d in zip(shifted, red)]
            rows.append(shifted)
        return rows

    def norm_vec(self, u):
        """Determinant of the multiplication map (exact)."""
        M = self.mult_matrix_vec(u)
        den = 1
        for row in M:
            for x in row:
                if isinstance(x, Fraction):
                    den = den * x.denominator // gcd(den, x.denominator)
        if den == 1:
            return det_int([[int(x) for x in row] for row in M])
        intM = [[int(x * den) for x in row] for row in M]
        return Fraction(det_int(intM), den ** self.n)

    def rep_poly(self, u):
        """Coefficient vector as a polynomial tuple (for gcd with f)."""
        return polys.pnormalize(tuple(u))

    def is_zero_divisor_vec(self, u):
        if not any(u):
            return True
        g = polys.pgcd(self.rep_poly(u), self.f)
        return polys.pdeg(g) > 0

    def inv_vec(self, u):
        g, s, _ = polys.pxgcd(self.rep_poly(u), self.f)
        if polys.pdeg(g) != 0:
            raise ZeroDivisor("inverse of a zero divisor")
        out = list(s) + [0] * (self.n - len(s))
        return [Fraction(c) for c in out[:self.n]]

    def min_poly_vec(self, u):
        """Minimal polynomial (monic, ascending) of the element u."""
        n = self.n
        rows = [self.one_vec()]
        cur = self.one_vec()
        for _ in range(n):
            cur = self.mul_vec(cur, u)
            rows.append(cur)
        # first k with 1, u, ..., u^k linearly dependent
        from .linalg import kernel_basis
        for k in range(1, n + 1):
            sub = rows[:k + 1]
            den = 1
            for r in sub:
                for x in r:
                    if isinstance(x, Fraction):
                        den = den * x.denominator // gcd(den, x.denominator)
            intsub = [[int(x * den) for x in r] for r in sub]
            ker = kernel_basis(intsub)
            if ker:
                rel = ker[0]
                # normalize monic: coefficient of u^k
                lead = rel[-1]
                coeffs = tuple(Fraction(c, lead) for c in rel)
                return polys.pnormalize(coeffs)
        raise AssertionError("element has no minimal polynomial")

    # -- element wrapper -------------------------------------------------

    def element(self, coeffs):
        coeffs = list(coeffs)
        assert len(coeffs) <= self.n
        coeffs += [0] * (self.n - len(coeffs))
        norm = []
        for c in coeffs:
            c = Fraction(c)
            norm.append(int(c) if c.denominator == 1 else c)
        return AlgebraElement(self, norm)

    def zero(self):
        return self.element([0])

    def one(self):
        return self.element([1])

    def alpha(self):
        return AlgebraElement(self, self.alpha_vec())

    def from_rational(self, q):
        return self.element([q])


class AlgebraElement:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = tuple(coeffs)

    def __repr__(self):
        return "AlgebraElement(%r)" % (list(self.coeffs),)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.algebra == other.algebra
                and all(Fraction(a) == Fraction(b)
                        for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((self.algebra, tuple(Fraction(c) for c in self.coeffs)))

    def _wrap(self, coeffs):
        return AlgebraElement(self.algebra, coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        return self._wrap([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self._coerce(other)
        return self._wrap([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return self._wrap([-a for a in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        return self._wrap(self.algebra.mul_vec(self.coeffs, other.coeffs))

    __radd__ = __add__
    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            assert other.algebra == self.algebra
            return other
        return self.algebra.element([other])

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        return self._wrap(self.algebra.pow_vec(self.coeffs, e))

    def is_zero(self):
        return not any(self.coeffs)

    def is_zero_divisor(self):
        return self.algebra.is_zero_divisor_vec(self.coeffs)

    def inv(self):
        return self._wrap(self.algebra.inv_vec(self.coeffs))

    def trace(self):
        return self.algebra.trace_vec(self.coeffs)

    def norm(self):
        return self.algebra.norm_vec(self.coeffs)

    def mult_matrix(self):
        return self.algebra.mult_matrix_vec(self.coeffs)

    def min_poly(self):
        return self.algebra.min_poly_vec(self.coeffs)
