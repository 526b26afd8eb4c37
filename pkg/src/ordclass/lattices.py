"""Full-rank Z-lattices, orders, and fractional ideals in an etale algebra.

Canonical representation: a lattice is (1/den) * rowspan(mat) where mat is an
n x n integer matrix in row Hermite normal form with positive pivots and den
is a positive integer with gcd(den, content(mat)) = 1.  Two lattices are equal
iff their (den, mat) pairs are identical.
"""

from fractions import Fraction
from math import gcd

from .algebra import AlgebraElement
from .errors import NotFullRank
from .linalg import (
    det_int, hnf_rows, kernel_basis, mat_inverse_int, mat_mul, vec_mat,
)


def _lcm(a, b):
    return a * b // gcd(a, b)


class ZLattice:
    __slots__ = ("algebra", "den", "mat", "ref_order", "_cache")

    def __init__(self, algebra, den, mat, _canonical=False):
        self.algebra = algebra
        self.ref_order = None
        self._cache = {}
        if _canonical:
            self.den = den
            self.mat = mat
            return
        n = algebra.n
        rows = hnf_rows([list(r) for r in mat])
        if len(rows) != n:
            raise NotFullRank("lattice rank %d < %d" % (len(rows), n))
        # normalize gcd(den, entries)
        g = den
        for r in rows:
            for x in r:
                g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            den //= g
            rows = [[x // g for x in r] for r in rows]
        self.den = den
        self.mat = tuple(tuple(r) for r in rows)

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rows(cls, algebra, rows, den=1):
        return cls(algebra, den, rows)

    @classmethod
    def from_rational_rows(cls, algebra, rows):
        den = 1
        frows = [[Fraction(x) for x in r] for r in rows]
        for r in frows:
            for x in r:
                den = _lcm(den, x.denominator)
        irows = [[int(x * den) for x in r] for r in frows]
        return cls(algebra, den, irows)

    @classmethod
    def from_elements(cls, elements):
        algebra = elements[0].algebra
        return cls.from_rational_rows(algebra, [e.coeffs for e in elements])

    # -- canonical form / identity ---------------------------------------

    def key(self):
        return (self.den, self.mat)

    def __eq__(self, other):
        return (isinstance(other, ZLattice)
                and self.algebra == other.algebra
                and self.den == other.den and self.mat == other.mat)

    def __hash__(self):
        return hash((self.den, self.mat))

    def __repr__(self):
        return "ZLattice(den=%d, mat=%r)" % (self.den, [list(r) for r in self.mat])

    # -- accessors --------------------------------------------------------

    def basis_elements(self):
        d = self.den
        out = []
        for r in self.mat:
            if d == 1:
                out.append(self.algebra.element(list(r)))
            else:
                out.append(self.algebra.element([Fraction(x, d) for x in r]))
        return out

    def basis_vectors(self):
        """Rows as exact rational coefficient vectors."""
        d = self.den
        return [[Fraction(x, d) for x in r] for r in self.mat]

    def _inv_mat(self):
        """Cached (N, dd) with mat^{-1} = N/dd."""
        got = self._cache.get("invmat")
        if got is None:
            got = mat_inverse_int([list(r) for r in self.mat])
            self._cache["invmat"] = got
        return got

    def det_mat(self):
        got = self._cache.get("detmat")
        if got is None:
            got = 1
            for i in range(self.algebra.n):
                got *= self.mat[i][i]
            self._cache["detmat"] = got
        return got

    # -- membership -------------------------------------------------------

    def coords_of(self, vec, vden=1):
        """Exact rational coordinates of vec/vden on this lattice basis."""
        N, dd = self._inv_mat()
        target = vec_mat(list(vec), N)
        return [Fraction(self.den * x, dd * vden) for x in target]

    def contains_vec(self, vec, vden=1):
        return all(c.denominator == 1 for c in self.coords_of(vec, vden))

    def contains_element(self, el):
        den = 1
        coeffs = [Fraction(c) for c in el.coeffs]
        for c in coeffs:
            den = _lcm(den, c.denominator)
        return self.contains_vec([int(c * den) for c in coeffs], den)

    def contains_one(self):
        one = [0] * self.algebra.n
        one[0] = 1
        return self.contains_vec(one, 1)

    def contains_lattice(self, other):
        """True iff other is a sublattice of self."""
        N, dd = self._inv_mat()
        sd, od = self.den, other.den
        for row in other.mat:
            t = vec_mat(list(row), N)
            for x in t:
                # coordinate = sd*x/(dd*od) must be integral
                if (sd * x) % (dd * od):
                    return False
        return True

    def index_in(self, super_lat):
        """Generalized index [super : self] as a positive Fraction."""
        a = self.det_mat() * super_lat.den ** self.algebra.n
        b = super_lat.det_mat() * self.den ** self.algebra.n
        return Fraction(a, b)

    # -- arithmetic ---------------------------------------------------------

    def add(self, other):
        d = _lcm(self.den, other.den)
        s1, s2 = d // self.den, d // other.den
        rows = [[x * s1 for x in r] for r in self.mat]
        rows += [[x * s2 for x in r] for r in other.mat]
        return ZLattice(self.algebra, d, rows)

    def mul(self, other):
        A = self.algebra
        mv = A.mul_vec
        rows = []
        for r in self.mat:
            for s in other.mat:
                rows.append(mv(r, s))
        return ZLattice(A, self.den * other.den, rows)

    def scale(self, el):
        """el * L for a non-zero-divisor element (AlgebraElement or vector)."""
        if isinstance(el, AlgebraElement):
            coeffs = el.coeffs
        else:
            coeffs = el
        den = 1
        for c in coeffs:
            den = _lcm(den, Fraction(c).denominator)
        ivec = [int(Fraction(c) * den) for c in coeffs]
        mv = self.algebra.mul_vec
        rows = [mv(ivec, list(r)) for r in self.mat]
        return ZLattice(self.algebra, self.den * den, rows)

    def intersect(self, other):
        d = _lcm(self.den, other.den)
        s1, s2 = d // self.den, d // other.den
        A = [[x * s1 for x in r] for r in self.mat]
        B = [[x * s2 for x in r] for r in other.mat]
        ker = kernel_basis(A + B)
        n = self.algebra.n
        rows = [vec_mat(k[:n], A) for k in ker]
        return ZLattice(self.algebra, d, rows)

    def dual(self):
        """Trace dual {x : Tr(x*L) in Z}."""
        got = self._cache.get("dual")
        if got is not None:
            return got
        G = self.algebra._trace_gram
        B = [list(r) for r in self.mat]
        T = mat_mul(mat_mul(B, G), [list(c) for c in zip(*B)])
        N, dd = mat_inverse_int(T)
        rows = mat_mul(N, B)
        out = ZLattice(self.algebra, dd, [[self.den * x for x in r] for r in rows])
        self._cache["dual"] = out
        out._cache["dual"] = self
        return out

    def colon(self, other):
        """(self : other) = {x in K : x*other <= self}, via duals."""
        return self.dual().mul(other).dual()

    def multiplicator_ring(self):
        got = self._cache.get("multring")
        if got is None:
            got = Order.promote(self.colon(self))
            self._cache["multring"] = got
        return got

    # -- serialization -----------------------------------------------------

    def to_json_dict(self):
        return {"denominator": self.den,
                "basis": [list(r) for r in self.mat]}

    @classmethod
    def from_json_dict(cls, algebra, d):
        return cls(algebra, int(d["denominator"]),
                   [[int(x) for x in row] for row in d["basis"]])


class Order(ZLattice):
    """An idempotent unital lattice (a ring)."""

    __slots__ = ()

    def __init__(self, algebra, den, mat, _canonical=False, _checked=False):
        super().__init__(algebra, den, mat, _canonical=_canonical)
        if not _checked:
            if not self.contains_one():
                raise ValueError("order must contain 1")
            prod = ZLattice.mul(self, self)
            if prod.key() != self.key():
                raise ValueError("lattice is not multiplicatively closed")

    @classmethod
    def promote(cls, lat, checked=True):
        o = cls(lat.algebra, lat.den, lat.mat, _canonical=True, _checked=checked)
        o._cache = lat._cache
        return o

    @classmethod
    def equation_order(cls, algebra):
        """Z[a] on the power basis."""
        n = algebra.n
        mat = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        return cls(algebra, 1, mat, _canonical=True, _checked=True)

    def one_coords(self):
        got = self._cache.get("onecoords")
        if got is None:
            one = [0] * self.algebra.n
            one[0] = 1
            got = [int(c) for c in self.coords_of(one, 1)]
            self._cache["onecoords"] = got
        return got

    def structure_constants(self):
        """table[i][j] = integer coordinates of b_i*b_j on this basis."""
        got = self._cache.get("structconst")
        if got is not None:
            return got
        n = self.algebra.n
        N, dd = self._inv_mat()
        mv = self.algebra.mul_vec
        table = []
        for i in range(n):
            rowtab = []
            for j in range(n):
                prod = mv(list(self.mat[i]), list(self.mat[j]))
                t = vec_mat(prod, N)
                # coords = t/(dd*den): b_i b_j = prod/den^2, coords on mat/den
                coords = []
                for x in t:
                    num = x
                    assert num % (dd * self.den) == 0, "not closed under mult"
                    coords.append(num // (dd * self.den))
                rowtab.append(coords)
            table.append(rowtab)
        self._cache["structconst"] = table
        return table

    def discriminant(self):
        got = self._cache.get("disc")
        if got is None:
            G = self.algebra._trace_gram
            B = [list(r) for r in self.mat]
            T = mat_mul(mat_mul(B, G), [list(c) for c in zip(*B)])
            d = det_int(T)
            num = Fraction(d, self.den ** (2 * self.algebra.n))
            assert num.denominator == 1
            got = int(num)
            self._cache["disc"] = got
        return got


def span(gens, R):
    """Smallest fractional R-ideal containing the given elements."""
    assert gens, "span of an empty set"
    rows = []
    basis = R.basis_vectors()
    mv = R.algebra.mul_vec
    for g in gens:
        coeffs = g.coeffs if isinstance(g, AlgebraElement) else list(g)
        for b in basis:
            rows.append(mv(list(coeffs), b))
    lat = ZLattice.from_rational_rows(R.algebra, rows)
    lat.ref_order = R
    return lat


def ideal_mul(I, J):
    return I.mul(J)


def ideal_add(I, J):
    return I.add(J)


def ideal_intersect(I, J):
    return I.intersect(J)


def colon(I, J):
    return I.colon(J)


def trace_dual(I):
    return I.dual()


def multiplicator_ring(I):
    return I.multiplicator_ring()


def generalized_index(super_lat, sub_lat):
    """[super : sub] as a positive Fraction (integer when sub <= super)."""
    return sub_lat.index_in(super_lat)


def index(I, J):
    """Generalized index [I : J] as a positive Fraction."""
    return J.index_in(I)


FractionalIdeal = ZLattice


def is_invertible(I, S):
    """True iff I * (S : I) = S."""
    return I.mul(S.colon(I)).key() == S.key()


def is_weakly_equivalent(I, J):
    """True iff 1 lies in (I:J)*(J:I)."""
    return I.colon(J).mul(J.colon(I)).contains_one()


def is_gorenstein(S):
    got = S._cache.get("gorenstein")
    if got is None:
        got = is_invertible(S.dual(), S)
        S._cache["gorenstein"] = got
    return got


def isomorphism_certificate(I, J):
    """An element x with I = x*J, or None if I and J are not isomorphic
    as modules over their common multiplicator ring."""
    S = I.multiplicator_ring()
    if S.key() != J.multiplicator_ring().key():
        return None
    if not is_weakly_equivalent(I, J):
        return None
    L = I.colon(J)
    # fast path: short elements of L often work
    from .embeddings import lll_reduced_basis
    for vec, vden in lll_reduced_basis(L):
        for sgn in (1, -1):
            cand = [Fraction(sgn * x, vden) for x in vec]
            if J.scale(cand).key() == I.key():
                return I.algebra.element(cand)
    from .picard import principal_generator
    gen = principal_generator(L, S)
    if gen is None:
        return None
    assert J.scale(gen).key() == I.key()
    return gen
