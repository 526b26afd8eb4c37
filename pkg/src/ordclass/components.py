"""Decomposition of an etale algebra into its number-field components.

The defining polynomial factors into monic irreducibles f = f_1 * ... * f_r,
so K = Q[x]/(f) is isomorphic to the product of the fields K_i = Q[x]/(f_i)
via the Chinese remainder map.  Everything here is exact: the projection
K -> K_i is an integer matrix on power bases, and the section K_i -> K is a
rational matrix built from the orthogonal idempotents.

Lattices that are stable under the idempotents (modules over an order that
contains them, e.g. ideals over the maximal order) split into direct sums of
component lattices; ``split_lattice``/``assemble_lattice`` verify this by
reconstruction.
"""

from fractions import Fraction

from . import polys
from .algebra import EtaleAlgebra
from .errors import FactorizationUnavailable
from .lattices import Order, ZLattice
from .linalg import vec_mat


def irreducible_factors(f):
    """Monic irreducible factors of a monic square-free integer polynomial.

    Tries the naive search first and falls back to the lifting-based
    divisor enumeration for degrees it cannot handle.
    """
    f = polys.pnormalize(f)
    try:
        return polys.factor_monic_squarefree(f)
    except FactorizationUnavailable:
        pass
    divs = [d for d in polys.bounded_monic_divisors(f, polys.pdeg(f))
            if polys.pdeg(d) >= 1]
    out = []
    for d in divs:
        proper = False
        for e in divs:
            if 1 <= polys.pdeg(e) < polys.pdeg(d):
                q, rem = polys.pdivmod(d, e)
                if not rem:
                    proper = True
                    break
        if not proper:
            out.append(d)
    out.sort(key=lambda p: (polys.pdeg(p), p))
    prod = (1,)
    for d in out:
        prod = polys.pmul(prod, d)
    assert prod == f, "irreducible factors do not multiply back"
    return out


def _as_int(c):
    c = Fraction(c)
    assert c.denominator == 1
    return int(c)


class AlgebraSplitting:
    """K = K_1 x ... x K_r with exact projection and section matrices.

    :param algebra: the :class:`EtaleAlgebra` to decompose
    """

    def __init__(self, algebra):
        self.algebra = algebra
        f = algebra.f
        self.factors = tuple(irreducible_factors(f))
        self.fields = tuple(EtaleAlgebra(list(g)) for g in self.factors)
        self.nfields = len(self.factors)
        # orthogonal idempotents: e_i = h_i * (h_i^{-1} mod f_i) mod f
        idem = []
        for g in self.factors:
            h, rem = polys.pdivmod(f, g)
            assert not rem
            d, s, _ = polys.pxgcd(h, g)
            assert polys.pdeg(d) == 0
            e = polys.pmod(polys.pmul(polys.pscale(s, Fraction(1, d[0])), h), f)
            vec = list(e) + [0] * (algebra.n - len(e))
            idem.append(tuple(Fraction(c) for c in vec))
        self.idempotents = tuple(idem)
        total = [sum(e[j] for e in idem) for j in range(algebra.n)]
        assert total == [1] + [0] * (algebra.n - 1), "idempotents do not sum to 1"
        for i in range(self.nfields):
            for j in range(i, self.nfields):
                prod = algebra.mul_vec(list(idem[i]), list(idem[j]))
                want = list(idem[i]) if i == j else [0] * algebra.n
                assert [Fraction(c) for c in prod] == [Fraction(c) for c in want]
        # projection matrices: row k = coordinates of x^k mod f_i
        self._proj = []
        for g, F in zip(self.factors, self.fields):
            rows = []
            for k in range(algebra.n):
                xk = (0,) * k + (1,)
                red = polys.pmod(xk, g)
                row = [_as_int(c) for c in red] + [0] * (F.n - len(red))
                rows.append(row[:F.n])
            self._proj.append(rows)
        # section matrices: row k = coordinates in K of x^k * e_i
        self._sect = []
        for i, F in enumerate(self.fields):
            rows = []
            for k in range(F.n):
                unit = [0] * algebra.n
                unit[k] = 1
                rows.append(algebra.mul_vec(unit, list(idem[i])))
            self._sect.append(rows)
        for i, F in enumerate(self.fields):
            for k in range(F.n):
                back = self.project_vec(i, self._sect[i][k])
                want = [1 if j == k else 0 for j in range(F.n)]
                assert [Fraction(c) for c in back] == want
        self.signatures = tuple(
            (r1, (F.n - r1) // 2)
            for F, r1 in ((F, polys.sturm_real_root_count(F.f))
                          for F in self.fields))

    def __repr__(self):
        return "AlgebraSplitting(%s)" % " * ".join(
            polys.poly_to_string(g) for g in self.factors)

    # -- element maps ------------------------------------------------------

    def project_vec(self, i, vec):
        """Coordinates in K_i of the image of a K-coefficient vector."""
        return vec_mat(list(vec), self._proj[i])

    def embed_vec(self, i, vec):
        """K-coefficient vector of the section K_i -> K (lands in e_i*K)."""
        return vec_mat(list(vec), self._sect[i])

    def split_vec(self, vec):
        return [self.project_vec(i, vec) for i in range(self.nfields)]

    def assemble_vec(self, parts):
        out = [Fraction(0)] * self.algebra.n
        for i, part in enumerate(parts):
            emb = self.embed_vec(i, part)
            out = [a + b for a, b in zip(out, emb)]
        return out

    def split_element(self, el):
        return [F.element(self.project_vec(i, el.coeffs))
                for i, F in enumerate(self.fields)]

    def assemble_element(self, parts):
        vecs = [p.coeffs for p in parts]
        return self.algebra.element(self.assemble_vec(vecs))

    # -- lattice maps ------------------------------------------------------

    def split_lattice(self, lat):
        """Component lattices of an idempotent-stable lattice.

        Verified by reconstruction; raises if lat is not the direct sum of
        its projections.
        """
        parts = []
        for i, F in enumerate(self.fields):
            rows = [self.project_vec(i, r) for r in lat.mat]
            parts.append(ZLattice(F, lat.den, rows))
        back = self.assemble_lattice(parts)
        assert back.key() == lat.key(), "lattice is not split by the idempotents"
        return parts

    def assemble_lattice(self, parts):
        rows = []
        for i, part in enumerate(parts):
            for vec in part.basis_vectors():
                rows.append(self.embed_vec(i, vec))
        return ZLattice.from_rational_rows(self.algebra, rows)

    def split_order(self, order):
        """Component orders of an idempotent-stable order (e.g. the maximal
        order): the projections are verified to be rings."""
        parts = self.split_lattice(order)
        return [Order.promote(p, checked=False) for p in parts]


def split_algebra(algebra):
    """The cached :class:`AlgebraSplitting` of an etale algebra."""
    got = algebra._cache.get("split")
    if got is None:
        got = AlgebraSplitting(algebra)
        algebra._cache["split"] = got
    return got
