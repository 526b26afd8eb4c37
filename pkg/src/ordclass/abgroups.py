"""Finite abelian structures attached to orders: Smith-form presentations,
lattice quotients, subgroup enumeration, maximal ideals above a prime, and
unit groups of finite quotient rings.

Everything is exact.  Groups are presented by integer relation matrices put
into Smith normal form; residue rings are handled through integer coordinate
vectors reduced modulo Hermite bases; element orders in unit groups are
certified against fully factored group orders, never assumed.
"""

import itertools
import random
from fractions import Fraction
from math import gcd, isqrt

from .lattices import ZLattice, ideal_add, span
from .linalg import hnf, hnf_rows, mat_inverse_int, nullspace_mod, \
    rref_mod, snf, solve_mod, vec_mat
from .maximal import factor_integer, mul_coords, radical_kernel_mod_p
from .modpolys import factor_mod, minv_mod, mmod, mmul


# ---------------------------------------------------------------------------
# presentations of finite abelian groups


class AbelianPresentation:
    """Finite abelian group Z^ngens / rowspan(relations).

    Coordinates are split by Smith normal form: the group is the direct sum
    of cyclic factors Z/d_1 x ... x Z/d_k with 1 < d_1 | d_2 | ... | d_k.
    `dlog` maps an integer exponent vector to its coordinates in those
    factors and `lift` is a right inverse.
    """

    def __init__(self, ngens, relations):
        self.ngens = ngens
        rels = [list(r) for r in relations]
        for r in rels:
            assert len(r) == ngens
        if ngens == 0:
            self.invariants = ()
            self._V = []
            self._Vinv = []
            self._kept = []
            return
        if not rels:
            rels = [[0] * ngens]
        S, _, V = snf(rels)
        diag = [S[j][j] if j < len(S) else 0 for j in range(ngens)]
        assert all(d > 0 for d in diag), "group is infinite"
        self._V = V
        N, dd = mat_inverse_int(V)
        assert dd == 1
        self._Vinv = N
        self._kept = [j for j in range(ngens) if diag[j] > 1]
        self.invariants = tuple(diag[j] for j in self._kept)

    def order(self):
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def exponent(self):
        return self.invariants[-1] if self.invariants else 1

    def is_trivial(self):
        return not self.invariants

    def dlog(self, x):
        """Coordinates of the class of exponent vector x."""
        assert len(x) == self.ngens
        y = vec_mat(list(x), self._V) if self.ngens else []
        return tuple(y[j] % d for j, d in zip(self._kept, self.invariants))

    def lift(self, y):
        """An exponent vector in Z^ngens whose class has coordinates y."""
        assert len(y) == len(self.invariants)
        z = [0] * self.ngens
        for j, c in zip(self._kept, y):
            z[j] = int(c)
        return vec_mat(z, self._Vinv) if self.ngens else []

    def element_order(self, y):
        out = 1
        for d, c in zip(self.invariants, y):
            t = d // gcd(d, c % d)
            out = out * t // gcd(out, t)
        return out

    def iter_dlogs(self):
        return itertools.product(*[range(d) for d in self.invariants])

    def quotient(self, sub_dlogs):
        """Presentation of the quotient by the subgroup the given coordinate
        vectors generate; its exponent vectors live on this group's cyclic
        coordinates."""
        k = len(self.invariants)
        rels = [[self.invariants[i] if i == j else 0 for i in range(k)]
                for j in range(k)]
        rels += [list(y) for y in sub_dlogs]
        return AbelianPresentation(k, rels)


# ---------------------------------------------------------------------------
# quotients of one lattice by another


def _element_vec(el):
    den = 1
    coeffs = [Fraction(c) for c in el.coeffs]
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den) for c in coeffs], den


class LatticeQuotient:
    """Finite additive group top/bottom for nested full-rank lattices."""

    def __init__(self, top, bottom):
        if not top.contains_lattice(bottom):
            raise ValueError("quotient requires bottom <= top")
        self.top = top
        self.bottom = bottom
        n = top.algebra.n
        rels = []
        for row in bottom.mat:
            coords = top.coords_of(list(row), bottom.den)
            assert all(c.denominator == 1 for c in coords)
            rels.append([int(c) for c in coords])
        self.group = AbelianPresentation(n, rels)

    def order(self):
        return self.group.order()

    @property
    def invariants(self):
        return self.group.invariants

    def dlog_vec(self, vec, vden=1):
        coords = self.top.coords_of(list(vec), vden)
        assert all(c.denominator == 1 for c in coords), "vector not in top"
        return self.group.dlog([int(c) for c in coords])

    def dlog_element(self, el):
        vec, den = _element_vec(el)
        return self.dlog_vec(vec, den)

    def lift_vec(self, y):
        """A representative of coordinates y, as (integer vector, den)."""
        x = self.group.lift(y)
        return vec_mat(x, [list(r) for r in self.top.mat]), self.top.den

    def lift_element(self, y):
        vec, den = self.lift_vec(y)
        return self.top.algebra.element([Fraction(v, den) for v in vec])


def lattice_quotient(top, bottom):
    return LatticeQuotient(top, bottom)


# ---------------------------------------------------------------------------
# subgroup enumeration


def _divisors(m):
    out = [1]
    for p, e in factor_integer(m):
        out = [d * p ** i for d in out for i in range(e + 1)]
    return sorted(out)


def _primary_sublattices(orders):
    """HNF bases of all lattices between diag(orders)*Z^k and Z^k.

    `orders` are powers of one prime; each basis is a k x k upper-triangular
    integer matrix, and each subgroup appears exactly once.
    """
    k = len(orders)
    divs = [_divisors(d) for d in orders]
    out = []
    for pivots in itertools.product(*divs):
        cols = [range(pivots[j]) for j in range(k) for _ in range(j)]
        for fill in itertools.product(*cols):
            H = [[0] * k for _ in range(k)]
            pos = 0
            for j in range(k):
                H[j][j] = pivots[j]
                for i in range(j):
                    H[i][j] = fill[pos]
                    pos += 1
            if _contains_diag(H, orders):
                out.append(H)
    return out


def _contains_diag(H, orders):
    k = len(orders)
    for j in range(k):
        # back-substitute x*H = orders[j]*e_j over Z
        x = [0] * k
        ok = True
        for c in range(k):
            t = (orders[j] if c == j else 0) - sum(x[i] * H[i][c] for i in range(c))
            if t % H[c][c]:
                ok = False
                break
            x[c] = t // H[c][c]
        if not ok:
            return False
    return True


class SubgroupHandle:
    """One subgroup of a finite abelian group, with canonical identity.

    `gens` are coordinate vectors (on the ambient group's cyclic
    coordinates) that generate the subgroup; `key` is the Hermite basis of
    the corresponding exponent lattice, so equal subgroups compare equal.
    """

    def __init__(self, presentation, gens):
        self.presentation = presentation
        inv = presentation.invariants
        k = len(inv)
        rows = [list(g) for g in gens]
        rows += [[inv[j] if i == j else 0 for i in range(k)] for j in range(k)]
        H = hnf_rows(rows) if rows else []
        self.key = tuple(tuple(r) for r in H)
        det = 1
        for i in range(k):
            det *= H[i][i]
        total = 1
        for d in inv:
            total *= d
        self.order = total // det if k else 1
        self.gens = [tuple(c % d for c, d in zip(r, inv)) for r in H]

    def __eq__(self, other):
        return isinstance(other, SubgroupHandle) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "SubgroupHandle(order=%d)" % self.order


def all_subgroups(presentation):
    """Yield every subgroup of a finite abelian group exactly once."""
    inv = presentation.invariants
    k = len(inv)
    if k == 0:
        yield SubgroupHandle(presentation, [])
        return
    primes = sorted({p for d in inv for p, _ in factor_integer(d)})
    per_prime = []
    for p in primes:
        kept = []
        local_orders = []
        crt = []
        for j, d in enumerate(inv):
            a = 0
            while d % p == 0:
                d //= p
                a += 1
            if a:
                kept.append(j)
                q = p ** a
                m = inv[j] // q
                # CRT unit: 1 mod q, 0 mod m
                c = m * pow(m, -1, q) % inv[j] if m > 1 else 1
                local_orders.append(q)
                crt.append(c)
        lattices = _primary_sublattices(local_orders)
        choices = []
        for H in lattices:
            gens = []
            for row in H:
                g = [0] * k
                for t, j in enumerate(kept):
                    g[j] = row[t] * crt[t] % inv[j]
                gens.append(g)
            choices.append(gens)
        per_prime.append(choices)
    for combo in itertools.product(*per_prime):
        gens = [g for part in combo for g in part]
        yield SubgroupHandle(presentation, gens)


def subgroup_lattice(handle, quotient):
    """The sublattice of quotient.top spanned by bottom and the subgroup."""
    rows = quotient.bottom.basis_vectors()
    for g in handle.gens:
        vec, den = quotient.lift_vec(g)
        rows.append([Fraction(v, den) for v in vec])
    return ZLattice.from_rational_rows(quotient.top.algebra, rows)


def module_span_from_subgroup(handle, quotient, R):
    """Smallest R-module inside quotient.top containing bottom and the
    subgroup's representatives; bottom itself must be an R-module."""
    lifts = []
    for g in handle.gens:
        el = quotient.lift_element(g)
        if any(el.coeffs):
            lifts.append(el)
    if not lifts:
        return quotient.bottom
    return ideal_add(span(lifts, R), quotient.bottom)


# ---------------------------------------------------------------------------
# residue-ring plumbing: integer coordinate vectors on an order's basis


class _CoordLattice:
    """Sublattice of Z^n by upper-triangular Hermite basis; canonical
    representatives via back-substitution."""

    def __init__(self, rows):
        self.h = hnf_rows([list(r) for r in rows])
        self.n = len(self.h)
        assert all(self.h[i][i] for i in range(self.n)), "not full rank"

    def reduce(self, v):
        v = list(v)
        for i in range(self.n):
            q = v[i] // self.h[i][i]
            if q:
                row = self.h[i]
                for j in range(i, self.n):
                    v[j] -= q * row[j]
        return v

    def contains(self, v):
        return not any(self.reduce(v))


def _coord_rows(S, I):
    """Integer coordinates of lattice I on the basis of S (I <= S)."""
    rows = []
    for row in I.mat:
        coords = S.coords_of(list(row), I.den)
        assert all(c.denominator == 1 for c in coords), "not a sublattice"
        rows.append([int(c) for c in coords])
    return rows


def _alg_vec(S, coords):
    return vec_mat(list(coords), [list(r) for r in S.mat]), S.den


def _pow_mod(table, red, base, e):
    assert e >= 1
    acc = list(base)
    result = None
    while e:
        if e & 1:
            result = acc if result is None else red(mul_coords(table, result, acc))
        e >>= 1
        if e:
            acc = red(mul_coords(table, acc, acc))
    return result


# ---------------------------------------------------------------------------
# maximal ideals above a rational prime


def _min_poly_in_block(mul, unit, b, p):
    """Monic minimal polynomial of b in a commutative F_p-algebra block with
    identity `unit`, coefficients ascending."""
    rows = [list(unit)]
    pw = list(unit)
    while True:
        pw = mul(pw, b)
        sol = solve_mod(rows, pw, p)
        if sol is not None:
            return [(-c) % p for c in sol] + [1]
        rows.append(list(pw))


def _eval_poly_in_block(mul, unit, poly, b, p):
    acc = [0] * len(unit)
    for c in reversed(poly):
        acc = mul(acc, b)
        if c % p:
            acc = [(x + c * u) % p for x, u in zip(acc, unit)]
    return acc


def _split_etale(mul, unit, basis, p, rng):
    """Decompose a commutative semisimple F_p-algebra into fields.

    Returns a list of (unit, basis) pairs, one per field component, each
    certified by an element whose minimal polynomial is irreducible of
    degree equal to the component's dimension.
    """
    dim = len(basis)
    candidates = [list(r) for r in basis]
    tries = 0
    while True:
        if candidates:
            b = candidates.pop(0)
        else:
            b = [0] * len(unit)
            for r in basis:
                c = rng.randrange(p)
                if c:
                    b = [(x + c * y) % p for x, y in zip(b, r)]
        tries += 1
        assert tries < 300 * dim + 600, "semisimple splitting did not terminate"
        m = _min_poly_in_block(mul, unit, b, p)
        facs = factor_mod(m, p)
        assert all(e == 1 for _, e in facs), "nilpotents in semisimple part"
        if len(facs) == 1:
            if len(m) - 1 == dim:
                return [(unit, basis)]
            continue
        out = []
        for g, _ in facs:
            # idempotent of the component killed by every other factor
            h = [1]
            for g2, _ in facs:
                if g2 is not g:
                    h = mmul(h, g2, p)
            v = minv_mod(mmod(h, g, p), g, p)
            e_poly = mmod(mmul(v, h, p), m, p)
            e_new = _eval_poly_in_block(mul, unit, e_poly, b, p)
            sub_rows = [mul(e_new, r) for r in basis]
            R, pivots = rref_mod(sub_rows, p)
            sub_basis = R[: len(pivots)]
            out.extend(_split_etale(mul, e_new, sub_basis, p, rng))
        return out


def primes_above(S, p):
    """Maximal ideals of the order S containing the prime p.

    Returns [(P, f)] with f the residue degree [S/P : F_p], sorted by the
    canonical form of P.  Works for any order, maximal or not.
    """
    got = S._cache.get(("primes", p))
    if got is not None:
        return got
    n = S.algebra.n
    table = S.structure_constants()
    nil = radical_kernel_mod_p(S, p)
    R, pivots = rref_mod(nil, p) if nil else ([], [])
    nil_rref = R[: len(pivots)]
    comp = [j for j in range(n) if j not in pivots]
    r = len(comp)

    def project(v):
        v = [x % p for x in v]
        for row, pc in zip(nil_rref, pivots):
            c = v[pc]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, row)]
        return [v[j] for j in comp]

    def lift(u):
        v = [0] * n
        for j, x in zip(comp, u):
            v[j] = x % p
        return v

    def mul(u, v):
        return project(mul_coords(table, lift(u), lift(v)))

    unit = project(S.one_coords())
    basis = [[1 if i == j else 0 for i in range(r)] for j in range(r)]
    rng = random.Random(1_000_003 * p + 17 * n)
    blocks = _split_etale(mul, unit, basis, p, rng)
    assert sum(len(bb) for _, bb in blocks) == r
    out = []
    for bunit, bbasis in blocks:
        # kernel of the algebra map S -> component
        rows = []
        for j in range(n):
            std = [1 if i == j else 0 for i in range(n)]
            w = mul(bunit, project(std))
            coords = solve_mod(bbasis, w, p)
            assert coords is not None
            rows.append(coords)
        ker = nullspace_mod(rows, p)
        prows = [[p * x for x in row] for row in S.mat]
        mat = [list(r) for r in S.mat]
        prows += [vec_mat([x % p for x in k], mat) for k in ker]
        P = ZLattice(S.algebra, S.den, prows)
        out.append((P, len(bbasis)))
    out.sort(key=lambda t: t[0].key())
    S._cache[("primes", p)] = out
    return out


def primes_containing(S, I):
    """Maximal ideals of S containing the integral S-ideal I."""
    m = I.index_in(S)
    assert m.denominator == 1
    out = []
    for q, _ in factor_integer(int(m)):
        for P, f in primes_above(S, q):
            if P.contains_lattice(I):
                out.append((P, q, f))
    return out


# ---------------------------------------------------------------------------
# unit groups of finite quotient rings


class _LocalUnits:
    """Unit group of the local ring S/q, q primary to the maximal ideal P."""

    def __init__(self, S, P, q, p):
        self.S = S
        self.P = P
        self.q = q
        self.p = p
        self.table = S.structure_constants()
        self.one = S.one_coords()
        self.qred = _CoordLattice(_coord_rows(S, q))
        self.pred = _CoordLattice(_coord_rows(S, P))
        fd = P.index_in(S)
        assert fd.denominator == 1
        pd = int(fd)
        d = 0
        t = pd
        while t > 1:
            assert t % p == 0
            t //= p
            d += 1
        self.res_degree = d
        self.field_order = pd
        pl = q.index_in(P)
        assert pl.denominator == 1
        self.local_order = (pd - 1) * int(pl)
        self._build_filtration()
        self._build_field_gen()
        self._build_relations()

    # -- coordinate arithmetic mod q --------------------------------------

    def _mul(self, u, v):
        return self.qred.reduce(mul_coords(self.table, u, v))

    def _pow(self, u, e):
        if e == 0:
            return list(self.one)
        return _pow_mod(self.table, self.qred.reduce, u, e)

    def _inv(self, u):
        out = self._pow(u, self.local_order - 1)
        assert self._is_one(self._mul(out, u))
        return out

    def _is_one(self, u):
        return not any(a != b for a, b in
                       zip(self.qred.reduce(u), self.qred.reduce(self.one)))

    # -- multiplicative filtration 1 + P^i --------------------------------

    def _build_filtration(self):
        S, P, q = self.S, self.P, self.q
        chain = [P]
        while chain[-1] != q:
            nxt = ideal_add(chain[-1].mul(P), q)
            assert nxt != chain[-1], "filtration stalled above the modulus"
            chain.append(nxt)
        self.levels = []
        for i in range(len(chain) - 1):
            LQ = LatticeQuotient(chain[i], chain[i + 1])
            assert all(d == self.p for d in LQ.invariants)
            gens = []
            k = len(LQ.invariants)
            for j in range(k):
                y = tuple(1 if t == j else 0 for t in range(k))
                vec, den = LQ.lift_vec(y)
                coords = S.coords_of(vec, den)
                assert all(c.denominator == 1 for c in coords)
                u = self.qred.reduce(
                    [int(c) + o for c, o in zip(coords, self.one)])
                gens.append((u, self._inv(u)))
            self.levels.append((LQ, gens))

    def _descend(self, w, start):
        """Exponents writing unit w (≡ 1 mod level `start`'s lattice) over
        the filtration generators at levels >= start."""
        S, p = self.S, self.p
        exps = []
        for i in range(start, len(self.levels)):
            LQ, gens = self.levels[i]
            diff = [a - b for a, b in zip(w, self.one)]
            vec, den = _alg_vec(S, diff)
            y = LQ.dlog_vec(vec, den)
            for t, e in enumerate(y):
                exps.append(e)
                if e:
                    w = self._mul(w, self._pow(gens[t][1], e))
        assert self._is_one(w), "unit does not descend to 1"
        return exps

    # -- residue field generator ------------------------------------------

    def _field_elements_iter(self, rng):
        n = self.S.algebra.n
        for j in range(n):
            yield [1 if i == j else 0 for i in range(n)]
        while True:
            yield [rng.randrange(self.p) for _ in range(n)]

    def _build_field_gen(self):
        if self.field_order == 2:
            self.field_gen = None
            self.cyclic_order = 1
            return
        qm1 = self.field_order - 1
        facs = factor_integer(qm1)
        rng = random.Random(7_777_777 * self.p + self.field_order)
        pl = self.local_order // qm1
        for tries, cand in enumerate(self._field_elements_iter(rng)):
            assert tries < 4000, "no residue field generator found"
            if self.pred.contains(cand):
                continue
            g = self.qred.reduce(cand)
            ok = True
            for ell, _ in facs:
                t = self._pow(g, qm1 // ell)
                if self.pred.contains([a - b for a, b in zip(t, self.one)]):
                    ok = False
                    break
            if not ok:
                continue
            h = self._pow(g, pl)
            assert self._is_one(self._pow(h, qm1)), "generator order is wrong"
            self.field_gen = h
            self.cyclic_order = qm1
            return

    def _field_dlog(self, x):
        """Discrete log of x base the field generator in (S/P)^*."""
        qm1 = self.cyclic_order
        if qm1 == 1:
            return 0
        red = self.pred.reduce
        h = self.field_gen
        m = isqrt(qm1 - 1) + 1
        baby = {}
        cur = list(self.one)
        for j in range(m):
            baby.setdefault(tuple(red(cur)), j)
            cur = red(mul_coords(self.table, cur, h))
        hinv = self._inv(h)
        giant = self._pow(hinv, m)
        cur = list(x)
        for i in range(m + 1):
            j = baby.get(tuple(red(cur)))
            if j is not None:
                return (i * m + j) % qm1
            cur = red(mul_coords(self.table, cur, giant))
        raise AssertionError("element not in the residue field's unit group")

    # -- presentation -------------------------------------------------------

    def _build_relations(self):
        gens = []
        if self.field_gen is not None:
            gens.append(self.field_gen)
        level_offsets = []
        for _, lg in self.levels:
            level_offsets.append(len(gens))
            gens.extend(u for u, _ in lg)
        self.gens = gens
        ng = len(gens)
        rels = []
        off = 1 if self.field_gen is not None else 0
        if self.field_gen is not None:
            row = [0] * ng
            row[0] = self.cyclic_order
            rels.append(row)
        for i, (LQ, lg) in enumerate(self.levels):
            for t, (u, _) in enumerate(lg):
                w = self._pow(u, self.p)
                exps = self._descend(w, i + 1)
                row = [0] * ng
                row[level_offsets[i] + t] = self.p
                pos = level_offsets[i + 1] if i + 1 < len(self.levels) else ng
                for e in exps:
                    row[pos] -= e
                    pos += 1
                rels.append(row)
        self.relations = rels
        pres = AbelianPresentation(ng, rels)
        assert pres.order() == self.local_order, "presentation order mismatch"

    def dlog(self, x):
        """Exponent vector over this local group's generators for unit x
        (an S-coordinate vector)."""
        x = self.qred.reduce(x)
        assert not self.pred.contains(x), "element is not a unit locally"
        out = []
        if self.field_gen is not None:
            a = self._field_dlog(x)
            out.append(a)
            if a:
                x = self._mul(x, self._pow(self._inv(self.field_gen), a))
        exps = self._descend(x, 0)
        out.extend(exps)
        return out


class ResidueUnits:
    """Unit group (S/f)^* of an order S modulo an integral S-ideal f.

    `generators` are elements of S; `presentation` gives the cyclic
    decomposition; `dlog` writes any unit on the cyclic coordinates.
    """

    def __init__(self, S, modulus):
        assert S.contains_lattice(modulus), "modulus must be integral"
        assert modulus.mul(S) == modulus, "modulus must be an ideal"
        self.order_lattice = S
        self.modulus = modulus
        self.algebra = S.algebra
        m = modulus.index_in(S)
        assert m.denominator == 1
        m = int(m)
        self._table = S.structure_constants()
        self._fred = _CoordLattice(_coord_rows(S, modulus))
        self._locals = []
        if m > 1:
            prs = primes_containing(S, modulus)
            comps = []
            for P, p, _ in prs:
                q = ideal_add(modulus, P)
                while True:
                    nxt = ideal_add(modulus, q.mul(P))
                    if nxt == q:
                        break
                    q = nxt
                comps.append((P, q, p))
            inter = None
            for _, q, _ in comps:
                inter = q if inter is None else inter.intersect(q)
            assert inter == modulus, "primary components do not refine"
            for i in range(len(comps)):
                for j in range(i + 1, len(comps)):
                    s = ideal_add(comps[i][1], comps[j][1])
                    assert s.contains_one(), \
                        "primary components are not pairwise comaximal"
            self._locals = [_LocalUnits(S, P, q, p) for P, q, p in comps]
        self._crt = self._crt_multipliers()
        gens = []
        rel_rows = []
        total = sum(len(L.gens) for L in self._locals)
        offset = 0
        for c, L in zip(self._crt, self._locals):
            for u in L.gens:
                diff = [a - b for a, b in zip(u, L.one)]
                lifted = [o + x for o, x in
                          zip(S.one_coords(), mul_coords(self._table, c, diff))]
                gens.append(self._fred.reduce(lifted))
            for row in L.relations:
                full = [0] * total
                full[offset:offset + len(row)] = row
                rel_rows.append(full)
            offset += len(L.gens)
        self._gen_coords = gens
        self.presentation = AbelianPresentation(total, rel_rows)
        self.generators = [self._coords_element(g) for g in gens]

    def _coords_element(self, coords):
        vec, den = _alg_vec(self.order_lattice, coords)
        return self.algebra.element([Fraction(v, den) for v in vec])

    def _crt_multipliers(self):
        S = self.order_lattice
        k = len(self._locals)
        if k == 0:
            return []
        if k == 1:
            return [list(S.one_coords())]
        out = []
        for i in range(k):
            rest = None
            for j in range(k):
                if j != i:
                    q = self._locals[j].q
                    rest = q if rest is None else rest.intersect(q)
            a_rows = _coord_rows(S, self._locals[i].q)
            b_rows = _coord_rows(S, rest)
            stacked = a_rows + b_rows
            H, U = hnf(stacked)
            n = S.algebra.n
            # solve x*H = e_0 (coords of 1); sum lattice must be everything
            one = S.one_coords()
            x = [0] * len(H)
            v = list(one)
            for c in range(n):
                piv = H[c][c] if c < len(H) else 0
                assert piv, "components are not comaximal"
                t = v[c]
                assert t % piv == 0
                x[c] = t // piv
                for j in range(n):
                    v[j] -= x[c] * H[c][j]
            assert not any(v)
            y = vec_mat(x, U)
            c_vec = [0] * n
            for t, row in enumerate(b_rows):
                if y[len(a_rows) + t]:
                    for j in range(n):
                        c_vec[j] += y[len(a_rows) + t] * row[j]
            out.append(c_vec)
        return out

    # -- public API ---------------------------------------------------------

    def order(self):
        return self.presentation.order()

    @property
    def invariants(self):
        return self.presentation.invariants

    def _coords_of_element(self, el):
        vec, den = _element_vec(el)
        coords = self.order_lattice.coords_of(vec, den)
        assert all(c.denominator == 1 for c in coords), "element not in order"
        return [int(c) for c in coords]

    def is_unit(self, el):
        x = self._coords_of_element(el)
        return all(not L.pred.contains(x) for L in self._locals)

    def raw_dlog(self, el):
        """Exponents over `generators` (pre-Smith coordinates)."""
        x = self._coords_of_element(el)
        out = []
        for L in self._locals:
            out.extend(L.dlog(x))
        return out

    def dlog(self, el):
        return self.presentation.dlog(self.raw_dlog(el))


def residue_unit_group(S, modulus):
    """Unit group of S/modulus for an order S and integral S-ideal."""
    return ResidueUnits(S, modulus)


def unit_image_quotient(big_units, elements):
    """Presentation of big_units modulo the subgroup the elements generate."""
    dls = [big_units.dlog(u) for u in elements]
    return big_units.presentation.quotient(dls)


def unit_group_quotient(big_order, small_order, modulus):
    """Presentation of (big/modulus)^* modulo the image of (small/modulus)^*;
    modulus must be an ideal of both orders."""
    GO = residue_unit_group(big_order, modulus)
    GR = residue_unit_group(small_order, modulus)
    return GO, unit_image_quotient(GO, GR.generators)
