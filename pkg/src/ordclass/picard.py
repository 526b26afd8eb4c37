"""Picard groups of arbitrary orders, with exact certificates.

For an order S inside its maximal over-order O, every class of invertible
S-ideals contains an ideal coprime to the conductor f = (S : O), and
contraction I -> I n S identifies O-ideals coprime to f with S-ideals
coprime to f.  The group of S-classes is therefore generated by
contractions of (a) lifts of generators of (O/f)^* and (b) coprime
representatives of class-group generators of O.  Relations come from the
cyclic orders in (O/f)^*, the images of the unit group of (S/f)^*, the
images of the global units of O (saturated at every prime dividing the
residue exponent, so the image subgroup is provably complete), and the
class relations of O.  Every relation row carries an element witness
generating the corresponding principal ideal, which turns discrete
logarithms into exactly verified principal generators.
"""

from fractions import Fraction
from math import gcd

from .abgroups import AbelianPresentation, primes_containing, residue_unit_group
from .classgroup import class_group
from .lattices import Order, is_invertible
from .linalg import hnf, vec_mat
from .maximal import factor_integer, maximal_order


def _lcm(a, b):
    return a * b // gcd(a, b)


def conductor(S, O=None):
    """The conductor (S : O), the largest common ideal of S and O."""
    if O is None:
        O = maximal_order(S)
    return S.colon(O)


def _el_pow(el, e):
    if e < 0:
        return el.inv() ** (-e)
    return el ** e


def pow_ideal(I, e, ring):
    """I^e as a fractional ring-ideal; negative e inverts via (ring : I)."""
    if e < 0:
        I = ring.colon(I)
        e = -e
    out = ring
    base = I
    while e:
        if e & 1:
            out = out.mul(base)
        e >>= 1
        if e:
            base = base.mul(base)
    return out


def _solve_rows(H, target):
    """t with t*H = target for H in row Hermite form, or None."""
    t = [0] * len(H)
    v = list(target)
    for i, row in enumerate(H):
        piv = None
        for j, x in enumerate(row):
            if x:
                piv = j
                break
        if piv is None:
            break
        q, r = divmod(v[piv], row[piv])
        if r:
            return None
        t[i] = q
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return t


def _decompose_one(L1, L2):
    """v in L1 with 1 - v in L2; the lattices must be comaximal."""
    d = _lcm(L1.den, L2.den)
    R1 = [[x * (d // L1.den) for x in r] for r in L1.mat]
    R2 = [[x * (d // L2.den) for x in r] for r in L2.mat]
    H, U = hnf(R1 + R2, transform=True)
    n = L1.algebra.n
    target = [0] * n
    target[0] = d
    t = _solve_rows(H, target)
    assert t is not None, "lattices are not comaximal"
    y = vec_mat(t, U)
    vec = [0] * n
    for c, row in zip(y[: len(R1)], R1):
        if c:
            vec = [a + c * b for a, b in zip(vec, row)]
    out = L1.algebra.element([Fraction(x, d) for x in vec])
    assert L2.contains_element(L1.algebra.element(
        [Fraction(int(i == 0)) - c for i, c in enumerate(out.coeffs)]))
    return out


def _reduce_mod(el, lat):
    """Shift el by a lattice element so its coordinates stay small."""
    coeffs = [Fraction(c) for c in el.coeffs]
    d = 1
    for c in coeffs:
        d = _lcm(d, c.denominator)
    vec = [int(c * d) for c in coeffs]
    out = list(coeffs)
    for t, c in enumerate(lat.coords_of(vec, d)):
        fl = c.numerator // c.denominator
        if fl:
            for j, x in enumerate(lat.mat[t]):
                out[j] -= Fraction(fl * x, lat.den)
    return lat.algebra.element(out)


def _residue_inverse(O, modulus, g):
    """h in O with g*h = 1 mod modulus, for g coprime to modulus."""
    v = _decompose_one(O.scale(g), modulus)
    return _reduce_mod(g.inv() * v, modulus)


def _residue_power(g, e, modulus):
    """g^e with every intermediate product reduced mod the lattice."""
    out = None
    base = g
    while e:
        if e & 1:
            out = base if out is None else _reduce_mod(out * base, modulus)
        e >>= 1
        if e:
            base = _reduce_mod(base * base, modulus)
    return g.algebra.one() if out is None else out


def coprime_representative(I, S, modulus):
    """(x, J) with J = x*I integral and J + modulus = S.

    I must be an invertible fractional S-ideal and modulus an integral
    S-ideal; the class of J equals the class of I.
    """
    A = S.algebra
    if S.contains_lattice(I) and I.add(modulus) == S:
        return A.one(), I
    prs = [P for P, _, _ in primes_containing(S, modulus)]
    T = S.colon(I)
    if not prs:
        x = A.element([I.den if i == 0 else 0 for i in range(A.n)])
        J = I.scale(x)
    else:
        terms = []
        for i, P in enumerate(prs):
            PT = P.mul(T)
            t_el = None
            for row in T.mat:
                if not PT.contains_vec(list(row), T.den):
                    t_el = A.element([Fraction(x, T.den) for x in row])
                    break
            assert t_el is not None, "ideal is not locally principal"
            rest = None
            for j, Q in enumerate(prs):
                if j != i:
                    rest = Q if rest is None else rest.intersect(Q)
            s_el = A.one() if rest is None else _decompose_one(rest, P)
            terms.append(s_el * t_el)
        x = terms[0]
        for term in terms[1:]:
            x = x + term
        if not A.norm_vec(list(x.coeffs)):
            # kill zero components without disturbing x mod P*T: perturb by
            # elements of (prod P)*T, which lies in every P*T
            M = prs[0]
            for P in prs[1:]:
                M = M.mul(P)
            M = M.mul(T)
            fixed = None
            for row in M.mat:
                cand = x + A.element([Fraction(c, M.den) for c in row])
                if A.norm_vec(list(cand.coeffs)):
                    fixed = cand
                    break
            assert fixed is not None, "could not reach a unit multiplier"
            x = fixed
        J = I.scale(x)
    assert S.contains_lattice(J), "representative is not integral"
    assert J.add(modulus) == S, "representative is not coprime"
    return x, J


class PicardGroup:
    """Invertible-ideal class group of an order, with exact dlog,
    materialization, and verified principal generators."""

    def __init__(self, S, budget=None):
        assert isinstance(S, Order)
        self.S = S
        self.A = S.algebra
        self.O = maximal_order(S)
        self.conductor = conductor(S, self.O)
        self.class_group = class_group(self.O, budget=budget)
        self.residues = residue_unit_group(self.O, self.conductor)
        ex = self.residues.presentation.exponent()
        for l in sorted({p for p, _ in factor_integer(ex)}) if ex > 1 else ():
            self.class_group.ensure_saturated(l)
        units = [fe.materialize() for fe in self.class_group.unit_gens()]
        k = len(self.residues.presentation.invariants)
        self._res_gens = []
        for t in range(k):
            e = [1 if i == t else 0 for i in range(k)]
            x = self.A.one()
            for c, g in zip(self.residues.presentation.lift(e),
                            self.residues.generators):
                if c < 0:
                    g = _residue_inverse(self.O, self.conductor, g)
                if c:
                    x = _reduce_mod(
                        x * _residue_power(g, abs(c), self.conductor),
                        self.conductor)
            assert self.residues.dlog(x) == tuple(e)
            self._res_gens.append(x)
        diag_len = len(self.class_group.dlog(self.O))
        picO = self.class_group.presentation
        self._cl_orders = []
        self._cl_ideals = []
        self._cl_witnesses = []
        for i in range(diag_len):
            e = [1 if j == i else 0 for j in range(diag_len)]
            n_i = picO.element_order(picO.dlog(e))
            _, C = coprime_representative(
                self.class_group.materialize(e), self.O, self.conductor)
            assert tuple(self.class_group.dlog(C)) == tuple(e)
            w = self.class_group.principal_generator(
                pow_ideal(C, n_i, self.O))
            assert w is not None
            self._cl_orders.append(n_i)
            self._cl_ideals.append(C)
            self._cl_witnesses.append(w)
        self.gens = (
            [self.O.scale(x).intersect(self.S) for x in self._res_gens]
            + [C.intersect(self.S) for C in self._cl_ideals])
        for g in self.gens:
            assert is_invertible(g, self.S), \
                "contraction of a coprime ideal must be invertible"
        rows = []
        wits = []
        zeros = [0] * diag_len
        for t, d in enumerate(self.residues.presentation.invariants):
            rows.append([d if j == t else 0 for j in range(k)] + zeros)
            wits.append(_el_pow(self._res_gens[t], d))
        sub_residues = residue_unit_group(self.S, self.conductor)
        for s in sub_residues.generators:
            y = list(self.residues.dlog(s))
            rows.append(y + zeros)
            wits.append(self._res_power(y))
        for u in units:
            y = list(self.residues.dlog(u))
            rows.append(y + zeros)
            wits.append(self._res_power(y) * u.inv())
        for i in range(diag_len):
            y = list(self.residues.dlog(self._cl_witnesses[i]))
            rows.append([-c for c in y]
                        + [self._cl_orders[i] if j == i else 0
                           for j in range(diag_len)])
            wits.append(self._cl_witnesses[i]
                        * self._res_power([-c for c in y]))
        self._rows = rows
        self._row_witnesses = wits
        self.presentation = AbelianPresentation(k + diag_len, rows)

    def _res_power(self, y):
        out = self.A.one()
        for c, g in zip(y, self._res_gens):
            if c:
                out = out * _el_pow(g, c)
        return out

    # -- group structure ----------------------------------------------------

    def order(self):
        return self.presentation.order()

    @property
    def invariants(self):
        return self.presentation.invariants

    def is_trivial(self):
        return self.presentation.is_trivial()

    # -- class coordinates ---------------------------------------------------

    def _class_data(self, I):
        x, J = coprime_representative(I, self.S, self.conductor)
        JO = J.mul(self.O)
        q = list(self.class_group.dlog(JO))
        P = self.O
        for C, e in zip(self._cl_ideals, q):
            if e:
                P = P.mul(pow_ideal(C, e, self.O))
        gamma = self.class_group.principal_generator(JO.mul(self.O.colon(P)))
        assert gamma is not None
        v = _decompose_one(self.O.scale(gamma.inv()), self.conductor)
        c = list(self.residues.dlog(v * gamma))
        return x, q, gamma, c

    def dlog(self, I):
        """Coordinates of the class of the invertible fractional ideal I."""
        x, q, gamma, c = self._class_data(I)
        return self.presentation.dlog(c + q)

    def materialize(self, y):
        """An ideal in the class with coordinates y (dlog o materialize = id)."""
        out = self.S
        for c, g in zip(self.presentation.lift(list(y)), self.gens):
            if c:
                out = out.mul(pow_ideal(g, c, self.S))
        return out

    def is_principal(self, I):
        return not any(self.dlog(I))

    def principal_generator(self, I):
        """Element g with g*S == I (exactly verified), or None."""
        x, q, gamma, c = self._class_data(I)
        full = c + q
        if any(self.presentation.dlog(full)):
            return None
        g = gamma * self._res_power([-ci for ci in c])
        if self._rows:
            H, U = hnf([list(r) for r in self._rows], transform=True)
            t = _solve_rows(H, full)
            assert t is not None, "trivial class must lie in the row span"
            for zi, w in zip(vec_mat(t, U), self._row_witnesses):
                if zi:
                    g = g * _el_pow(w, zi)
        g = g * x.inv()
        assert self.S.scale(g) == I, "generator failed to verify"
        return g


def picard_group(S, budget=None):
    """Cached Picard group of an order."""
    got = S._cache.get("picard")
    if got is None:
        got = PicardGroup(S, budget=budget)
        S._cache["picard"] = got
    return got


def principal_generator(I, S):
    """Element g with g*S == I exactly, or None if no generator exists;
    I must be an invertible fractional S-ideal."""
    return picard_group(S).principal_generator(I)


def extend_ideal(I, T):
    """The T-ideal I*T: represents the image class under extension to an
    over-order T of the multiplicator ring of I."""
    return I.mul(T)
