"""Finite-structure tests: presentations, subgroup enumeration, maximal
ideals above a prime, and unit groups of quotient rings.

The unit-group oracle is brute force: list the residues, find the units by
searching for inverses, and compare the multiset of element orders (which
determines a finite abelian group up to isomorphism) against the computed
cyclic decomposition.  Discrete logs are checked by multiplying the claimed
generator powers back together.
"""

import itertools
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from ordclass.abgroups import (
    AbelianPresentation, LatticeQuotient, all_subgroups,
    module_span_from_subgroup, primes_above, primes_containing,
    residue_unit_group, subgroup_lattice, unit_group_quotient,
    unit_image_quotient,
)
from ordclass.algebra import EtaleAlgebra
from ordclass.lattices import Order, ZLattice, ideal_mul, span
from ordclass.maximal import maximal_order, mul_coords, p_radical

A_Z = EtaleAlgebra((0, 1))                 # K = Q
A_GAUSS = EtaleAlgebra((1, 0, 1))          # x^2 + 1
A_SQRT6 = EtaleAlgebra((-8, -8, 1))        # x^2 - 8x - 8
A_SPLIT = EtaleAlgebra((0, -1, 0, 1))      # x^3 - x


def eq_order(A):
    return Order.equation_order(A)


def principal(S, coeffs):
    return span([S.algebra.element(list(coeffs))], S)


# ---------------------------------------------------------------------------
# presentations


def test_presentation_invariants_sorted_and_normalized():
    assert AbelianPresentation(2, [[2, 0], [0, 4]]).invariants == (2, 4)
    assert AbelianPresentation(2, [[4, 0], [0, 2]]).invariants == (2, 4)
    assert AbelianPresentation(2, [[2, 2], [0, 4]]).invariants == (2, 4)
    assert AbelianPresentation(1, [[12]]).invariants == (12,)
    assert AbelianPresentation(2, [[1, 0], [0, 1]]).invariants == ()
    assert AbelianPresentation(0, []).invariants == ()


def test_presentation_rejects_infinite():
    with pytest.raises(AssertionError):
        AbelianPresentation(2, [[2, 0]])


def test_presentation_quotients():
    G = AbelianPresentation(2, [[2, 0], [0, 4]])
    assert G.quotient([]).invariants == (2, 4)
    assert G.quotient([(0, 1)]).invariants == (2,)
    assert G.quotient([(1, 1)]).invariants == (2,)
    assert G.quotient([(1, 0), (0, 1)]).invariants == ()


def test_element_orders():
    G = AbelianPresentation(2, [[2, 0], [0, 4]])
    assert G.element_order((0, 0)) == 1
    assert G.element_order((1, 2)) == 2
    assert G.element_order((0, 3)) == 4
    assert G.element_order((1, 1)) == 4


rel_matrix = st.lists(
    st.lists(st.integers(min_value=-6, max_value=6), min_size=2, max_size=2),
    min_size=2, max_size=2,
).filter(lambda M: M[0][0] * M[1][1] - M[0][1] * M[1][0] != 0)


@settings(max_examples=60, deadline=None)
@given(rel_matrix, st.lists(st.integers(min_value=-9, max_value=9),
                            min_size=4, max_size=4))
def test_presentation_dlog_lift_additive(M, xs):
    G = AbelianPresentation(2, M)
    det = abs(M[0][0] * M[1][1] - M[0][1] * M[1][0])
    assert G.order() == det
    x1, x2 = xs[:2], xs[2:]
    y1, y2 = G.dlog(x1), G.dlog(x2)
    assert G.dlog(G.lift(y1)) == y1
    s = G.dlog([a + b for a, b in zip(x1, x2)])
    assert s == tuple((a + b) % d for a, b, d in zip(y1, y2, G.invariants))


# ---------------------------------------------------------------------------
# lattice quotients


def test_lattice_quotient_shapes():
    S = eq_order(A_GAUSS)
    assert LatticeQuotient(S, principal(S, (2, 1))).invariants == (5,)
    assert LatticeQuotient(S, principal(S, (2, 0))).invariants == (2, 2)
    assert LatticeQuotient(S, principal(S, (5, 0))).invariants == (5, 5)
    R6 = eq_order(A_SQRT6)
    P5 = span([A_SQRT6.element((5, 0)), A_SQRT6.element((-1, 1))], R6)
    assert LatticeQuotient(R6, P5).invariants == (5,)


def test_lattice_quotient_requires_containment():
    S = eq_order(A_GAUSS)
    with pytest.raises(ValueError):
        LatticeQuotient(principal(S, (2, 0)), S)


def test_lattice_quotient_order_is_index():
    for S, coeffs in [
        (eq_order(A_GAUSS), (3, 1)),
        (eq_order(A_SQRT6), (2, 1)),
        (eq_order(A_SPLIT), (2, 1, 1)),
    ]:
        I = principal(S, coeffs)
        lq = LatticeQuotient(S, I)
        assert lq.order() == I.index_in(S)


def test_lattice_quotient_dlog_lift_roundtrip():
    S = eq_order(A_GAUSS)
    lq = LatticeQuotient(S, principal(S, (2, 1)))
    for y in lq.group.iter_dlogs():
        lifted = lq.lift_element(y)
        assert lq.dlog_element(lifted) == y


# ---------------------------------------------------------------------------
# subgroup enumeration


def _closure(gens, invariants):
    zero = (0,) * len(invariants)
    seen = {zero}
    frontier = [zero]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = tuple((a + b) % d for a, b, d in zip(cur, g, invariants))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def _brute_subgroups(invariants, rank):
    elems = list(itertools.product(*[range(d) for d in invariants]))
    out = set()
    for gens in itertools.product(elems, repeat=rank):
        out.add(_closure(gens, invariants))
    return out


@pytest.mark.parametrize("invariants,count", [
    ((2, 4), 8),
    ((2, 2, 2), 16),
    ((12,), 6),
    ((3, 9), None),
    ((6, 6), None),
    ((), 1),
])
def test_all_subgroups_match_brute_force(invariants, count):
    rels = [[invariants[j] if i == j else 0 for i in range(len(invariants))]
            for j in range(len(invariants))]
    G = AbelianPresentation(len(invariants), rels)
    assert G.invariants == invariants
    handles = list(all_subgroups(G))
    keys = {h.key for h in handles}
    assert len(keys) == len(handles)
    sets = {}
    for h in handles:
        cl = _closure(h.gens, invariants)
        assert len(cl) == h.order
        sets[h.key] = cl
    brute = _brute_subgroups(invariants, min(len(invariants), 3))
    assert set(sets.values()) == brute
    assert len(handles) == len(brute)
    if count is not None:
        assert len(handles) == count


def test_subgroup_lattices_of_gaussian_mod_5():
    S = eq_order(A_GAUSS)
    bottom = principal(S, (5, 0))
    lq = LatticeQuotient(S, bottom)
    handles = list(all_subgroups(lq.group))
    assert len(handles) == 8          # trivial + six lines + full plane
    lats = set()
    for h in handles:
        L = subgroup_lattice(h, lq)
        assert S.contains_lattice(L) and L.contains_lattice(bottom)
        assert L.index_in(S) * h.order == 25
        lats.add(L.key())
    assert len(lats) == 8
    # S-module spans collapse the six lines onto the two prime ideals
    spans = {module_span_from_subgroup(h, lq, S).key() for h in handles}
    assert len(spans) == 4


def test_subgroups_between_order_and_maximal_order():
    R = eq_order(A_SQRT6)
    O = maximal_order(R)
    lq = LatticeQuotient(O, R)
    assert lq.invariants == (2,)
    lats = sorted(subgroup_lattice(h, lq).key() for h in all_subgroups(lq.group))
    assert lats == sorted([R.key(), O.key()])


# ---------------------------------------------------------------------------
# maximal ideals above a prime


def test_primes_above_gaussian():
    S = eq_order(A_GAUSS)
    two = primes_above(S, 2)
    assert [(P.key(), f) for P, f in two] == [(principal(S, (1, 1)).key(), 1)]
    three = primes_above(S, 3)
    assert [(P.key(), f) for P, f in three] == [(principal(S, (3, 0)).key(), 2)]
    five = primes_above(S, 5)
    assert sorted(P.key() for P, _ in five) == sorted(
        [principal(S, (2, 1)).key(), principal(S, (2, -1)).key()])
    assert [f for _, f in five] == [1, 1]


def test_primes_above_totally_split_cubic():
    O = maximal_order(eq_order(A_SPLIT))
    for p in (2, 3):
        prs = primes_above(O, p)
        assert len(prs) == 3
        assert all(f == 1 for _, f in prs)
        assert len({P.key() for P, _ in prs}) == 3
    E = eq_order(A_SPLIT)
    prs = primes_above(E, 2)
    assert len(prs) == 2
    assert all(f == 1 for _, f in prs)


def test_primes_above_properties():
    cases = [
        (eq_order(A_GAUSS), (2, 3, 5, 13)),
        (eq_order(A_SQRT6), (2, 3, 5)),
        (eq_order(A_SPLIT), (2, 3, 5)),
        (maximal_order(eq_order(A_SPLIT)), (2, 3, 7)),
    ]
    for S, ps in cases:
        for p in ps:
            prs = primes_above(S, p)
            inter = None
            for P, f in prs:
                idx = P.index_in(S)
                assert idx == p ** f
                assert ideal_mul(P, S) == P
                assert P.contains_element(S.algebra.from_rational(p))
                inter = P if inter is None else inter.intersect(P)
            assert inter == p_radical(S, p)


def test_primes_containing():
    S = eq_order(A_GAUSS)
    prs = primes_containing(S, principal(S, (10, 0)))
    assert len(prs) == 3
    assert sorted(p for _, p, _ in prs) == [2, 5, 5]


# ---------------------------------------------------------------------------
# unit groups of quotient rings: brute-force oracle


def _brute_unit_orders(S, f):
    """Multiset of element orders in (S/f)^*, plus the unit count."""
    lq = LatticeQuotient(S, f)
    G = lq.group
    table = S.structure_constants()

    def key(coords):
        return G.dlog(list(coords))

    def mul(a, b):
        return key(mul_coords(table, G.lift(a), G.lift(b)))

    one = key(S.one_coords())
    elems = list(G.iter_dlogs())
    units = [a for a in elems if any(mul(a, b) == one for b in elems)]
    orders = []
    for u in units:
        k, cur = 1, u
        while cur != one:
            cur = mul(cur, u)
            k += 1
        orders.append(k)
    return sorted(orders), len(units)


def _orders_from_invariants(invariants):
    out = []
    for y in itertools.product(*[range(d) for d in invariants]):
        o = 1
        for d, c in zip(invariants, y):
            t = d // gcd(d, c)
            o = o * t // gcd(o, t)
        out.append(o)
    return sorted(out)


def _check_against_brute(S, f):
    U = residue_unit_group(S, f)
    brute_orders, unit_count = _brute_unit_orders(S, f)
    assert U.order() == unit_count
    assert _orders_from_invariants(U.invariants) == brute_orders
    # every unit must be the product of the claimed generator powers
    lq = LatticeQuotient(S, f)
    G = lq.group
    table = S.structure_constants()
    gen_coords = []
    for g in U.generators:
        coords = S.coords_of(*_element_pair(g))
        gen_coords.append([int(c) for c in coords])
    count = 0
    for y in G.iter_dlogs():
        el = lq.lift_element(y)
        if not U.is_unit(el):
            continue
        count += 1
        exps = U.raw_dlog(el)
        acc = list(S.one_coords())
        for g, e in zip(gen_coords, exps):
            for _ in range(e):
                acc = G.lift(G.dlog(mul_coords(table, acc, g)))
        assert G.dlog(acc) == G.dlog([int(c) for c in S.coords_of(*_element_pair(el))])
    assert count == unit_count
    return U


def _element_pair(el):
    den = 1
    coeffs = [Fraction(c) for c in el.coeffs]
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den) for c in coeffs], den


def test_rational_residue_units():
    S = eq_order(A_Z)
    expected = {
        5: (4,),
        8: (2, 2),
        15: (2, 4),
        16: (2, 4),
        100: (2, 20),
    }
    for m, inv in expected.items():
        U = _check_against_brute(S, ZLattice(A_Z, 1, [[m]]))
        assert U.invariants == inv


def test_gaussian_residue_units():
    S = eq_order(A_GAUSS)
    assert _check_against_brute(S, principal(S, (2, 1))).invariants == (4,)
    assert _check_against_brute(S, principal(S, (3, 0))).invariants == (8,)
    assert _check_against_brute(S, principal(S, (2, 0))).invariants == (2,)
    assert _check_against_brute(S, principal(S, (5, 0))).invariants == (4, 4)
    assert _check_against_brute(S, principal(S, (1, 1))).invariants == ()
    four = _check_against_brute(S, principal(S, (4, 0)))
    assert four.order() == 8


def test_quadratic_and_split_residue_units():
    R6 = eq_order(A_SQRT6)
    P5 = span([A_SQRT6.element((5, 0)), A_SQRT6.element((-1, 1))], R6)
    assert _check_against_brute(R6, P5).invariants == (4,)
    _check_against_brute(R6, principal(R6, (2, 0)))
    _check_against_brute(R6, principal(R6, (3, 0)))
    E = eq_order(A_SPLIT)
    _check_against_brute(E, principal(E, (2, 1, 1)))
    O = maximal_order(E)
    _check_against_brute(O, ideal_mul(principal(O, (2, 0, 0)), O))


def test_unit_group_modulus_must_be_ideal():
    S = eq_order(A_GAUSS)
    with pytest.raises(AssertionError):
        residue_unit_group(S, ZLattice(A_GAUSS, 1, [[2, 0], [0, 1]]))


def test_trivial_modulus():
    S = eq_order(A_GAUSS)
    U = residue_unit_group(S, ideal_mul(S, S))
    assert U.invariants == ()
    assert U.dlog(A_GAUSS.element((1, 0))) == ()


def test_dlog_rejects_nonunit():
    S = eq_order(A_GAUSS)
    U = residue_unit_group(S, principal(S, (2, 1)))
    assert not U.is_unit(A_GAUSS.element((2, 1)))
    with pytest.raises(AssertionError):
        U.dlog(A_GAUSS.element((2, 1)))


def test_unit_image_quotient_gaussian():
    S = eq_order(A_GAUSS)
    U = residue_unit_group(S, principal(S, (5, 0)))
    Q = unit_image_quotient(U, [A_GAUSS.element((0, 1))])
    assert Q.order() == 4


def test_unit_quotient_conductor_square_root_six():
    R = eq_order(A_SQRT6)
    O = maximal_order(R)
    f = ideal_mul(principal(O, (2, 0)), O)
    GO, Q = unit_group_quotient(O, R, f)
    assert GO.invariants == (2,)
    assert Q.invariants == (2,)
    # the fundamental unit 5 + 2*sqrt(6) = 1 + a lands on the identity
    u = A_SQRT6.element((1, 1))
    assert GO.dlog(u) == (0,)


def test_unit_quotient_gaussian_suborder():
    A = A_GAUSS
    O = eq_order(A)
    R = Order(A, 1, [[1, 0], [0, 2]])      # Z[2i]
    f = ideal_mul(principal(O, (2, 0)), O)
    GO, Q = unit_group_quotient(O, R, f)
    assert Q.invariants == (2,)
    # i generates the quotient: the class group of Z[2i] is trivial
    y = GO.dlog(A.element((0, 1)))
    assert Q.element_order(Q.dlog(y)) == 2
