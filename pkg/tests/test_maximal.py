"""Integer factorization and maximal-order tests.

Hand-derived values used as oracles:
  - x^2 - 5: maximal order Z[(1+a)/2], discriminants 20 -> 5;
  - x^2 - 8x - 8: maximal order Z[a/2], discriminants 96 -> 24,
    conductor = 2*O;
  - the quintic (x^2+4x+7)(x^3-9x^2-3x-1): component discriminants
    -12 and -2592, resultant 5328 = 2^4*3^2*37, so
    disc(E) = (-12)(-2592)*5328^2 and disc(O) = (-3)(-648) = 1944.
"""

import pytest

from ordclass.algebra import EtaleAlgebra
from ordclass.errors import FactorizationError
from ordclass.lattices import Order, ZLattice, index, is_gorenstein
from ordclass.maximal import (
    conductor, factor_integer, is_prime, maximal_order, p_maximal_order,
    p_radical, singular_primes,
)

A71 = EtaleAlgebra((77, 43, 31, 1))
A72 = EtaleAlgebra((-1000, -1000, -1000, 1))
A73 = EtaleAlgebra((-7, -25, -76, -32, -5, 1))


def test_is_prime_against_trial_division():
    def naive(n):
        if n < 2:
            return False
        d = 2
        while d * d <= n:
            if n % d == 0:
                return False
            d += 1
        return True
    for n in range(0, 2000):
        assert is_prime(n) == naive(n)
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 67 - 1)


def test_factor_integer_known():
    assert factor_integer(1000) == [(2, 3), (5, 3)]
    assert factor_integer(21312) == [(2, 6), (3, 2), (37, 1)]
    assert factor_integer(10007) == [(10007, 1)]
    assert factor_integer(1) == []
    assert factor_integer(-12) == [(2, 2), (3, 1)]
    p, q = 10 ** 6 + 3, 10 ** 6 + 33
    assert factor_integer(p * q) == [(p, 1), (q, 1)]
    n = 2 ** 2 * 3 * (2 ** 31 - 1) ** 2
    assert factor_integer(n) == [(2, 2), (3, 1), (2 ** 31 - 1, 2)]


def test_factor_integer_budget_error():
    big = (2 ** 89 - 1) * (2 ** 107 - 1)  # two large primes
    with pytest.raises(FactorizationError):
        factor_integer(big, budget=10)


def test_quadratic_maximal_orders():
    A5 = EtaleAlgebra((-5, 0, 1))
    R = Order.equation_order(A5)
    O = maximal_order(R)
    assert O == Order(A5, 2, [[2, 0], [1, 1]])
    assert R.discriminant() == 20 and O.discriminant() == 5

    A6 = EtaleAlgebra((-8, -8, 1))
    R6 = Order.equation_order(A6)
    O6 = maximal_order(R6)
    assert O6 == Order(A6, 2, [[2, 0], [0, 1]])
    assert R6.discriminant() == 96 and O6.discriminant() == 24

    Ai = EtaleAlgebra((1, 0, 1))
    Zi = Order.equation_order(Ai)
    assert maximal_order(Zi) == Zi


def test_no_singular_primes_means_already_maximal():
    A = EtaleAlgebra((1, 1, 1))  # disc -3, squarefree
    R = Order.equation_order(A)
    assert singular_primes(R) == []
    assert maximal_order(R) == R


def test_cubic_7_1_maximal_order():
    E = Order.equation_order(A71)
    assert E.discriminant() == -6029312 == -(512 ** 2) * 23
    O2 = p_maximal_order(E, 2)
    printed = ZLattice(A71, 64, [[64, 0, 0], [40, 8, 0], [49, 2, 1]])
    assert O2.key() == printed.key()
    O = maximal_order(E)
    assert index(O, E) == 512
    assert O.discriminant() == -23


def test_cubic_7_2_maximal_order():
    E = Order.equation_order(A72)
    assert sorted(singular_primes(E)) == [2, 5]
    O = maximal_order(E)
    assert index(O, E) == 1000
    assert p_maximal_order(p_maximal_order(E, 2), 5) == O


def test_quintic_7_3_maximal_order():
    E = Order.equation_order(A73)
    assert E.discriminant() == (-12) * (-2592) * 5328 ** 2
    O = maximal_order(E)
    assert index(O, E) == 21312
    assert O.discriminant() == 1944
    assert is_gorenstein(O)


def test_maximal_order_idempotent_and_index_square_law():
    for A in (A71, A72):
        E = Order.equation_order(A)
        O = maximal_order(E)
        assert maximal_order(O) == O
        assert E.discriminant() == index(O, E) ** 2 * O.discriminant()


def test_p_radical_membership():
    for A, p in ((A71, 2), (A72, 5), (EtaleAlgebra((-8, -8, 1)), 2)):
        S = Order.equation_order(A)
        rad = p_radical(S, p)
        pS = S.scale(A.from_rational(p))
        assert S.contains_lattice(rad)
        assert rad.contains_lattice(pS)
        q = p
        while q < A.n:
            q *= p
        for b in rad.basis_elements():
            assert pS.contains_element(b ** q)


def test_conductor_values():
    A6 = EtaleAlgebra((-8, -8, 1))
    R6 = Order.equation_order(A6)
    O6 = maximal_order(R6)
    f = conductor(R6)
    assert f == O6.scale(A6.from_rational(2))
    assert f.mul(O6) == f  # an O-module
    assert conductor(O6) == O6


def test_conductor_is_largest_o_ideal_inside_r():
    E = Order.equation_order(A71)
    O = maximal_order(E)
    f = conductor(E)
    assert E.contains_lattice(f)
    # any O-ideal inside E must sit inside the conductor
    for x in ([3, 1, 0], [1, 1, 1], [5, 0, 2]):
        J = O.scale(A71.element(x))
        if E.contains_lattice(J):
            assert f.contains_lattice(J)
        Jf = J.intersect(f).mul(O)
        assert f.contains_lattice(Jf)
