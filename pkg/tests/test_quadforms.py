from math import gcd

import pytest
from hypothesis import given, strategies as st
from sympy.functions.combinatorial.numbers import kronecker_symbol

from fuchsian_rn.arith import DomainError, primes_upto
from fuchsian_rn.quadforms import (QuadForm, class_number, enumerate_reduced, is_properly_equivalent,
                                   reduce)


def dirichlet_class_number(D: int) -> int:
    """h(D) = -(1/|D|) sum_{a=1}^{|D|} (D/a) a for fundamental D < -4."""
    total = sum(kronecker_symbol(D, a) * a for a in range(1, -D + 1))
    return -total // -D


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        m = -D
        return all(m % (q * q) for q in range(2, int(m ** 0.5) + 1))
    if D % 4 == 0:
        m = -D // 4
        if m % 4 not in (1, 2):
            return False
        return all(m % (q * q) for q in range(2, int(m ** 0.5) + 1))
    return False


@pytest.mark.parametrize("D", [D for D in range(-7, -800, -1) if is_fundamental(D)])
def test_class_number_matches_class_number_formula(D):
    assert class_number(D) == dirichlet_class_number(D)


def test_frozen_class_numbers():
    # h(-4p), h(-p) for the small primes used by the genus table
    assert [class_number(-4 * p) for p in (5, 7, 11, 13, 17, 19)] == [2, 1, 3, 2, 4, 3]
    assert [class_number(-p) for p in (7, 11, 19, 23)] == [1, 1, 1, 3]
    assert class_number(-68) == 4
    assert class_number(-4) == 1 and class_number(-3) == 1
    assert class_number(-163) == 1


def test_imprimitive_forms_counted_separately():
    # discriminant -28 = 4 * (-7): (1,0,7) primitive, (2,2,4) imprimitive
    forms = enumerate_reduced(-28)
    assert {f.reduced.as_tuple() for f in forms} == {(1, 0, 7), (2, 2, 4)}
    assert class_number(-28) == 1


sl2 = st.tuples(*[st.integers(-6, 6)] * 3).filter(lambda t: t[0] != 0 or t[1] != 0)


def random_unimodular(a, b, c):
    """A determinant-one matrix with first column (a, b)/gcd, sheared by c."""
    g = gcd(a, b)
    a, b = a // g, b // g
    # extended Euclid: a u + b v = 1
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    u, v = old_s * old_r, old_t * old_r
    return ((a, -v + c * a), (b, u + c * b))


@given(st.integers(1, 30), st.integers(-30, 30), st.integers(1, 30), sl2)
def test_reduction_is_class_invariant(a, b, c, m):
    f = QuadForm(a, b, c)
    if f.disc >= 0:
        return
    M = random_unimodular(*m)
    (r, s), (t, u) = M
    assert r * u - s * t == 1
    g = f.act(M)
    cls, inv = reduce(f)
    assert cls.reduced.is_reduced()
    assert cls.reduced.act(inv) == f
    assert reduce(g)[0].reduced == cls.reduced
    assert is_properly_equivalent(f, g)


def test_every_reduced_form_is_fixed_by_reduction():
    for D in (-20, -56, -84, -4 * 47, -143):
        for fc in enumerate_reduced(D):
            assert reduce(fc.reduced)[0].reduced == fc.reduced
            assert fc.reduced.disc == D


def test_errors():
    with pytest.raises(DomainError):
        enumerate_reduced(5)
    with pytest.raises(DomainError):
        enumerate_reduced(-6)
    with pytest.raises(DomainError):
        reduce(QuadForm(-1, 0, -1))


def test_class_numbers_for_all_primes_to_200_are_odd_for_minus_p():
    # h(-p) is odd for p = 3 mod 4 (genus theory)
    for p in primes_upto(200):
        if p % 4 == 3 and p > 3:
            assert class_number(-p) % 2 == 1
