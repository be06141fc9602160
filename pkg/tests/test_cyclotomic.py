import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strongops.cyclotomic import (
    Cyclotomic,
    ResourceLimitError,
    common_order,
    cyclo_arith,
    cyclo_is_zero,
    cyclotomic_polynomial,
)

# Standard table of cyclotomic polynomials, constant term first.
KNOWN_PHI = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    8: (1, 0, 0, 0, 1),
    10: (1, -1, 1, -1, 1),
    12: (1, 0, -1, 0, 1),
}


@pytest.mark.parametrize("order,coeffs", sorted(KNOWN_PHI.items()))
def test_cyclotomic_polynomial_table(order, coeffs):
    assert tuple(cyclotomic_polynomial(order)) == coeffs


def test_sum_of_all_roots_vanishes():
    for order in range(2, 13):
        total = Cyclotomic.zero(order)
        for e in range(order):
            total = total + Cyclotomic.root(e, order)
        assert total.is_zero()


def test_embedding_into_common_order():
    # w_2 + w_3 written inside Q(w_6): w_6^3 + w_6^2
    lhs = Cyclotomic.root(1, 2) + Cyclotomic.root(1, 3)
    rhs = Cyclotomic.root(3, 6) + Cyclotomic.root(2, 6)
    assert lhs == rhs
    assert abs(complex(lhs) - complex(rhs)) < 1e-12


def test_root_powers_and_conjugate():
    w = Cyclotomic.root(1, 5)
    assert (w * w.conj()) == Cyclotomic.one()
    prod = Cyclotomic.one(5)
    for _ in range(5):
        prod = prod * w
    assert prod == Cyclotomic.one()


def test_dispatch_and_errors():
    a, b = Cyclotomic.root(1, 4), Cyclotomic.root(3, 4)
    assert cyclo_arith(a, b, "add").is_zero()
    assert cyclo_arith(a, b, "mul") == Cyclotomic.one()
    assert cyclo_arith(a, None, "conj") == b
    assert cyclo_is_zero(Cyclotomic.zero(7))
    with pytest.raises(ValueError):
        cyclo_arith(a, b, "div")
    with pytest.raises(ResourceLimitError):
        Cyclotomic.root(1, 10**7)
    assert common_order([4, 6, 10]) == 60


small_orders = st.sampled_from([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12])


@st.composite
def elements(draw, order=None):
    L = order or draw(small_orders)
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=L, max_size=L))
    return Cyclotomic(L, coeffs)


def numeric(x: Cyclotomic) -> complex:
    # Independent evaluation straight from the coefficient vector.
    return sum(c * cmath.exp(2j * cmath.pi * k / x.order) for k, c in enumerate(x.coeffs))


@settings(max_examples=200, deadline=None)
@given(elements(), elements())
def test_ring_operations_match_complex_numbers(a, b):
    assert abs(numeric(a + b) - (numeric(a) + numeric(b))) < 1e-9
    assert abs(numeric(a * b) - numeric(a) * numeric(b)) < 1e-9
    assert abs(numeric(a.conj()) - numeric(a).conjugate()) < 1e-9


@settings(max_examples=300, deadline=None)
@given(elements())
def test_exact_zero_agrees_with_numeric_value(x):
    # Nonzero cyclotomic integers of this height stay far from 0 numerically.
    assert x.is_zero() == (abs(numeric(x)) < 1e-7)


@settings(max_examples=100, deadline=None)
@given(elements(), elements(), elements())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a.conj().conj() == a
    assert (a - a).is_zero()
    assert hash(a.embed(a.order * 2)) == hash(a)


def test_hash_agrees_across_orders():
    x = -Cyclotomic.one(3) - Cyclotomic.root(1, 3)
    y = -Cyclotomic.root(1, 6)
    assert x == y
    assert hash(x) == hash(y)
    assert len({x, y, Cyclotomic.root(2, 3)}) == 1
