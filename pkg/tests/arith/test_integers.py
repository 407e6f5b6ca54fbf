from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.arith.integers import (
    factor_integer,
    is_probable_prime,
    is_square_rational,
    legendre,
    primes_up_to,
    rational_valuation,
    squarefree_part,
    valuation,
)
from app.arith.poly import IntPoly, poly_discriminant
from app.models.curve import GENUS5_COEFFICIENTS

GENUS5_DISC_PRIMES = [(2, 6), (5, 2), (29, 1), (151, 1), (54918937, 1), (571571633, 1), (8389309314807991, 1)]


def test_primes_up_to_small():
    assert primes_up_to(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert primes_up_to(1) == ()


@pytest.mark.parametrize("n", [2, 3, 97, 7919, 2**61 - 1, 8389309314807991])
def test_known_primes(n):
    assert is_probable_prime(n)


@pytest.mark.parametrize("n", [1, 4, 561, 7917, 2**61 + 1, 3215031751])
def test_known_composites(n):
    assert not is_probable_prime(n)


@given(st.integers(min_value=-10**12, max_value=10**12).filter(lambda n: n != 0))
def test_factorization_reproduces_input(n):
    fac = factor_integer(n)
    assert fac.is_complete
    assert fac.value == n
    assert all(is_probable_prime(p) for p in fac.primes())


def test_factor_zero_rejected():
    with pytest.raises(ValueError):
        factor_integer(0)


def test_rho_splits_product_of_large_primes():
    p, q = 1000003, 998244353
    fac = factor_integer(p * q * 4, trial_bound=1000)
    assert fac.is_complete
    assert dict(fac.factors) == {2: 2, p: 1, q: 1}


def test_exhausted_budget_keeps_cofactor():
    p, q = 2**61 - 1, 2**31 - 1
    fac = factor_integer(p * q, trial_bound=100, rho_budget=10)
    assert not fac.is_complete
    assert fac.value == p * q


def test_genus5_discriminant_factorization():
    disc = poly_discriminant(IntPoly.from_leading_first(GENUS5_COEFFICIENTS))
    fac = factor_integer(disc)
    assert fac.is_complete
    assert list(fac.factors) == GENUS5_DISC_PRIMES


@given(st.integers(min_value=1, max_value=10**6), st.sampled_from([2, 3, 5, 7]))
def test_valuation_divides_exactly(n, p):
    v = valuation(n, p)
    assert n % p ** v == 0
    assert (n // p ** v) % p != 0


def test_rational_valuation():
    assert rational_valuation(Fraction(50, 3), 5) == 2
    assert rational_valuation(Fraction(7, 125), 5) == -3


@given(st.integers(min_value=1, max_value=10**5), st.integers(min_value=1, max_value=300))
def test_squarefree_part_changes_by_a_square(n, k):
    assert squarefree_part(n * k * k) == squarefree_part(n)
    assert squarefree_part(-n) == -squarefree_part(n)


def test_square_rationals():
    assert is_square_rational(Fraction(49, 4))
    assert is_square_rational(Fraction(0))
    assert not is_square_rational(Fraction(-1))
    assert not is_square_rational(Fraction(2, 9))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_legendre_counts_half_the_units(p):
    values = [legendre(a, p) for a in range(1, p)]
    assert values.count(1) == values.count(-1) == (p - 1) // 2
    assert legendre(p, p) == 0
