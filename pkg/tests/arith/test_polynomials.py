from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from app.arith.fp_poly import fp_factor, fp_is_irreducible, fp_mul, fp_trim
from app.arith.poly import IntPoly, pderiv, pgcd, poly_discriminant, resultant
from app.arith.realroots import count_roots, isolate_real_roots, sign_at_root
from app.arith.zfactor import factor_poly_over_Z, is_irreducible_over_Z
from app.models.curve import genus50_coefficients
from tests.oracles import real_root_count, sylvester_discriminant

small_polys = st.lists(st.integers(min_value=-9, max_value=9), min_size=2, max_size=5).filter(lambda c: c[-1] != 0)


def test_discriminant_of_binomial():
    # disc(x^6 + 1) = -6^6
    assert poly_discriminant(IntPoly.from_leading_first([1, 0, 0, 0, 0, 0, 1])) == -46656


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_quadratic_discriminant(b, c):
    assert poly_discriminant(IntPoly((c, b, 1))) == b * b - 4 * c


def test_resultant_of_linear_factors():
    # Res(x - 2, x^2 + 1) = 2^2 + 1
    assert resultant([-2, 1], [1, 0, 1]) == Fraction(5)


def test_homogeneous_value_matches_evaluation():
    f = IntPoly((3, -1, 0, 2))
    assert f.homogeneous_value(2, 3, 4) == 3 ** 4 * f(Fraction(2, 3))


@given(small_polys, small_polys)
def test_factorization_over_z_expands_back(a, b):
    f = IntPoly(tuple(a)) * IntPoly(tuple(b))
    fac = factor_poly_over_Z(f)
    assert fac.expand() == f
    assert not fac.is_irreducible


def test_irreducibility():
    assert is_irreducible_over_Z(IntPoly.from_leading_first([1, 0, 0, 0, 1]))
    assert not is_irreducible_over_Z(IntPoly.from_leading_first([1, 0, 0, 0, -4]))
    assert not is_irreducible_over_Z(IntPoly.from_leading_first([1, 0, 0, 0, 0, 0, 1]))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_fp_factor_multiplies_back(p):
    f = fp_trim([1, 3, 0, 2, 5, 1, 4, 1], p)
    product = [1]
    for g, m in fp_factor(f, p):
        assert fp_is_irreducible(g, p)
        for _ in range(m):
            product = fp_mul(product, g, p)
    inv = pow(f[-1], -1, p)
    assert product == fp_trim([c * inv for c in f], p)


def test_real_roots_of_separable_quartic():
    f = IntPoly.from_leading_first([1, 0, -5, 0, 6])  # (x^2 - 2)(x^2 - 3)
    roots = isolate_real_roots(f)
    assert len(roots) == 4
    approx = sorted(r.approx() for r in roots)
    assert approx == pytest.approx([-3 ** 0.5, -2 ** 0.5, 2 ** 0.5, 3 ** 0.5])
    assert count_roots(f, 0, 10) == 2


def test_no_real_roots():
    assert isolate_real_roots(IntPoly.from_leading_first([1, 0, 0, 0, 0, 0, 1])) == []


def test_sign_of_polynomial_at_root():
    f = IntPoly.from_leading_first([1, 0, -2])
    pos = isolate_real_roots(f)[1]
    assert sign_at_root([-1, 1], pos) == 1  # sqrt(2) - 1 > 0
    assert sign_at_root([-2, 1], pos) == -1
    with pytest.raises(ValueError):
        sign_at_root([-2, 0, 1], pos)


def test_genus50_polynomial_has_two_real_roots():
    f = IntPoly.from_leading_first(genus50_coefficients(1))
    assert count_roots(f) == 2
    assert len(isolate_real_roots(f)) == 2


nonconstant = st.lists(st.integers(min_value=-9, max_value=9), min_size=2, max_size=8).filter(lambda c: c[-1] != 0)
# g·h² has a repeated factor, so both sides of the criterion get examples
with_square_factor = st.builds(
    lambda g, h: (IntPoly(tuple(g)) * IntPoly(tuple(h)) * IntPoly(tuple(h))).coeffs,
    small_polys,
    st.lists(st.integers(min_value=-5, max_value=5), min_size=2, max_size=3).filter(lambda c: c[-1] != 0),
)


@settings(max_examples=500)
@given(st.one_of(nonconstant, with_square_factor))
def test_discriminant_vanishes_exactly_on_repeated_factors(coeffs):
    f = IntPoly(tuple(coeffs))
    d = poly_discriminant(f)
    assert d == sylvester_discriminant(list(f.coeffs))
    common = pgcd(list(f.coeffs), pderiv(list(f.coeffs)))
    assert (d != 0) == (len(common) == 1)


squarefree = nonconstant.filter(lambda c: poly_discriminant(IntPoly(tuple(c))) != 0)


@settings(max_examples=200)
@given(squarefree)
def test_sturm_count_matches_hermite_signature(coeffs):
    f = IntPoly(tuple(coeffs))
    assert count_roots(f) == real_root_count(list(f.coeffs))


@settings(max_examples=200)
@given(squarefree)
def test_isolating_intervals_bracket_one_root_each(coeffs):
    f = IntPoly(tuple(coeffs))
    intervals = isolate_real_roots(f)
    assert len(intervals) == real_root_count(list(f.coeffs))
    for iv in intervals:
        assert count_roots(f, iv.lo, iv.hi) == 1
    for left, right in zip(intervals, intervals[1:]):
        assert left.hi <= right.lo
