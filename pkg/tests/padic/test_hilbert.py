from fractions import Fraction
from functools import lru_cache
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from app.arith.gf2 import F2Matrix, f2_rank
from app.arith.integers import factor_integer
from app.arith.poly import IntPoly
from app.etale.curve import Curve
from app.etale.element import EtaleElement, elt_norm
from app.etale.places import INFINITY, embed, local_algebra
from app.padic.algebra import qp_factor
from app.padic.field import qp_field
from app.padic.hilbert import field_hilbert, hilbert_symbol, hilbert_symbol_qp, pairing_value
from app.padic.squares import FieldSquareClasses, build_square_class_space
from tests.oracles import hilbert_oracle

PRIMES = [2, 3, 5, 7, 13]


def local_rationals(p: int):
    """±u·p^k with u a p-adic unit below 200 and k in [-2, 2]."""
    units = st.integers(min_value=1, max_value=200).filter(lambda u: u % p != 0)
    return st.builds(
        lambda s, u, k: s * Fraction(u) * Fraction(p) ** k,
        st.sampled_from([1, -1]),
        units,
        st.integers(min_value=-2, max_value=2),
    )


def _pairs(p: int):
    return st.tuples(local_rationals(p), local_rationals(p))


@pytest.mark.parametrize("p", PRIMES)
def test_closed_form_matches_conic_oracle(p):
    @settings(max_examples=40)
    @given(_pairs(p))
    def check(pair):
        a, b = pair
        assert hilbert_symbol_qp(a, b, p) == hilbert_oracle(a, b, p)

    check()


@pytest.mark.parametrize("p", PRIMES)
def test_field_form_matches_closed_form(p):
    fld = qp_field(p, 30)

    @settings(max_examples=40)
    @given(_pairs(p))
    def check(pair):
        a, b = pair
        assert hilbert_symbol(fld.from_rational(a), fld.from_rational(b)) == hilbert_symbol_qp(a, b, p)

    check()


@pytest.mark.slow
@pytest.mark.parametrize("p", PRIMES)
def test_conic_oracle_agreement_full(p):
    @settings(max_examples=200)
    @given(_pairs(p))
    def check(pair):
        a, b = pair
        assert hilbert_symbol(qp_field(p, 30).from_rational(a), b) == hilbert_oracle(a, b, p)

    check()


def _nonzero_rationals():
    part = st.integers(min_value=1, max_value=10**4)
    return st.builds(lambda s, n, d: s * Fraction(n, d), st.sampled_from([1, -1]), part, part)


@settings(max_examples=150)
@given(_nonzero_rationals(), _nonzero_rationals())
def test_product_formula(a, b):
    primes = {2}
    for n in (a.numerator, a.denominator, b.numerator, b.denominator):
        if abs(n) > 1:
            primes.update(factor_integer(n).primes())
    total = hilbert_symbol_qp(a, b, 0) + sum(hilbert_symbol_qp(a, b, p) for p in primes)
    assert total.denominator == 1


@pytest.mark.parametrize(
    "a, b, p, expected",
    [
        (-1, -1, 0, Fraction(1, 2)),
        (-1, -1, 2, Fraction(1, 2)),
        (-1, -1, 3, 0),
        (2, 3, 3, Fraction(1, 2)),
        (5, 5, 5, 0),
        (3, 5, 5, Fraction(1, 2)),
        (2, 5, 2, Fraction(1, 2)),
    ],
)
def test_known_symbols(a, b, p, expected):
    assert hilbert_symbol_qp(a, b, p) == expected


def test_symbol_of_zero_rejected():
    with pytest.raises(ValueError):
        hilbert_symbol_qp(0, 3, 3)


TWO_ADIC_EXTENSIONS = [
    [-2, 0, 0, 0, 1],              # quartic, totally ramified
    [1, 1, 0, 0, 1],               # quartic, unramified
    [4, 0, 2, 0, 1],               # quartic, e = 2 and f = 2
    [-2, 0, 0, 0, 0, 0, 0, 0, 1],  # octic, totally ramified
]


@lru_cache(maxsize=None)
def _two_adic(coeffs):
    algebra = qp_factor(IntPoly(coeffs), 2)
    assert len(algebra.components) == 1
    return field_hilbert(FieldSquareClasses(algebra.components[0].field))


def _element(form, seed: int):
    rng = Random(seed)
    fld = form.field
    while True:
        x = fld.from_integral(fld.random_integral(rng))
        if not x.is_zero:
            return x * fld.pi ** rng.randrange(0, 3)


@pytest.mark.parametrize("coeffs", TWO_ADIC_EXTENSIONS)
def test_two_adic_gram_is_symmetric_and_nondegenerate(coeffs):
    form = _two_adic(tuple(coeffs))
    dim = form.classes.dim
    assert dim == len(coeffs) + 1
    for i in range(dim):
        for j in range(dim):
            assert (form.gram[i] >> j) & 1 == (form.gram[j] >> i) & 1
    assert f2_rank(F2Matrix(tuple(form.gram), dim)) == dim
    # the unramified class pairs only with the valuation
    assert form.gram[-1] == 1


@pytest.mark.parametrize("coeffs", TWO_ADIC_EXTENSIONS)
def test_two_adic_symbol_is_bilinear(coeffs):
    form = _two_adic(tuple(coeffs))
    classes = form.classes

    @settings(max_examples=15)
    @given(st.integers(min_value=0, max_value=10**6))
    def check(seed):
        a = _element(form, seed)
        row = 0
        for j, gram_row in enumerate(form.gram):
            if (classes.dlog(a) >> j) & 1:
                row ^= gram_row
        assert form.norm_functional(a) == row

    check()


@pytest.mark.parametrize("coeffs", TWO_ADIC_EXTENSIONS)
def test_two_adic_symbol_matches_norm_to_q2(coeffs):
    form = _two_adic(tuple(coeffs))
    fld = form.field

    @settings(max_examples=15)
    @given(st.integers(min_value=0, max_value=10**6), local_rationals(2))
    def check(seed, r):
        b = _element(form, seed)
        # (r, b)_K = (r, N_{K/Q2}(b))_2 for r in Q2
        assert hilbert_symbol(fld.from_rational(r), b) == hilbert_symbol_qp(r, fld.norm(b), 2)

    check()


@pytest.mark.parametrize("coeffs", TWO_ADIC_EXTENSIONS)
def test_two_adic_steinberg_relations(coeffs):
    form = _two_adic(tuple(coeffs))
    fld = form.field

    @settings(max_examples=15)
    @given(st.integers(min_value=0, max_value=10**6))
    def check(seed):
        a = _element(form, seed)
        assert hilbert_symbol(a, -a) == 0
        one_minus = fld.one - a
        if not one_minus.is_zero:
            assert hilbert_symbol(a, one_minus) == 0

    check()


def test_norm_generators_of_unramified_class():
    form = _two_adic((1, 1, 0, 0, 1))
    g_star = form.classes.basis[-1]
    assert form.norm_generators(g_star) is None
    assert form.norm_functional(form.field.one) == 0


@pytest.mark.parametrize(
    "leading_first, m_coeffs",
    [
        ([1, 0, 0, 0, 0, 0, 0, 0, -2], [3, 1]),   # N(θ) = -2, N(θ + 3) = 7·937
        ([1, 0, 0, 0, 0, 0, 1], [2, 1]),          # N(θ) = 1, N(θ + 2) = 5·13
        ([1, 0, 0, 0, -2, 0, 2], [1, 0, 1]),
    ],
)
def test_symbols_of_global_elements_sum_to_zero(leading_first, m_coeffs):
    curve = Curve.from_coefficients(leading_first)
    ell = EtaleElement.theta(curve)
    m = EtaleElement.from_coeffs(curve, m_coeffs)
    places = {INFINITY, 2}
    for x in (elt_norm(ell), elt_norm(m)):
        for n in (x.numerator, x.denominator):
            if abs(n) > 1:
                places.update(factor_integer(abs(n)).primes())
    total = Fraction(0)
    for v in sorted(places):
        algebra = local_algebra(curve, v)
        space = build_square_class_space(algebra, "full")
        total += pairing_value(embed(ell, algebra), embed(m, algebra), space)
    assert total.denominator == 1
