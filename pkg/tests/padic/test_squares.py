from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from app.arith.poly import IntPoly
from app.padic.algebra import qp_factor
from app.padic.field import qp_field
from app.padic.squares import FieldSquareClasses, build_square_class_space, is_square_qp


def _closure(p: int) -> set:
    """Distinct dlogs over enough rationals to hit every class."""
    classes = FieldSquareClasses(qp_field(p, 30))
    fld = classes.field
    seen = set()
    for k in range(2):
        for u in range(1, 8 * p):
            if u % p:
                for s in (1, -1):
                    seen.add(classes.dlog(fld.from_rational(s * u * p ** k)))
    return seen


@pytest.mark.parametrize("p, size", [(3, 4), (5, 4), (7, 4), (11, 4), (13, 4), (2, 8)])
def test_square_class_group_order(p, size):
    assert len(_closure(p)) == size
    assert 2 ** FieldSquareClasses(qp_field(p, 30)).dim == size


@pytest.mark.parametrize("p", [2, 3, 5])
def test_dlog_agrees_with_exact_square_test(p):
    classes = FieldSquareClasses(qp_field(p, 30))
    fld = classes.field

    @settings(max_examples=80)
    @given(
        st.integers(min_value=1, max_value=500).filter(lambda n: n % p),
        st.integers(min_value=1, max_value=500).filter(lambda n: n % p),
        st.integers(min_value=-3, max_value=3),
        st.sampled_from([1, -1]),
    )
    def check(r, s, k, sign):
        a = Fraction(sign * r) * Fraction(p) ** k
        b = Fraction(s)
        same = classes.dlog(fld.from_rational(a)) == classes.dlog(fld.from_rational(b))
        assert same == is_square_qp(a / b, p)

    check()


TWO_ADIC_FIELDS = [
    [-2, 0, 1],        # ramified quadratic
    [1, 1, 1],         # unramified quadratic
    [1, 0, 1],         # ramified quadratic
    [-2, 0, 0, 1],     # cubic, totally ramified
    [1, 1, 0, 1],      # cubic, unramified
    [-2, 0, 0, 0, 1],  # quartic, totally ramified
    [1, 1, 0, 0, 1],   # quartic, unramified
]


@pytest.mark.parametrize("coeffs", TWO_ADIC_FIELDS)
def test_two_adic_extension_dimension(coeffs):
    algebra = qp_factor(IntPoly(tuple(coeffs)), 2)
    assert len(algebra.components) == 1
    comp = algebra.components[0]
    classes = FieldSquareClasses(comp.field)
    assert classes.dim == comp.degree + 2
    for j, b in enumerate(classes.basis):
        assert classes.dlog(b) == 1 << j

    rng = Random(7)
    fld = comp.field
    for _ in range(25):
        x = fld.from_integral(fld.random_integral(rng))
        y = fld.from_integral(fld.random_integral(rng))
        if x.is_zero or y.is_zero:
            continue
        assert classes.dlog(x * y) == classes.dlog(x) ^ classes.dlog(y)
        assert classes.dlog(x * x) == 0


def test_scalar_quotient_dimension():
    # x^2 + 1 over Q_5 splits: L_5 = Q_5 x Q_5, full dim 4, quotient dim 2
    space = build_square_class_space(qp_factor(IntPoly((1, 0, 1)), 5), "scalar")
    assert space.full_dim == 4
    assert space.dim == 2
    for r in (5, 2, -1, Fraction(10, 3)):
        assert space.project(space.full_dlog_scalar(r)) == 0


def test_exact_square_test():
    assert is_square_qp(Fraction(17), 2)
    assert not is_square_qp(Fraction(3), 2)
    assert is_square_qp(Fraction(4, 25), 5)
    assert not is_square_qp(Fraction(2), 3)
    assert is_square_qp(Fraction(7), 3)
