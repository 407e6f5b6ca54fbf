from fractions import Fraction

import pytest

from app.arith.poly import IntPoly
from app.etale.places import INFINITY, local_algebra
from app.padic.algebra import qp_factor, real_algebra


@pytest.mark.parametrize(
    "coeffs, p, degrees",
    [
        ((1, 0, 1), 5, [1, 1]),
        ((1, 0, 1), 3, [2]),
        ((1, 0, 1), 2, [2]),
        ((-2, 0, 0, 0, 0, 0, 1), 7, None),
        ((1, 0, 0, 0, 0, 0, 1), 3, None),
    ],
)
def test_factor_degrees_add_up(coeffs, p, degrees):
    f = IntPoly(coeffs)
    algebra = qp_factor(f, p)
    assert sum(algebra.degrees) == f.degree
    if degrees is not None:
        assert sorted(algebra.degrees) == degrees


def test_theta_images_are_roots():
    f = IntPoly((-6, 1, 1))  # (x - 2)(x + 3)
    algebra = qp_factor(f, 5)
    for comp in algebra.components:
        value = comp.field.zero()
        for c in reversed(f.coeffs):
            value = value * comp.theta + c
        assert value.is_zero or value.val >= 10


def test_non_monic_model():
    # 5x^2 - 1: the leading coefficient is divisible by p
    algebra = qp_factor(IntPoly((-1, 0, 5)), 5)
    assert sum(algebra.degrees) == 2
    for comp in algebra.components:
        assert comp.theta.val < 0


@pytest.mark.slow
def test_genus50_has_one_five_adic_root(genus50_curve):
    algebra = local_algebra(genus50_curve, 5)
    linear = [c for c in algebra.components if c.degree == 1]
    assert len(linear) == 1
    root = linear[0].theta
    assert root.val == 0
    assert root.residue() == (3,)


def test_real_signs():
    alg = real_algebra(IntPoly((-2, 0, 1)))
    assert alg.r1 == 2
    # 1 - θ at θ = -√2, √2
    assert alg.signs_of_linear(Fraction(1)) == [1, -1]
    assert alg.signs_of_poly([-1, 0, 1]) == [1, 1]


def test_linear_sign_at_a_root_rejected():
    alg = real_algebra(IntPoly((-1, 0, 1)))
    assert alg.linear_signs(1) == [1, 0]
    with pytest.raises(ValueError):
        alg.signs_of_linear(1)


def test_real_algebra_of_curve(sextic):
    alg = local_algebra(sextic, INFINITY)
    assert alg.r1 == 0
    assert alg.r2 == 3
