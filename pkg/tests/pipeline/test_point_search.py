from fractions import Fraction

import pytest

from app.etale.curve import Curve
from app.pipeline.point_search import first_point, points_at_infinity, search_rational_points


def test_sextic_points(sextic):
    points = search_rational_points(sextic, 5)
    assert (Fraction(0), Fraction(1)) in points
    assert (Fraction(0), Fraction(-1)) in points
    assert (None, Fraction(1)) in points
    assert all(sextic.is_point(x, y) for x, y in points)


def test_planted_point():
    curve = Curve.from_coefficients([1, 0, 0, 0, 1, -2, 9])
    points = search_rational_points(curve, 4)
    assert (Fraction(0), Fraction(3)) in points
    assert all(curve.is_point(x, y) for x, y in points)


def test_non_integral_weierstrass_point():
    curve = Curve.from_coefficients([64, 0, 0, 0, 0, 0, -1])
    points = search_rational_points(curve, 3)
    assert (Fraction(1, 2), Fraction(0)) in points
    assert points.count((Fraction(1, 2), Fraction(0))) == 1
    assert points_at_infinity(curve) == [(None, Fraction(8)), (None, Fraction(-8))]


def test_first_point_prefers_infinity(sextic):
    assert first_point(sextic, 10) == (None, Fraction(1))


def test_no_points(no_real_points):
    assert search_rational_points(no_real_points, 20) == []
    assert first_point(no_real_points, 20) is None


def test_height_must_be_positive(sextic):
    with pytest.raises(ValueError):
        search_rational_points(sextic, 0)
