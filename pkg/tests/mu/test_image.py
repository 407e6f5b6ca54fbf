from fractions import Fraction
from random import Random

import pytest
from hypothesis import assume, given, settings, strategies as st

from app.etale.curve import Curve
from app.etale.places import INFINITY, local_algebra
from app.mu.image import local_image, mu_of_point
from app.padic.squares import build_square_class_space
from app.utils.errors import InvalidCurveError
from tests.oracles import local_point_exists, sampled_image

CURVES = {
    "sextic": [1, 0, 0, 0, 0, 0, 1],
    "shifted": [1, 0, 0, 0, 0, 3, 5],
    "non_monic": [3, 0, 0, 1, 0, 0, -2],
    "genus3": [2, -1, 0, 0, 4, 0, 0, 1, 7],
}


def _space(curve: Curve, v: int):
    return build_square_class_space(local_algebra(curve, v), "scalar")


@pytest.mark.parametrize("name", sorted(CURVES))
@pytest.mark.parametrize("p", [3, 5, 7])
def test_sampled_classes_lie_in_image(name, p):
    curve = Curve.from_coefficients(CURVES[name])
    space = _space(curve, p)
    image = local_image(curve, p, space)
    assert sampled_image(curve, space, 4) <= image.classes
    assert image.soluble == bool(image.classes)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(CURVES))
@pytest.mark.parametrize("p", [3, 5, 7])
def test_deep_sampling_recovers_image(name, p):
    curve = Curve.from_coefficients(CURVES[name])
    space = _space(curve, p)
    assert sampled_image(curve, space, 6) == local_image(curve, p, space).classes


def test_real_image_counts_sign_regions():
    # (x^2 - 1)(x^2 - 4)(x^2 + 1): f > 0 on three intervals
    curve = Curve.from_coefficients([1, 0, -4, 0, -1, 0, 4])
    image = local_image(curve, INFINITY)
    assert image.soluble
    assert 0 in image.classes
    assert 1 <= len(image.classes) <= 3


def test_no_real_points(no_real_points):
    image = local_image(no_real_points, INFINITY)
    assert not image.soluble
    assert not image.classes


def test_positive_definite_real_image(sextic):
    image = local_image(sextic, INFINITY)
    assert image.soluble
    assert image.classes == {0}


@pytest.mark.parametrize("p", [INFINITY, 2, 3, 5, 7])
def test_rational_points_land_in_image(sextic, p):
    space = _space(sextic, p)
    image = local_image(sextic, p, space)
    for point in [(Fraction(0), Fraction(1)), (Fraction(0), Fraction(-1)), (None, Fraction(1))]:
        assert mu_of_point(sextic, point, p, space) in image


@pytest.mark.parametrize("p", [INFINITY, 3, 5, 7])
def test_weierstrass_point(p):
    # (x^2 - 1)(x^4 + 1): (1, 0) is a rational Weierstrass point
    curve = Curve.from_coefficients([1, 0, -1, 0, 1, 0, -1])
    space = _space(curve, p)
    assert mu_of_point(curve, (Fraction(1), Fraction(0)), p, space) in local_image(curve, p, space)


def test_point_off_curve_rejected(sextic):
    with pytest.raises(ValueError):
        mu_of_point(sextic, (Fraction(1), Fraction(1)), 5)


def test_points_at_infinity_map_to_zero(sextic):
    assert mu_of_point(sextic, (None, Fraction(-1)), 3) == 0


@pytest.mark.slow
def test_genus50_five_adic_image_is_one_class(genus50_curve):
    image = local_image(genus50_curve, 5)
    assert image.soluble
    assert len(image.classes) == 1


def _sextic_or_none(coeffs):
    if coeffs[0] == 0:
        return None
    try:
        return Curve.from_coefficients(coeffs)
    except InvalidCurveError:
        return None


sextic_coefficients = st.lists(st.integers(min_value=-6, max_value=6), min_size=7, max_size=7)


@settings(max_examples=25)
@given(sextic_coefficients, st.sampled_from([3, 5]))
def test_random_sextic_image_contains_samples(coeffs, p):
    curve = _sextic_or_none(coeffs)
    assume(curve is not None)
    space = _space(curve, p)
    image = local_image(curve, p, space)
    assert sampled_image(curve, space, 3) <= image.classes
    exists = local_point_exists(curve, p)
    if exists is not None:
        assert image.soluble == exists


def _random_sextics(seed: int, count: int, p: int):
    rng = Random(seed)
    out = []
    while len(out) < count:
        curve = _sextic_or_none([rng.randint(-9, 9) for _ in range(7)])
        # Deeply singular reductions need samples beyond p^6
        if curve is not None and curve.disc_valuation(p) <= 2:
            out.append(curve)
    return out


@pytest.mark.slow
@pytest.mark.parametrize("p", [3, 5, 7])
def test_random_sextic_images_match_brute_force(p):
    for curve in _random_sextics(p, 50, p):
        space = _space(curve, p)
        image = local_image(curve, p, space)
        assert sampled_image(curve, space, 6) == image.classes, curve.leading_first()
