from decimal import Decimal, localcontext

import pytest
from hypothesis import given, strategies as st

from app.etale.curve import Curve
from app.etale.places import INFINITY
from app.mu.solubility import (
    bad_primes,
    first_insoluble_place,
    is_everywhere_locally_soluble,
    is_locally_soluble,
    residue_point_criterion,
    weil_accepts,
)
from app.utils.errors import IncompleteFactorizationError


def test_weil_threshold():
    assert not weil_accepts(2, 13)
    assert weil_accepts(2, 17)
    assert weil_accepts(5, 101)
    assert not weil_accepts(5, 97)


@given(st.integers(min_value=1, max_value=60), st.integers(min_value=2, max_value=10**6))
def test_weil_threshold_is_the_hasse_weil_lower_bound(genus, q):
    with localcontext() as ctx:
        ctx.prec = 60
        lower = Decimal(q) + 1 - 2 * genus * Decimal(q).sqrt()
    assert weil_accepts(genus, q) == (lower > 0)


def test_residue_point_criterion(sextic):
    assert not residue_point_criterion(sextic, 2)
    assert not residue_point_criterion(sextic, 5)
    assert residue_point_criterion(sextic, 101)


def test_residue_criterion_skips_leading_primes():
    curve = Curve.from_coefficients([3, 0, 0, 0, 0, 0, 1])
    assert not residue_point_criterion(curve, 3)


def test_no_real_points(no_real_points):
    assert not is_locally_soluble(no_real_points, INFINITY)
    assert first_insoluble_place(no_real_points) == INFINITY
    assert not is_everywhere_locally_soluble(no_real_points)


def test_everywhere_soluble_with_point(sextic):
    assert bad_primes(sextic) == [2, 3]
    assert first_insoluble_place(sextic) is None


def test_insoluble_at_three():
    # 3·(2x^6 + x^2 + 2) has odd valuation on both charts at 3
    curve = Curve.from_coefficients([6, 0, 0, 0, 3, 0, 6])
    assert is_locally_soluble(curve, INFINITY)
    assert not is_locally_soluble(curve, 3)
    assert first_insoluble_place(curve) in (2, 3)


def test_good_prime_bound_forces_checks(sextic):
    assert first_insoluble_place(sextic, good_prime_bound=60) is None


@pytest.mark.slow
def test_genus5_everywhere_locally_soluble(genus5_curve):
    assert is_everywhere_locally_soluble(genus5_curve, good_prime_bound=1000)


@pytest.mark.slow
@pytest.mark.xfail(
    raises=IncompleteFactorizationError,
    strict=True,
    reason="disc(f) leaves a 208-digit composite cofactor that rho does not split",
)
def test_genus50_everywhere_locally_soluble(genus50_curve, small_rho_budget):
    assert is_everywhere_locally_soluble(genus50_curve)
