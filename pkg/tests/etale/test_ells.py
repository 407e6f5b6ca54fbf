import pytest

from app.engine.primes import assemble_S, compute_smin
from app.etale.element import EtaleElement
from app.etale.ells import (
    generate_square_norm_elements,
    is_square_in_L,
    local_fingerprint,
    odd_ramified_primes,
    ramification_support,
    verify_ell_input,
)
from app.etale.places import INFINITY
from app.models.config import SearchBounds
from app.utils.errors import IncompleteFactorizationError, NonSquareNormError


def test_smin_genus5(genus5_curve):
    assert compute_smin(genus5_curve).s_min == {INFINITY, 2, 5, 17}


def test_smin_sextic(sextic):
    sel = compute_smin(sextic)
    assert sel.s_min == {INFINITY, 2, 3}
    assert sel.places == [INFINITY, 2, 3]


@pytest.mark.slow
@pytest.mark.xfail(
    raises=IncompleteFactorizationError,
    strict=True,
    reason="disc(f) leaves a 208-digit composite cofactor that rho does not split",
)
def test_smin_genus50(genus50_curve, small_rho_budget):
    assert compute_smin(genus50_curve).s_min == {INFINITY, 2, 5}


def test_user_primes_extend_S(genus5_curve):
    sel = assemble_S(genus5_curve, [], [239])
    assert sel.places == [INFINITY, 2, 5, 17, 239]
    assert sel.provenance[239] == ["user"]


def test_verify_accepts_square_norm(sextic):
    cand = verify_ell_input(sextic, EtaleElement.theta(sextic), {INFINITY, 2, 3})
    assert cand.square_norm
    assert cand.norm == 1
    assert cand.source == "user"


def test_verify_rejects_non_square_norm(sextic):
    with pytest.raises(NonSquareNormError):
        verify_ell_input(sextic, EtaleElement.linear(sextic, 1))


def test_verify_rejects_zero_divisor(sextic):
    with pytest.raises(NonSquareNormError):
        verify_ell_input(sextic, EtaleElement.from_coeffs(sextic, [1, 0, 1]))


def test_scalar_is_accepted(genus5_curve):
    cand = verify_ell_input(genus5_curve, EtaleElement.scalar(genus5_curve, 1))
    assert not cand.ramified_odd_primes


def test_ramification_is_reported(sextic):
    # 7·θ has norm 7^6 and odd valuation at 7 in every component
    ell = EtaleElement.from_coeffs(sextic, [0, 7])
    assert 7 in ramification_support(ell)
    cand = verify_ell_input(sextic, ell, {INFINITY, 2, 3})
    assert cand.ramified_odd_primes == {7}
    assert 7 in assemble_S(sextic, [cand]).places


@pytest.mark.slow
def test_genus50_theta_unramified_at_five(genus50_curve):
    theta = EtaleElement.theta(genus50_curve)
    assert ramification_support(theta) == {5}
    assert odd_ramified_primes(theta, [5]) == set()


def test_odd_ramified_primes_takes_odd_primes(sextic):
    with pytest.raises(ValueError):
        odd_ramified_primes(EtaleElement.theta(sextic), [2])


def test_square_in_L(sextic):
    theta = EtaleElement.theta(sextic)
    assert is_square_in_L(theta * theta)
    assert not is_square_in_L(EtaleElement.linear(sextic, 1))


def test_search_returns_independent_unramified_candidates(sextic):
    S = {INFINITY, 2, 3}
    bounds = SearchBounds(degree=1, coeff_bound=2, linear_bound=4, relation_pool=40, max_relations=4)
    found = generate_square_norm_elements(sextic, S, bounds)
    assert found
    for cand in found:
        assert cand.square_norm
        assert cand.ramified_odd_primes <= S
        assert local_fingerprint(cand.element, sorted(S)) != 0
