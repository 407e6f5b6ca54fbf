"""Local and everywhere-local solubility of y² = f(x)."""
from typing import List, Optional

from app.arith.fp_poly import fp_squarefree, fp_trim
from app.arith.integers import legendre, primes_up_to
from app.arith.realroots import count_roots
from app.etale.curve import Curve
from app.etale.places import INFINITY, place_label
from app.mu.image import local_image
from app.utils.logging_utils import setup_logger

logger = setup_logger("mu.solubility")


def is_locally_soluble(curve: Curve, v: int) -> bool:
    """C(ℚ_v) ≠ ∅. At ∞: f takes a nonnegative real value."""
    if v == INFINITY:
        return curve.c > 0 or count_roots(curve.f) > 0
    return local_image(curve, v, stop_at_first=True).soluble


def weil_accepts(genus: int, q: int) -> bool:
    """True when (q + 1)² > 4g²q, i.e. q + 1 - 2g√q > 0, so a smooth genus g model over F_q has an F_q-point."""
    return (q + 1) ** 2 > 4 * genus * genus * q


def residue_point_criterion(curve: Curve, p: int) -> bool:
    """
    Sufficient test for C(ℚ_p) ≠ ∅ at odd p ∤ c from the reduction alone.

    Writes f ≡ c·R²·S mod p with S squarefree and counts points of
    y² = c·S(x) against the Weil bound, leaving room for the zeros of R and S.
    """
    if p == 2 or curve.c % p == 0:
        return False
    lc = curve.c % p
    monic = [x * pow(lc, -1, p) % p for x in curve.coeffs]
    r = s = 0
    for g, mult in fp_squarefree(fp_trim(monic, p), p):
        deg = len(g) - 1
        r += deg * (mult // 2)
        s += deg * (mult % 2)
    if s == 0:
        # f ≡ c·R² and any x off the zeros of R works when c is a square
        return legendre(lc, p) == 1 and p > r
    g_s = s // 2 - 1
    slack = p - 1 - 2 * r - s
    return slack > 0 and slack * slack > 4 * g_s * g_s * p


def bad_primes(curve: Curve) -> List[int]:
    """Primes dividing 2·c·disc(f).

    Raises:
        IncompleteFactorizationError: if disc(f) or c does not factor within budget
    """
    fac = curve.require_complete_disc()
    return sorted({2} | set(fac.primes()) | set(curve.c_primes()))


def first_insoluble_place(curve: Curve, good_prime_bound: Optional[int] = None) -> Optional[int]:
    """
    A place v with C(ℚ_v) = ∅, or None when C is everywhere locally soluble.

    Checks ∞ and every bad prime with the disc recursion. Good primes are
    tested up to the Weil threshold (or `good_prime_bound` if larger); above
    it a smooth reduction always has a point that Hensel-lifts.

    Raises:
        IncompleteFactorizationError: disc(f) has an unfactored cofactor
    """
    if not is_locally_soluble(curve, INFINITY):
        logger.info(f"{curve} has no real points")
        return INFINITY
    bad = bad_primes(curve)
    for p in bad:
        if residue_point_criterion(curve, p):
            continue
        if not is_locally_soluble(curve, p):
            logger.info(f"{curve} is not soluble at {place_label(p)}")
            return p
    g = curve.genus
    bound = good_prime_bound or 0
    for p in primes_up_to(max(bound, 4 * g * g + 2)):
        if p in bad:
            continue
        if p > bound and weil_accepts(g, p):
            continue
        if residue_point_criterion(curve, p):
            continue
        if not is_locally_soluble(curve, p):
            logger.info(f"{curve} is not soluble at good prime {p}")
            return p
    return None


def is_everywhere_locally_soluble(curve: Curve, good_prime_bound: Optional[int] = None) -> bool:
    """C(ℚ_v) ≠ ∅ for every place v."""
    return first_insoluble_place(curve, good_prime_bound) is None
