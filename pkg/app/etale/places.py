"""Places of ℚ and the completions L_v of the étale algebra of a curve."""
from typing import List, Union

from app.etale.curve import Curve
from app.etale.element import EtaleElement
from app.padic.algebra import LocalAlgebra, RealAlgebra, cached_local_algebra, cached_real_algebra

# Places are ints: primes, and 0 for the archimedean place.
INFINITY = 0

Algebra = Union[LocalAlgebra, RealAlgebra]


def place_label(v: int) -> str:
    return "inf" if v == INFINITY else str(v)


def parse_place(label: Union[str, int]) -> int:
    if isinstance(label, int):
        return label
    return INFINITY if label in ("inf", "oo", "infinity") else int(label)


def place_sort_key(v: int) -> float:
    """∞ sorts first."""
    return -1 if v == INFINITY else v


def local_algebra(curve: Curve, v: int) -> Algebra:
    """L_v, cached per (f, v) for the process."""
    if v == INFINITY:
        return cached_real_algebra(curve.coeffs)
    return cached_local_algebra(curve.coeffs, v, curve.disc_valuation(v))


def embed(ell: EtaleElement, algebra: Algebra) -> List:
    """Component images of ℓ: p-adic elements, or signs at the real roots."""
    if isinstance(algebra, RealAlgebra):
        return algebra.signs_of_poly(list(ell.rep))
    return algebra.embed_poly(list(ell.rep))
