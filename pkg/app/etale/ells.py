"""
Square-norm elements ℓ of L: validation, ramification and bounded search.

Candidates come from two sources. Small elements whose norm is already a
square are taken directly. Small elements whose norm is smooth enter a
relation pool; F₂-dependencies among their norm parities and their
valuation parities at primes outside S give products of square norm that
are unramified outside S.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from app.arith.gf2 import F2Span, f2_dependencies
from app.arith.integers import factor_integer, primes_up_to
from app.etale.curve import Curve
from app.etale.element import EtaleElement, elt_norm, has_square_norm
from app.etale.places import INFINITY, embed, local_algebra
from app.models.config import SearchBounds
from app.padic.squares import build_square_class_space
from app.utils.errors import IncompleteFactorizationError, NonSquareNormError, PrecisionExhaustedError
from app.utils.logging_utils import setup_logger

logger = setup_logger("etale.ells")


@dataclass(frozen=True)
class EllCandidate:
    """A verified input ℓ with its norm and the odd primes where its class ramifies."""
    element: EtaleElement
    norm: Fraction
    square_norm: bool
    ramified_odd_primes: FrozenSet[int]
    source: str = field(default="search", compare=False)

    def coefficient_strings(self) -> List[str]:
        return self.element.as_strings()


def ramification_support(ell: EtaleElement) -> Set[int]:
    """
    Odd primes at which some component of ℓ can have nonzero valuation.

    A component valuation is nonzero only at primes dividing the norm, or
    where ℓ has a denominator, or where θ fails to be integral (p | c).

    Raises:
        IncompleteFactorizationError: if a norm or denominator does not factor within budget
    """
    n = elt_norm(ell)
    ints, den = ell.integral()
    out: Set[int] = set()
    for m in (n.numerator, n.denominator, den, ell.owner.c):
        if abs(m) <= 1:
            continue
        fac = factor_integer(m)
        if not fac.is_complete:
            raise IncompleteFactorizationError(f"cannot factor {m} to bound the ramification of {ell}")
        out.update(p for p in fac.primes() if p != 2)
    return out


def component_valuations(ell: EtaleElement, p: int) -> List[int]:
    algebra = local_algebra(ell.owner, p)
    images = embed(ell, algebra)
    out = []
    for x in images:
        if x.is_zero:
            raise PrecisionExhaustedError(f"component of {ell} vanishes at working precision over Q_{p}")
        out.append(x.val)
    return out


def odd_ramified_primes(ell: EtaleElement, candidate_primes: Iterable[int]) -> Set[int]:
    """Odd candidate primes p at which some component of ℓ in L_p has odd valuation."""
    out = set()
    for p in sorted(set(candidate_primes)):
        if p == 2:
            raise ValueError("odd_ramified_primes takes odd primes only")
        if any(v % 2 for v in component_valuations(ell, p)):
            out.add(p)
    return out


def verify_ell_input(curve: Curve, ell: EtaleElement, S: Iterable[int] = ()) -> EllCandidate:
    """
    Validate a user-supplied ℓ.

    Args:
        curve: The curve
        ell: Candidate element
        S: Places already in S (ramification outside S is reported, not rejected)

    Returns:
        EllCandidate carrying the odd ramified primes

    Raises:
        NonSquareNormError: if ℓ is not invertible or its norm is not a square
    """
    if ell.owner != curve:
        raise ValueError("element belongs to a different curve")
    if not ell.is_invertible():
        raise NonSquareNormError(f"{ell} is not invertible in L")
    n = elt_norm(ell)
    if not has_square_norm(ell):
        raise NonSquareNormError(f"norm of {ell} is {n}, not a square")
    ram = frozenset(odd_ramified_primes(ell, ramification_support(ell)))
    added = sorted(ram - set(S))
    if added:
        logger.info(f"{ell} ramifies outside S at {added}")
    return EllCandidate(ell, n, True, ram, source="user")


def _small_elements(curve: Curve, bounds: SearchBounds) -> Iterator[EtaleElement]:
    """Distinguished elements first, then every primitive g of bounded degree and height."""
    yield EtaleElement.theta(curve)
    for a in range(1, bounds.linear_bound + 1):
        for s in (a, -a):
            yield EtaleElement.linear(curve, s)
            yield EtaleElement.linear(curve, 1, s)
    d = min(bounds.degree, curve.degree - 1)
    B = bounds.coeff_bound
    for deg in range(d + 1):
        for lower in product(range(-B, B + 1), repeat=deg):
            for lead in range(1, B + 1):
                coeffs = list(lower) + [lead]
                yield EtaleElement.from_coeffs(curve, coeffs)


def _relation_vector(
    n: Fraction,
    ell: EtaleElement,
    norm_primes: Sequence[int],
    prime_index: Dict[int, int],
    outside: Dict[int, int],
) -> int:
    """
    Bit 0: sign of the norm. Then norm parities at the indexed primes, then
    component valuation parities at odd primes outside S.
    """
    vec = 1 if n < 0 else 0
    for m in (abs(n.numerator), n.denominator):
        if m == 1:
            continue
        for p, e in factor_integer(m).factors:
            if e % 2:
                vec ^= 1 << prime_index[p]
    # integral elements have zero valuation away from their norm
    for p in set(norm_primes):
        if p in outside:
            for i, v in enumerate(component_valuations(ell, p)):
                if v % 2:
                    vec ^= 1 << (outside[p] + i)
    return vec


def _smooth_primes(n: Fraction, bound: int) -> Optional[List[int]]:
    out = []
    for m in (abs(n.numerator), n.denominator):
        if m == 1:
            continue
        fac = factor_integer(m, trial_bound=bound, rho_budget=0)
        if not fac.is_complete or any(p > bound for p in fac.primes()):
            return None
        out.extend(fac.primes())
    return out


def _relation_products(
    curve: Curve,
    pool: List[Tuple[EtaleElement, Fraction, List[int]]],
    S: Set[int],
    bounds: SearchBounds,
) -> List[EtaleElement]:
    primes = sorted({p for _, _, ps in pool for p in ps} | {p for p in S if p != INFINITY})
    prime_index = {p: 1 + i for i, p in enumerate(primes)}
    offset = 1 + len(primes)
    outside: Dict[int, int] = {}
    for p in primes:
        if p == 2 or p in S:
            continue
        outside[p] = offset
        offset += len(local_algebra(curve, p).components)
    vectors = []
    for ell, n, ps in pool:
        vectors.append(_relation_vector(n, ell, ps, prime_index, outside))
    deps = sorted(f2_dependencies(vectors), key=lambda mask: bin(mask).count("1"))
    out = []
    for mask in deps[: bounds.max_relations]:
        acc = EtaleElement.scalar(curve, 1)
        for i, (ell, _, _) in enumerate(pool):
            if (mask >> i) & 1:
                acc = acc * ell
        out.append(acc)
    logger.debug(f"relation pool of {len(pool)} elements gave {len(deps)} dependencies")
    return out


def local_fingerprint(ell: EtaleElement, places: Sequence[int]) -> int:
    """Concatenated full square-class coordinates of ℓ at the given places."""
    out = 0
    shift = 0
    for v in places:
        space = build_square_class_space(local_algebra(ell.owner, v), "full")
        out |= space.full_dlog(embed(ell, space.algebra)) << shift
        shift += space.full_dim
    return out


def is_square_in_L(ell: EtaleElement, places: Optional[Sequence[int]] = None) -> bool:
    """
    Best-effort square test: False when the norm or a local class at one of
    `places` shows ℓ is not a square; True means no such witness was found.
    """
    if not has_square_norm(ell):
        return False
    if places is None:
        places = [INFINITY, 2]
        bad = 2 * ell.owner.c * ell.owner.disc_value
        for p in primes_up_to(200):
            if p > 2 and bad % p and len(places) < 6:
                places.append(p)
    return local_fingerprint(ell, places) == 0


def generate_square_norm_elements(curve: Curve, S: Iterable[int], bounds: Optional[SearchBounds] = None) -> List[EllCandidate]:
    """
    Square-norm elements unramified outside S, found by bounded search.

    Args:
        curve: The curve
        S: Places (0 = ∞), containing S_min
        bounds: Search bounds; defaults to SearchBounds()

    Returns:
        Candidates whose local classes at S are F₂-independent; possibly empty
    """
    bounds = bounds or SearchBounds()
    S = set(S)
    places = sorted(S)
    seen: Set[Tuple[int, ...]] = set()
    direct: List[EtaleElement] = []
    pool: List[Tuple[EtaleElement, Fraction, List[int]]] = []
    smooth_limit = max([bounds.smooth_bound] + [p for p in S])

    for ell in _small_elements(curve, bounds):
        if ell.is_zero:
            continue
        key = ell.primitive_key()
        if key in seen:
            continue
        seen.add(key)
        n = elt_norm(ell)
        if n == 0:
            continue
        if has_square_norm(ell):
            if n != 1 or ell.degree > 0:
                direct.append(ell)
            continue
        if len(pool) < bounds.relation_pool:
            ps = _smooth_primes(n, smooth_limit)
            if ps is not None:
                pool.append((ell, n, ps))

    relation_elements = _relation_products(curve, pool, S, bounds) if pool else []

    out: List[EllCandidate] = []
    span = F2Span()
    for ell, source in [(e, "search") for e in direct] + [(e, "relation") for e in relation_elements]:
        if len(out) >= bounds.max_candidates:
            break
        try:
            ram = odd_ramified_primes(ell, ramification_support(ell))
        except (IncompleteFactorizationError, PrecisionExhaustedError) as e:
            logger.debug(f"skipping {ell}: {e}")
            continue
        if not ram <= S:
            continue
        try:
            fp = local_fingerprint(ell, places)
        except PrecisionExhaustedError as e:
            logger.debug(f"skipping {ell}: {e}")
            continue
        if not span.add(fp):
            continue
        out.append(EllCandidate(ell, elt_norm(ell), True, frozenset(ram), source=source))

    logger.info(
        f"ell search on {curve}: {len(direct)} direct, {len(relation_elements)} relation products, "
        f"{len(out)} independent candidates"
    )
    return out
