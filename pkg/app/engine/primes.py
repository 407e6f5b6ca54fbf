"""The set S of places: S_min, ℓ-ramification and user-added primes."""
from dataclasses import dataclass, field
from math import isqrt
from typing import Dict, FrozenSet, Iterable, List, Sequence

from app.etale.curve import Curve
from app.etale.ells import EllCandidate
from app.etale.places import INFINITY, place_label, place_sort_key
from app.utils.logging_utils import setup_logger

logger = setup_logger("engine.primes")

ARCHIMEDEAN = "archimedean"
ABOVE_TWO = "above 2"
LEADING = "divides leading coefficient"
DISC_SQUARE = "disc valuation >= 2"
ELL_RAMIFICATION = "ell ramification"
USER = "user"


@dataclass
class PrimeSelection:
    """S ⊇ S_min with the reasons each place was included."""
    s_min: FrozenSet[int]
    provenance: Dict[int, List[str]] = field(default_factory=dict)

    @property
    def places(self) -> List[int]:
        return sorted(self.provenance, key=place_sort_key)

    def add(self, v: int, reason: str) -> None:
        reasons = self.provenance.setdefault(v, [])
        if reason not in reasons:
            reasons.append(reason)

    def support(self, ell: EllCandidate) -> FrozenSet[int]:
        """S′(ℓ): the places of S where the functional of ℓ may be nonzero."""
        return frozenset(v for v in self.provenance if v in self.s_min or v in ell.ramified_odd_primes)

    def as_labels(self) -> Dict[str, List[str]]:
        return {place_label(v): list(self.provenance[v]) for v in self.places}


def compute_smin(curve: Curve) -> PrimeSelection:
    """
    S_min: ∞, 2, the primes dividing c and the primes p with v_p(disc f) ≥ 2.

    Raises:
        IncompleteFactorizationError: if disc(f) or c does not factor within budget
    """
    fac = curve.require_complete_disc()
    sel = PrimeSelection(frozenset())
    sel.add(INFINITY, ARCHIMEDEAN)
    sel.add(2, ABOVE_TWO)
    for p in curve.c_primes():
        sel.add(p, LEADING)
    for p, e in fac.factors:
        if e >= 2:
            sel.add(p, DISC_SQUARE)
    sel.s_min = frozenset(sel.provenance)
    logger.debug(f"S_min of {curve}: {sel.as_labels()}")
    return sel


def assemble_S(curve: Curve, ells: Sequence[EllCandidate], extra: Iterable[int] = ()) -> PrimeSelection:
    """S = S_min ∪ primes where some ℓ ramifies ∪ user primes."""
    sel = compute_smin(curve)
    for ell in ells:
        for p in sorted(ell.ramified_odd_primes):
            sel.add(p, ELL_RAMIFICATION)
    for p in extra:
        sel.add(p, USER)
    logger.info(f"S for {curve}: {[place_label(v) for v in sel.places]}")
    return sel


def threshold_rhs(genus: int) -> int:
    """2(2^(2g)(g - 1) + 1)."""
    return 2 * (2 ** (2 * genus) * (genus - 1) + 1)


def theorem_prime_bound(genus: int) -> int:
    """
    Largest integer q with √q + 1/√q ≤ 2(2^(2g)(g - 1) + 1).

    Squaring gives (q + 1)² ≤ R²q, whose larger root is
    ((R² - 2) + √((R² - 2)² - 4)) / 2.
    """
    if genus < 2:
        raise ValueError("the prime bound is defined for genus at least 2")
    r2 = threshold_rhs(genus) ** 2
    q = ((r2 - 2) + isqrt((r2 - 2) ** 2 - 4)) // 2
    while (q + 1) ** 2 > r2 * q:
        q -= 1
    while (q + 2) ** 2 <= r2 * (q + 1):
        q += 1
    return q


def theorem_bound_table(genera: Iterable[int] = range(2, 11)) -> Dict[int, int]:
    return {g: theorem_prime_bound(g) for g in genera}
