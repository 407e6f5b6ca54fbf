"""
The F₂-linear functionals φ_ℓ(m) = Σ_v ⟨ℓ, m_v⟩_v on the local square class spaces.

At each place the row of ℓ is read from the place's Hilbert form and
restricted to the scalar quotient; the square norm of ℓ makes it vanish on
the image of ℚ_v^×.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional

from app.arith.gf2 import dot
from app.engine.primes import PrimeSelection
from app.etale.ells import EllCandidate
from app.etale.places import embed, place_label
from app.mu.image import LocalImage
from app.padic.hilbert import PlaceForm
from app.padic.squares import SquareClassSpace
from app.utils.errors import CertificateError
from app.utils.logging_utils import setup_logger

logger = setup_logger("engine.phi")


@dataclass
class PhiFunctional:
    """
    φ_ℓ as one row per place over the quotient coordinates.

    Attributes:
        ell: The square-norm element (None when replayed from a report)
        rows: Place -> quotient row; the value on class x is row · x
        full_rows: Place -> row over the full square class space
        support: S′(ℓ); rows outside it are zero
    """
    ell: Optional[EllCandidate]
    rows: Dict[int, int] = field(default_factory=dict)
    full_rows: Dict[int, int] = field(default_factory=dict)
    support: FrozenSet[int] = frozenset()

    def value(self, v: int, cls: int) -> int:
        return dot(self.rows.get(v, 0), cls)

    def is_zero(self) -> bool:
        return not any(self.rows.values())


def quotient_row(space: SquareClassSpace, full_row: int) -> int:
    """Restrict a full-space row to the quotient basis (the free coordinates)."""
    out = 0
    for i, j in enumerate(space.free_positions):
        if (full_row >> j) & 1:
            out |= 1 << i
    return out


def place_row(ell: EllCandidate, space: SquareClassSpace) -> int:
    """Full-space row of ⟨ℓ, ·⟩_v, checked to vanish on the scalars."""
    ell_full = space.full_dlog(embed(ell.element, space.algebra))
    row = PlaceForm(space).functional(ell_full)
    for scalar in space.scalar_span.basis():
        if dot(row, scalar):
            raise CertificateError(
                f"pairing with {ell.element} is nonzero on a scalar class at {place_label(space.place)}; "
                f"its norm {ell.norm} is not a square there"
            )
    return row


def build_phi(
    ell: EllCandidate,
    selection: PrimeSelection,
    spaces: Mapping[int, SquareClassSpace],
    images: Optional[Mapping[int, LocalImage]] = None,
) -> PhiFunctional:
    """
    Pair ℓ against every local space of S.

    Outside S′(ℓ) the functional must vanish on the local image; this is
    checked when images are given and the row is then set to zero.

    Raises:
        CertificateError: the row is nonzero on scalars, or on I_v outside S′(ℓ)
    """
    support = selection.support(ell)
    phi = PhiFunctional(ell, support=support)
    for v in selection.places:
        space = spaces[v]
        full = place_row(ell, space)
        row = quotient_row(space, full)
        if v not in support:
            if images is not None:
                bad = [cls for cls in images[v].classes if dot(row, cls)]
                if bad:
                    raise CertificateError(
                        f"functional of {ell.element} is nonzero on I_{place_label(v)} outside its support"
                    )
            row = full = 0
        phi.rows[v] = row
        phi.full_rows[v] = full
    logger.debug(
        f"phi for {ell.element}: support {sorted(place_label(v) for v in support)}, "
        f"nonzero at {[place_label(v) for v, r in phi.rows.items() if r]}"
    )
    return phi
