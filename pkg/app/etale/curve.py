"""The hyperelliptic curve y² = f(x) with deg f = 2g + 2."""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence

from app.arith.integers import FactoredInteger, factor_integer, is_square_rational
from app.arith.poly import IntPoly, poly_discriminant
from app.utils.config import get_settings
from app.utils.errors import IncompleteFactorizationError, InvalidCurveError
from app.utils.logging_utils import setup_logger

logger = setup_logger("etale.curve")


@dataclass(frozen=True)
class Curve:
    """
    y² = f(x) over ℚ.

    The discriminant is computed on construction; its factorization is
    computed on first use, with the configured effort budget.
    """
    f: IntPoly
    disc_value: int

    @classmethod
    def from_poly(cls, f: IntPoly) -> "Curve":
        if f.degree < 4 or f.degree % 2:
            raise InvalidCurveError(f"deg f must be even and at least 4, got {f.degree}")
        disc = poly_discriminant(f)
        if disc == 0:
            raise InvalidCurveError("f is not separable (zero discriminant)")
        return cls(f, disc)

    @classmethod
    def from_coefficients(cls, leading_first: Sequence[int]) -> "Curve":
        return cls.from_poly(IntPoly.from_leading_first(leading_first))

    @classmethod
    def parse(cls, text: str) -> "Curve":
        """Whitespace-separated integer coefficients, leading coefficient first."""
        try:
            f = IntPoly.from_string(text)
        except ValueError as e:
            raise InvalidCurveError(f"cannot parse coefficients {text!r}: {e}") from e
        return cls.from_poly(f)

    @property
    def c(self) -> int:
        return self.f.lc

    @property
    def degree(self) -> int:
        return self.f.degree

    @property
    def genus(self) -> int:
        return (self.f.degree - 2) // 2

    @property
    def coeffs(self):
        return self.f.coeffs

    @cached_property
    def disc(self) -> FactoredInteger:
        settings = get_settings()
        fac = factor_integer(self.disc_value, settings.trial_bound, settings.rho_budget)
        if not fac.is_complete:
            logger.warning(f"discriminant of {self.f} left cofactor {fac.cofactor}")
        return fac

    def c_primes(self) -> List[int]:
        """Primes dividing the leading coefficient."""
        if abs(self.c) == 1:
            return []
        settings = get_settings()
        fac = factor_integer(abs(self.c), settings.trial_bound, settings.rho_budget)
        if not fac.is_complete:
            raise IncompleteFactorizationError(f"leading coefficient {self.c} has unfactored cofactor {fac.cofactor}")
        return fac.primes()

    def require_complete_disc(self) -> FactoredInteger:
        fac = self.disc
        if not fac.is_complete:
            raise IncompleteFactorizationError(f"disc(f) has unfactored cofactor {fac.cofactor}")
        return fac

    def disc_valuation(self, p: int) -> int:
        v = 0
        d = self.disc_value
        while d % p == 0:
            d //= p
            v += 1
        return v

    @cached_property
    def f_reversed(self) -> IntPoly:
        """x^(2g+2) f(1/x), the model at infinity."""
        return self.f.reversed(self.degree)

    def is_point(self, x: Optional[Fraction], y: Fraction) -> bool:
        """(x, y) on the affine model; x = None means a point at infinity with y² = c."""
        if x is None:
            return Fraction(y) ** 2 == self.c
        return Fraction(y) ** 2 == self.f(Fraction(x))

    def has_points_at_infinity(self) -> bool:
        return is_square_rational(Fraction(self.c))

    def leading_first(self) -> List[int]:
        return self.f.leading_first()

    def __str__(self) -> str:
        return f"y^2 = {self.f}"
