"""
Elements of the étale algebra L = ℚ[x]/(f).

An element is g(θ) for a rational polynomial g of degree < deg f, with θ the
image of x. L is never factored over ℚ: norms come from resultants and
inverses from the extended Euclidean algorithm modulo f.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

from app.arith.integers import is_square_rational
from app.arith.poly import clear_denominators, pmod, pmul, pxgcd, resultant, trim
from app.etale.curve import Curve


@dataclass(frozen=True)
class EtaleElement:
    """g(θ) in L; `rep` holds the coefficients of g reduced modulo f, constant first."""
    owner: Curve
    rep: Tuple[Fraction, ...]

    @classmethod
    def from_coeffs(cls, curve: Curve, coeffs: Sequence) -> "EtaleElement":
        reduced = pmod([Fraction(c) for c in coeffs], list(curve.f.coeffs)) if coeffs else []
        return cls(curve, tuple(Fraction(c) for c in trim(reduced)))

    @classmethod
    def scalar(cls, curve: Curve, r) -> "EtaleElement":
        return cls.from_coeffs(curve, [Fraction(r)])

    @classmethod
    def theta(cls, curve: Curve) -> "EtaleElement":
        return cls.from_coeffs(curve, [0, 1])

    @classmethod
    def linear(cls, curve: Curve, a, b=1) -> "EtaleElement":
        """a - b·θ."""
        return cls.from_coeffs(curve, [Fraction(a), -Fraction(b)])

    @property
    def is_zero(self) -> bool:
        return not self.rep

    @property
    def degree(self) -> int:
        return len(self.rep) - 1

    def __mul__(self, other: "EtaleElement") -> "EtaleElement":
        self._check_owner(other)
        return EtaleElement.from_coeffs(self.owner, pmul(list(self.rep), list(other.rep)))

    def __pow__(self, k: int) -> "EtaleElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = EtaleElement.scalar(self.owner, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_invertible(self) -> bool:
        if self.is_zero:
            return False
        g, _, _ = pxgcd(list(self.rep), list(self.owner.f.coeffs))
        return len(g) == 1

    def inverse(self) -> "EtaleElement":
        g, s, _ = pxgcd(list(self.rep), list(self.owner.f.coeffs))
        if len(g) != 1:
            raise ZeroDivisionError("element is a zero divisor in L")
        return EtaleElement.from_coeffs(self.owner, s)

    def norm(self) -> Fraction:
        return elt_norm(self)

    def integral(self) -> Tuple[List[int], int]:
        """(integer coefficients, d) with rep = coefficients / d."""
        return clear_denominators(list(self.rep))

    def primitive_key(self) -> Tuple[int, ...]:
        """The rep up to a nonzero rational factor: primitive, leading coefficient positive."""
        ints, _ = self.integral()
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        g = g or 1
        if ints and ints[-1] < 0:
            g = -g
        return tuple(x // g for x in ints)

    def as_strings(self) -> List[str]:
        return [str(c) for c in self.rep]

    def _check_owner(self, other: "EtaleElement") -> None:
        if other.owner != self.owner:
            raise ValueError("elements of different étale algebras")

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.rep):
            if c == 0:
                continue
            mono = "" if i == 0 else ("theta" if i == 1 else f"theta^{i}")
            terms.append(f"({c})*{mono}" if mono else str(c))
        return " + ".join(terms) if terms else "0"


def elt_norm(ell: EtaleElement) -> Fraction:
    """
    N_{L/ℚ}(g(θ)) = Res(f, g) / c^(deg g).

    Raises:
        ZeroDivisionError: for ℓ = 0
    """
    if ell.is_zero:
        raise ZeroDivisionError("norm of zero")
    f = ell.owner.f
    if ell.degree == 0:
        return ell.rep[0] ** f.degree
    return resultant(list(f.coeffs), list(ell.rep)) / Fraction(f.lc) ** ell.degree


def has_square_norm(ell: EtaleElement) -> bool:
    n = elt_norm(ell)
    return n != 0 and is_square_rational(n)
