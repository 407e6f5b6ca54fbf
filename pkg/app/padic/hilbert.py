"""
Quadratic Hilbert symbols with values in ½ℤ/ℤ, represented as bits.

Over a local field the symbol is a symmetric bilinear form on the square
class space, so it is stored as a Gram matrix in the fixed basis. Odd
residue characteristic uses the tame formula. Residue characteristic 2 reads
the form off the norm groups: for each basis class b the norms of a
generating set of K(√b)^× fill the hyperplane orthogonal to b.
"""
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from app.arith.gf2 import F2Span, dot
from app.arith.integers import legendre
from app.padic.field import LocalField, PadicElement
from app.padic.squares import FieldSquareClasses, SquareClassSpace
from app.utils.errors import CertificateError, PrecisionExhaustedError
from app.utils.logging_utils import setup_logger

logger = setup_logger("padic.hilbert")

HALF = Fraction(1, 2)


def _bit_to_value(bit: int) -> Fraction:
    return HALF if bit & 1 else Fraction(0)


def hilbert_symbol_qp(a, b, p: int) -> Fraction:
    """
    Closed-form (a, b) over ℚ_p for nonzero rationals; p = 0 is the real place.

    Returns:
        0 or 1/2
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if p == 0:
        return _bit_to_value(int(a < 0 and b < 0))

    def split(x: Fraction):
        num, den = x.numerator, x.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        return v, num * den

    alpha, u = split(a)
    beta, w = split(b)
    if p != 2:
        eps = (p - 1) // 2
        bit = (alpha * beta * eps) & 1
        if beta & 1 and legendre(u, p) == -1:
            bit ^= 1
        if alpha & 1 and legendre(w, p) == -1:
            bit ^= 1
        return _bit_to_value(bit)
    u8, w8 = u % 8, w % 8

    def eps2(x: int) -> int:
        return ((x - 1) // 2) & 1

    def omega(x: int) -> int:
        return ((x * x - 1) // 8) & 1

    bit = eps2(u8) * eps2(w8) + alpha * omega(w8) + beta * omega(u8)
    return _bit_to_value(bit & 1)


class FieldHilbert:
    """Gram matrix of the Hilbert symbol on one local field's square classes."""

    def __init__(self, classes: FieldSquareClasses):
        self.classes = classes
        self.field = classes.field
        self.gram = self._tame_gram() if self.field.p != 2 else self._norm_group_gram()

    def _tame_gram(self) -> List[int]:
        minus_one_nonsquare = 0 if self.field.residue_field.minus_one_is_square() else 1
        # rows as bitmasks: (π,π) = χ(-1), (π,u) = 1, (u,u) = 0
        return [minus_one_nonsquare | 2, 1]

    def _norm_group_gram(self) -> List[int]:
        gram = [self.norm_functional(b) for b in self.classes.basis]
        dim = self.classes.dim
        for j in range(dim):
            for i in range(dim):
                if ((gram[j] >> i) & 1) != ((gram[i] >> j) & 1):
                    raise CertificateError("2-adic Hilbert form is not symmetric")
        logger.debug(f"2-adic Gram matrix for {self.field}: {gram}")
        return gram

    def _unit_defect(self, u: PadicElement) -> Tuple[PadicElement, int]:
        """
        A unit 1 + t in the square class of u with v(t) odd and below 2e, or v(t) >= 2e.

        Returns:
            t and its valuation (2e when the class is unramified or trivial)
        """
        fld = self.field
        rf = fld.residue_field
        two_e = 2 * fld.e
        r = fld.residue(u)
        if r != rf.one:
            s = fld.lift_residue(rf.inv(rf.sqrt_char2(r)))
            u = u * s * s
        while True:
            t = u - fld.one
            if t.is_zero:
                if t.rel >= two_e:
                    return t, two_e
                raise PrecisionExhaustedError("unit defect undetermined at working precision")
            d = t.val
            if d >= two_e or d % 2:
                return t, min(d, two_e)
            # 1 + t = (1 + σπ^(d/2))² (1 + t') with v(t') > d since d < 2e
            sigma = fld.lift_residue(rf.sqrt_char2(fld.residue(t)))
            s_inv = (fld.one + sigma * fld.pi ** (d // 2)).inverse()
            u = u * s_inv * s_inv

    def norm_generators(self, b: PadicElement) -> Optional[List[PadicElement]]:
        """
        Norms from K(√b) whose square classes span the norm group, for b not a square.

        M = K(√b) has a uniformizer π_M and its units are generated modulo squares
        by the Teichmüller lifts and 1 + ω·π^a·π_M for ω over residue basis lifts
        and 0 <= a < 2e; the even levels and the Teichmüller part have square norms.
        None when M/K is unramified.
        """
        fld = self.field
        two_e = 2 * fld.e
        omegas = self.classes.residue_basis_lifts
        if b.val & 1:
            # π_M = √b1 with b1 = b / π^(v-1)
            b1 = PadicElement(fld, 1, b.unit, b.rel)
            gens = [-b1, fld.one - b1]
            for a in range(two_e):
                for w in omegas:
                    gens.append(fld.one - w * w * b1 * fld.pi ** (2 * a))
            return gens
        t, d = self._unit_defect(PadicElement(fld, 0, b.unit, b.rel))
        if d >= two_e:
            return None
        # π_M = (√(1+t) - 1) / π^c; N(π_M) is -t up to squares and N(1 + ωπ^a π_M) = 1 - 2x - t x² with x = ωπ^(a-c)
        c = (d - 1) // 2
        gens = [-t]
        for a in range(two_e):
            shift = fld.pi ** (a - c)
            for w in omegas:
                x = w * shift
                gens.append(fld.one - x * 2 - t * x * x)
        return gens

    def norm_functional(self, b: PadicElement) -> int:
        """
        Row r with (b, x) = r · dlog(x), read off the norm group of K(√b).

        Raises:
            CertificateError: the norm classes do not span a hyperplane
        """
        classes = self.classes
        dim = classes.dim
        if classes.dlog(b) == 0:
            return 0
        gens = self.norm_generators(b)
        if gens is None:
            # unramified quadratic extension: the norms are the even valuation classes
            return 1
        span = F2Span()
        for g in gens:
            if not g.is_zero:
                span.add(classes.dlog(g))
        if span.dim != dim - 1:
            raise CertificateError(f"norm group of {b} spans dimension {span.dim}, expected {dim - 1}")
        row = 0
        for j in range(dim):
            if (1 << j) not in span:
                row |= 1 << j
        return row

    def symbol_bits(self, u: int, v: int) -> int:
        """u^T G v for coordinate bitmasks."""
        acc = 0
        for j, row in enumerate(self.gram):
            if (u >> j) & 1:
                acc ^= dot(row, v)
        return acc

    def hilbert_symbol(self, a: PadicElement, b: PadicElement) -> Fraction:
        return _bit_to_value(self.symbol_bits(self.classes.dlog(a), self.classes.dlog(b)))


@lru_cache(maxsize=512)
def _field_hilbert(field: LocalField) -> FieldHilbert:
    return FieldHilbert(FieldSquareClasses(field))


def field_hilbert(classes: FieldSquareClasses) -> FieldHilbert:
    return _field_hilbert(classes.field)


def hilbert_symbol(a, b) -> Fraction:
    """
    (a, b) over a local field (PadicElement arguments) or over ℝ (rationals or signs).
    """
    if isinstance(a, PadicElement):
        fld = a.field
        return _field_hilbert(fld).hilbert_symbol(a, fld.coerce(b))
    return _bit_to_value(int(a < 0 and b < 0))


class PlaceForm:
    """The sum of the component Hilbert forms on the full square class space of a place."""

    def __init__(self, space: SquareClassSpace):
        self.space = space
        self.forms = [field_hilbert(fsc) if fsc is not None else None for fsc in space.fields]

    def component_row(self, i: int, u: int) -> int:
        """Row vector u^T G_i of component i as a component-local bitmask."""
        form = self.forms[i]
        if form is None:
            # ℝ: (a, b) = 1/2 iff both negative
            return u & 1
        acc = 0
        for j, row in enumerate(form.gram):
            if (u >> j) & 1:
                acc ^= row
        return acc

    def functional(self, ell_full: int) -> int:
        """Full-space row r with ⟨ℓ, m⟩ = r · dlog(m)."""
        row = 0
        for i, off in enumerate(self.space.offsets):
            row |= self.component_row(i, self.space.component_slice(ell_full, i)) << off
        return row

    def pair(self, ell_full: int, m_full: int) -> int:
        return dot(self.functional(ell_full), m_full)


def pairing_value(ell_images: Sequence, m_images: Sequence, space: SquareClassSpace) -> Fraction:
    """
    ⟨ℓ, m⟩_v as the sum of component Hilbert symbols.

    Args:
        ell_images: Component images of ℓ (PadicElements, or signs at ∞)
        m_images: Component images of m
        space: Square class space of the place

    Returns:
        0 or 1/2
    """
    form = PlaceForm(space)
    return _bit_to_value(form.pair(space.full_dlog(ell_images), space.full_dlog(m_images)))
