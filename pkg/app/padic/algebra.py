"""
The local algebras L_v = ℚ_v[x]/(f) as products of fields.

Finite places: f is moved to a monic integral model H (a Möbius change of
variable that keeps the leading coefficient a unit), H is split modulo p into
coprime blocks and Hensel-lifted; blocks with a simple residue factor are
unramified fields outright, repeated-factor blocks go through the p-maximal
order. The real place is described by isolating intervals of the real roots.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from app.arith.fp_poly import fp_factor, fp_mul, fp_trim
from app.arith.integers import valuation
from app.arith.poly import IntPoly, pmul, poly_discriminant
from app.arith.realroots import IsolatingInterval, isolate_real_roots, sign_at_root
from app.arith.zfactor import _symmetric, multifactor_hensel
from app.padic.field import LocalField, PadicElement
from app.padic.order import split_order
from app.utils.config import get_settings
from app.utils.errors import PrecisionExhaustedError
from app.utils.logging_utils import setup_logger

logger = setup_logger("padic.algebra")


@dataclass(frozen=True)
class LocalComponent:
    """One simple factor L_i of L_p, with the images of y (model root) and θ."""
    field: LocalField
    y: PadicElement
    theta: PadicElement

    @property
    def degree(self) -> int:
        return self.field.degree

    @property
    def e(self) -> int:
        return self.field.e

    @property
    def f_res(self) -> int:
        return self.field.f


@dataclass(frozen=True)
class MonicModel:
    """θ = (a·y + b) / (c·y + d) where y is a root of the monic integral H."""
    h: Tuple[int, ...]
    mobius: Tuple[Fraction, Fraction, Fraction, Fraction]
    disc_valuation: int


class LocalAlgebra:
    """
    L_p = ∏ L_i for a finite prime p.

    Attributes:
        p: The prime
        f: The curve polynomial
        components: Simple factors with the image of θ in each
        precision: Storage precision in p-adic digits
        model: The monic model the factorization was computed on
    """

    def __init__(self, p: int, f: IntPoly, components: List[LocalComponent], precision: int, model: MonicModel):
        self.p = p
        self.f = f
        self.components = components
        self.precision = precision
        self.model = model

    def __repr__(self) -> str:
        shape = ", ".join(f"(e={c.e}, f={c.f_res})" for c in self.components)
        return f"LocalAlgebra(p={self.p}, N={self.precision}, [{shape}])"

    @property
    def degrees(self) -> List[int]:
        return [c.degree for c in self.components]

    @property
    def is_unramified(self) -> bool:
        return all(c.e == 1 for c in self.components)

    def embed_scalar(self, r) -> List[PadicElement]:
        return [c.field.from_rational(r) for c in self.components]

    def embed_poly(self, coeffs: Sequence) -> List[PadicElement]:
        """Images of g(θ) in each component, coefficients constant first."""
        out = []
        for comp in self.components:
            acc = comp.field.zero()
            for c in reversed(list(coeffs)):
                acc = acc * comp.theta + comp.field.from_rational(c)
            out.append(acc)
        return out

    def embed_linear(self, a, b=1) -> List[PadicElement]:
        """Images of a - b·θ."""
        return [comp.field.from_rational(a) - comp.theta * comp.field.from_rational(b) for comp in self.components]

    def component_charpolys(self) -> List[List[int]]:
        """Characteristic polynomials over ℚ_p of the model roots y_i, modulo p^N."""
        return [comp.field.charpoly(comp.y) for comp in self.components]


@dataclass(frozen=True)
class RealAlgebra:
    """L_∞ = ℝ^r1 × ℂ^r2; only the real factors carry square classes."""
    f: IntPoly
    roots: Tuple[IsolatingInterval, ...]

    p: int = 0

    @property
    def r1(self) -> int:
        return len(self.roots)

    @property
    def r2(self) -> int:
        return (self.f.degree - self.r1) // 2

    def signs_of_poly(self, coeffs: Sequence) -> List[int]:
        """Signs of g(r_i) at the real roots."""
        return [sign_at_root(coeffs, iv) for iv in self.roots]

    def linear_signs(self, a) -> List[int]:
        """Signs of a - r_i, with 0 where a is the root r_i."""
        a = Fraction(a)
        out = []
        for iv in self.roots:
            sign = None
            while iv.lo < a <= iv.hi:
                if IntPoly(iv.poly)(a) == 0:
                    sign = 0
                    break
                iv = iv.refine(iv.width / 4)
            out.append(sign if sign is not None else (1 if a > iv.hi else -1))
        return out

    def signs_of_linear(self, a) -> List[int]:
        """Signs of a - r_i; a must not be a root."""
        out = self.linear_signs(a)
        if 0 in out:
            raise ValueError("point is a real root of f")
        return out


def real_algebra(f: IntPoly) -> RealAlgebra:
    return RealAlgebra(f, tuple(isolate_real_roots(f)))


def _int_poly_pow(base: Sequence[int], k: int) -> List[int]:
    acc = [1]
    for _ in range(k):
        acc = pmul(acc, base)
    return acc


def monic_model(f: IntPoly, p: int, disc_valuation: int) -> MonicModel:
    """
    A monic integral H whose roots y correspond to the roots θ of f.

    The p-part of the content of f is removed first. When p does not divide the
    leading coefficient c, y = c·θ. Otherwise, if some residue a has f(a) a
    unit, y = f(a)/(θ - a) keeps the discriminant valuation; as a last resort
    y = c·θ with the discriminant valuation grown accordingly.
    """
    coeffs = list(f.coeffs)
    n = len(coeffs) - 1
    k = min(valuation(c, p) for c in coeffs if c)
    coeffs = [c // p ** k for c in coeffs]
    dv = disc_valuation - k * (2 * n - 2)
    lc = coeffs[-1]
    if lc % p:
        h = [coeffs[j] * lc ** (n - 1 - j) for j in range(n)] + [1]
        return MonicModel(tuple(h), (Fraction(1), Fraction(0), Fraction(0), Fraction(lc)), dv)
    f1 = IntPoly(tuple(coeffs))
    for a in range(p):
        L = f1(a)
        if L % p:
            # G(z) = z^n f1(a + 1/z) = sum f1_j (a z + 1)^j z^(n - j)
            g = [0] * (n + 1)
            for j, c in enumerate(coeffs):
                if c:
                    term = pmul(_int_poly_pow([1, a], j), [0] * (n - j) + [c])
                    for i, t in enumerate(term):
                        g[i] += t
            h = [g[j] * L ** (n - 1 - j) for j in range(n)] + [1]
            if g[n] != L:
                raise ArithmeticError("reversed model has an unexpected leading coefficient")
            # θ = a + 1/z and z = y / L
            return MonicModel(tuple(h), (Fraction(a), Fraction(L), Fraction(1), Fraction(0)), dv)
    h = [coeffs[j] * lc ** (n - 1 - j) for j in range(n)] + [1]
    dv += (n - 1) * (n - 2) * valuation(lc, p)
    return MonicModel(tuple(h), (Fraction(1), Fraction(0), Fraction(0), Fraction(lc)), dv)


def _build(f: IntPoly, p: int, N: int, model: MonicModel) -> LocalAlgebra:
    h = list(model.h)
    lift_digits = N + model.disc_valuation + 2
    residue_factors = fp_factor(fp_trim(h, p), p)
    blocks = []
    for phi, mult in residue_factors:
        block = [1]
        for _ in range(mult):
            block = fp_mul(block, phi, p)
        blocks.append((block, mult, len(phi) - 1))
    lifted = multifactor_hensel(h, [b for b, _, _ in blocks], p, lift_digits)
    mod_lift = p ** lift_digits
    m = p ** N
    a, b, c, d = model.mobius

    pieces: List[Tuple[LocalField, PadicElement]] = []
    for (block, mult, deg), lift in zip(blocks, lifted):
        if mult == 1:
            phi_lift = [x % m for x in lift]
            field = LocalField(p, N, phi_lift, [[p] + [0] * (deg - 1)])
            z = [0, 1] + [0] * (deg - 2) if deg > 1 else [(-phi_lift[0]) % m]
            pieces.append((field, field.from_u(z)))
        else:
            exact_block = [_symmetric(x, mod_lift) for x in lift]
            pieces.extend(split_order(exact_block, p, N))

    components = []
    for field, y in pieces:
        num = y * field.from_rational(a) + field.from_rational(b)
        den = y * field.from_rational(c) + field.from_rational(d)
        components.append(LocalComponent(field, y, num / den))
    if sum(comp.degree for comp in components) != f.degree:
        raise PrecisionExhaustedError("local factor degrees do not add up to deg f")
    return LocalAlgebra(p, f, components, N, model)


def starting_precision(disc_valuation: int) -> int:
    return get_settings().precision_factor * (1 + (disc_valuation + 1) // 2)


def qp_factor(
    f: IntPoly,
    p: int,
    disc_valuation: Optional[int] = None,
    precision: Optional[int] = None,
) -> LocalAlgebra:
    """
    Factor f over ℚ_p into fields.

    Args:
        f: Separable integer polynomial
        p: Prime
        disc_valuation: v_p(disc f) when already known
        precision: Starting precision in p-adic digits

    Returns:
        LocalAlgebra with one component per irreducible factor over ℚ_p

    Raises:
        PrecisionExhaustedError: after the configured number of doublings
    """
    if disc_valuation is None:
        disc_valuation = valuation(poly_discriminant(f), p)
    model = monic_model(f, p, disc_valuation)
    N = precision or starting_precision(model.disc_valuation)
    doublings = get_settings().max_doublings
    for attempt in range(doublings + 1):
        try:
            algebra = _build(f, p, N, model)
            logger.debug(f"qp_factor p={p}: {algebra}")
            return algebra
        except PrecisionExhaustedError as e:
            logger.warning(f"qp_factor p={p} at N={N} needs more precision: {e}")
            N *= 2
    raise PrecisionExhaustedError(f"factorization of f over Q_{p} failed after {doublings} doublings")


@lru_cache(maxsize=256)
def cached_local_algebra(coeffs: Tuple[int, ...], p: int, disc_valuation: int) -> LocalAlgebra:
    """Per-process cache keyed by (f, p)."""
    return qp_factor(IntPoly(coeffs), p, disc_valuation)


@lru_cache(maxsize=64)
def cached_real_algebra(coeffs: Tuple[int, ...]) -> RealAlgebra:
    return real_algebra(IntPoly(coeffs))
