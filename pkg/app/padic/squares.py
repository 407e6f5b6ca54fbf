"""
Square classes K^×/K^×² as F₂ vector spaces with explicit discrete logs.

Odd residue characteristic: basis {π, u} with u a nonsquare unit; the
coordinates are the valuation parity and the quadratic character of the
residue. Residue characteristic 2: basis π, the units 1 + z^j π^k for odd
k < 2e and j < f, and 1 + 4δ with δ of residue trace one (dimension n + 2);
the discrete log peels the unit level by level.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

from app.arith.gf2 import F2Span
from app.padic.algebra import LocalAlgebra, RealAlgebra
from app.padic.field import LocalField, PadicElement
from app.utils.errors import CertificateError, PrecisionExhaustedError
from app.utils.logging_utils import setup_logger

logger = setup_logger("padic.squares")


class FieldSquareClasses:
    """Square-class group of one local field with a fixed basis."""

    def __init__(self, field: LocalField):
        self.field = field
        self.p = field.p
        self.dim = 2 if field.p != 2 else field.degree + 2

    @cached_property
    def labels(self) -> List[str]:
        if self.p != 2:
            return ["pi", "u"]
        out = ["pi"]
        for k in range(1, 2 * self.field.e, 2):
            for j in range(self.field.f):
                out.append(f"1+z^{j}pi^{k}")
        out.append("1+4d")
        return out

    def _z_power(self, j: int) -> List[int]:
        fld = self.field
        acc = [1] + [0] * (fld.f - 1)
        z = [0, 1] + [0] * (fld.f - 2) if fld.f > 1 else [(-fld.phi[0]) % fld.m]
        for _ in range(j):
            acc = fld.u_mul(acc, z)
        return acc

    @cached_property
    def residue_basis_lifts(self) -> List[PadicElement]:
        """Lifts of the F_p-basis 1, z, ..., z^(f-1) of the residue field."""
        return [self.field.from_u(self._z_power(j)) for j in range(self.field.f)]

    @cached_property
    def _level_generators(self) -> Dict[Tuple[int, int], PadicElement]:
        fld = self.field
        gens = {}
        for k in range(1, 2 * fld.e, 2):
            for j in range(fld.f):
                gens[(k, j)] = fld.one + self.residue_basis_lifts[j] * fld.pi ** k
        return gens

    @cached_property
    def _g_star(self) -> PadicElement:
        fld = self.field
        delta = fld.lift_residue(fld.residue_field.trace_one)
        return fld.one + delta * 4

    @cached_property
    def basis(self) -> List[PadicElement]:
        fld = self.field
        if self.p != 2:
            return [fld.pi, fld.lift_residue(fld.residue_field.nonsquare)]
        gens = self._level_generators
        out = [fld.pi]
        for k in range(1, 2 * fld.e, 2):
            for j in range(fld.f):
                out.append(gens[(k, j)])
        out.append(self._g_star)
        return out

    def _index(self, k: int, j: int) -> int:
        return 1 + ((k - 1) // 2) * self.field.f + j

    def dlog(self, x: PadicElement) -> int:
        """Coordinates of the class of x as a bitmask (bit i = basis element i)."""
        if x.is_zero:
            raise PrecisionExhaustedError("square class of an element that is zero at working precision")
        fld = self.field
        bits = x.val & 1
        unit = PadicElement(fld, 0, x.unit, x.rel)
        if self.p != 2:
            if fld.residue_field.chi(fld.residue(unit)):
                bits |= 2
            return bits
        return bits | self._dlog_unit_2(unit)

    def _dlog_unit_2(self, u: PadicElement) -> int:
        fld = self.field
        e = fld.e
        rf = fld.residue_field
        if u.rel < 2 * e + 1:
            raise PrecisionExhaustedError(f"unit known to {u.rel} digits, need {2 * e + 1}")
        bits = 0
        r = fld.residue(u)
        if r != rf.one:
            t = fld.lift_residue(rf.inv(rf.sqrt_char2(r)))
            u = u * t * t
        gens = self._level_generators
        eps2 = rf.inv(fld.residue(fld.from_rational(2)))
        while True:
            d = u - fld.one
            if d.is_zero:
                if d.rel >= 2 * e + 1:
                    return bits
                raise PrecisionExhaustedError("unit level undetermined at working precision")
            k = d.val
            if k >= 2 * e + 1:
                return bits
            tau = fld.residue(d)
            if k == 2 * e:
                w = rf.mul(tau, rf.mul(eps2, eps2))
                if rf.trace_char2(w):
                    bits |= 1 << (self.dim - 1)
                return bits
            if k % 2 == 1:
                for j, c in enumerate(tau):
                    if c % 2:
                        bits ^= 1 << self._index(k, j)
                        u = u * gens[(k, j)]
            else:
                sigma = fld.lift_residue(rf.sqrt_char2(tau))
                s = fld.one + sigma * fld.pi ** (k // 2)
                s_inv = s.inverse()
                u = u * s_inv * s_inv

    def is_square(self, x: PadicElement) -> bool:
        return self.dlog(x) == 0


@dataclass(frozen=True)
class BasisEntry:
    component: int
    label: str


class SquareClassSpace:
    """
    L_v^×/L_v^×² (mode "full") or L_v^×/ℚ_v^×L_v^×² (mode "scalar") for one place.

    The full space is the direct sum of the component spaces. The scalar
    quotient keeps the non-pivot coordinates of the reduced image of
    ℚ_v^×; the full basis vectors at those coordinates represent the quotient
    basis.
    """

    def __init__(self, algebra: Union[LocalAlgebra, RealAlgebra], mode: str = "scalar"):
        if mode not in ("full", "scalar"):
            raise ValueError(f"unknown square class mode {mode!r}")
        self.algebra = algebra
        self.mode = mode
        self.place = algebra.p
        self.fields: List[Optional[FieldSquareClasses]] = []
        self.offsets: List[int] = []
        self.entries: List[BasisEntry] = []
        offset = 0
        if isinstance(algebra, RealAlgebra):
            for i in range(algebra.r1):
                self.fields.append(None)
                self.offsets.append(offset)
                self.entries.append(BasisEntry(i, "-1"))
                offset += 1
        else:
            for i, comp in enumerate(algebra.components):
                fsc = FieldSquareClasses(comp.field)
                self.fields.append(fsc)
                self.offsets.append(offset)
                self.entries.extend(BasisEntry(i, lab) for lab in fsc.labels)
                offset += fsc.dim
        self.full_dim = offset

        self.scalar_span = F2Span()
        if mode == "scalar":
            for r in self.scalar_generators():
                self.scalar_span.add(self.full_dlog_scalar(r))
        pivots = 0
        for v in self.scalar_span.basis():
            pivots |= v & -v
        self.free_positions = [j for j in range(self.full_dim) if not (pivots >> j) & 1]
        self.dim = len(self.free_positions)

    def scalar_generators(self) -> List[int]:
        p = self.place
        if p == 0:
            return [-1]
        if p == 2:
            return [2, -1, 5]
        u = 2
        while pow(u, (p - 1) // 2, p) != p - 1:
            u += 1
        return [p, u]

    # -- discrete logs -------------------------------------------------------

    def full_dlog(self, images: Sequence) -> int:
        """Full-space coordinates of an element given by its component images (signs at ∞)."""
        v = 0
        if isinstance(self.algebra, RealAlgebra):
            for i, s in enumerate(images):
                if s == 0:
                    raise ValueError("zero real component")
                if s < 0:
                    v |= 1 << i
            return v
        for fsc, off, x in zip(self.fields, self.offsets, images):
            v |= fsc.dlog(x) << off
        return v

    def full_dlog_scalar(self, r) -> int:
        if isinstance(self.algebra, RealAlgebra):
            return self.full_dlog([1 if r > 0 else -1] * self.algebra.r1)
        return self.full_dlog(self.algebra.embed_scalar(r))

    def project(self, full: int) -> int:
        """Quotient coordinates of a full-space vector."""
        v = self.scalar_span.reduce(full)
        out = 0
        for i, j in enumerate(self.free_positions):
            if (v >> j) & 1:
                out |= 1 << i
        return out

    def square_class_of(self, images: Sequence) -> int:
        return self.project(self.full_dlog(images))

    def representative(self, i: int) -> int:
        """Full-space vector representing quotient basis vector i."""
        return 1 << self.free_positions[i]

    @property
    def labels(self) -> List[str]:
        return [f"L{self.entries[j].component}:{self.entries[j].label}" for j in self.free_positions]

    def component_slice(self, full: int, i: int) -> int:
        off = self.offsets[i]
        width = self.fields[i].dim if self.fields[i] is not None else 1
        return (full >> off) & ((1 << width) - 1)

    def ramified_pattern(self, full: int) -> List[int]:
        """Valuation parities per component (bit 0 of each finite component slice)."""
        return [self.component_slice(full, i) & 1 for i in range(len(self.fields))]

    def is_unramified_class(self, full: int) -> bool:
        """Some scalar multiple of the class has even valuation in every component (odd p)."""
        pattern = self.ramified_pattern(full)
        if not any(pattern):
            return True
        if isinstance(self.algebra, RealAlgebra):
            return True
        p_pattern = [comp.e & 1 for comp in self.algebra.components]
        return pattern == p_pattern

    def verify_basis(self) -> None:
        """Basis classes are independent: no nonempty product of basis elements is a square."""
        for i, fsc in enumerate(self.fields):
            if fsc is None:
                continue
            for j, b in enumerate(fsc.basis):
                if fsc.dlog(b) != 1 << j:
                    raise CertificateError(f"square class basis of component {i} does not invert its discrete log")


def is_square_local(x: PadicElement) -> bool:
    """
    Square test in a local field.

    Raises:
        PrecisionExhaustedError: x is zero at precision, or (residue characteristic 2)
            its unit part is known to fewer than 2e + 1 digits
    """
    return FieldSquareClasses(x.field).is_square(x)


def build_square_class_space(algebra: Union[LocalAlgebra, RealAlgebra], mode: str = "scalar") -> SquareClassSpace:
    space = SquareClassSpace(algebra, mode)
    space.verify_basis()
    logger.debug(f"square class space at {space.place or 'inf'} ({mode}): full dim {space.full_dim}, dim {space.dim}")
    return space


def is_square_qp(r, p: int) -> bool:
    """Exact square test of a rational number in ℚ_p (p = 0: in ℝ); 0 counts as a square."""
    r = Fraction(r)
    if r == 0:
        return True
    if p == 0:
        return r > 0
    num, den = r.numerator, r.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if v % 2:
        return False
    u = num * den
    if p == 2:
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1
