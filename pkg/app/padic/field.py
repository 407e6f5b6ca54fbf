"""
Finite extensions of ℚ_p presented as a tower and their elements.

A field K is U[t]/(E(t)) with U = ℚ_p[z]/(Φ(z)) unramified of degree f and E
Eisenstein of degree e over U; t is the uniformizer π. Integral elements are
flat coordinate vectors over the ℤ_p-basis z^a t^b (index b*f + a) kept
modulo p^N. A nonzero element is π^val times a unit known to `rel`
π-adic digits; zero-at-precision carries a lower bound for its valuation.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from random import Random
from typing import List, Optional, Sequence, Tuple

from app.padic.linalg import charpoly_mod, solve_left_mod, vp_int
from app.padic.residue import FqElement, ResidueField
from app.utils.errors import PrecisionExhaustedError

Coords = Tuple[int, ...]


@dataclass(frozen=True)
class PadicElement:
    """
    Element of a local field at tracked precision.

    Attributes:
        field: The LocalField the element lives in
        val: Valuation in π-units, or None for zero at precision
        unit: Flat coordinates of the unit part (unused for zero)
        rel: Relative precision in π-units; for zero, a lower bound of the valuation
    """
    field: "LocalField"
    val: Optional[int]
    unit: Coords
    rel: int

    @property
    def is_zero(self) -> bool:
        return self.val is None

    def __mul__(self, other) -> "PadicElement":
        return self.field.mul(self, self.field.coerce(other))

    __rmul__ = __mul__

    def __add__(self, other) -> "PadicElement":
        return self.field.add(self, self.field.coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "PadicElement":
        return self.field.neg(self)

    def __sub__(self, other) -> "PadicElement":
        return self.field.add(self, self.field.neg(self.field.coerce(other)))

    def __rsub__(self, other) -> "PadicElement":
        return self.field.add(self.field.coerce(other), self.field.neg(self))

    def __truediv__(self, other) -> "PadicElement":
        return self.field.mul(self, self.field.inv(self.field.coerce(other)))

    def __pow__(self, e: int) -> "PadicElement":
        return self.field.pow(self, e)

    def inverse(self) -> "PadicElement":
        return self.field.inv(self)

    def residue(self) -> FqElement:
        return self.field.residue(self)


class LocalField:
    """
    Unramified-over-Eisenstein tower over ℚ_p.

    Args:
        p: Residue characteristic
        N: Storage precision in p-adic digits
        phi: Monic Φ modulo p^N, constant first, irreducible modulo p
        eis: Coefficients r_0..r_{e-1} (U-elements) with t^e = sum r_b t^b
    """

    def __init__(self, p: int, N: int, phi: Sequence[int], eis: Sequence[Sequence[int]]):
        self.p = p
        self.N = N
        self.m = p ** N
        self.phi = tuple(x % self.m for x in phi)
        self.f = len(self.phi) - 1
        self.e = len(eis)
        self.n = self.e * self.f
        self.eis = tuple(tuple(x % self.m for x in r) for r in eis)
        if self._u_vp(self.eis[0]) != 1:
            raise PrecisionExhaustedError("Eisenstein constant term does not have valuation one")
        for r in self.eis:
            if any(x % p for x in r):
                raise PrecisionExhaustedError("Eisenstein coefficients must be divisible by p")
        self.residue_field = ResidueField(p, tuple(x % p for x in self.phi))

    def __repr__(self) -> str:
        return f"LocalField(p={self.p}, e={self.e}, f={self.f}, N={self.N})"

    @property
    def degree(self) -> int:
        return self.n

    @property
    def full_rel(self) -> int:
        return self.e * self.N

    # -- U = ℤ_p[z]/Φ --------------------------------------------------------

    def _u_vp(self, a: Sequence[int]) -> int:
        return min(vp_int(x % self.m, self.p, self.N) for x in a)

    def u_mul(self, a: Sequence[int], b: Sequence[int]) -> List[int]:
        f, m = self.f, self.m
        if f == 1:
            return [a[0] * b[0] % m]
        c = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        phi = self.phi
        for k in range(2 * f - 2, f - 1, -1):
            ck = c[k] % m
            if ck:
                for i in range(f):
                    c[k - f + i] -= ck * phi[i]
        return [x % m for x in c[:f]]

    # -- integral elements ---------------------------------------------------

    def _blocks(self, x: Sequence[int]) -> List[List[int]]:
        f = self.f
        return [list(x[b * f:(b + 1) * f]) for b in range(self.e)]

    def _flat(self, blocks: Sequence[Sequence[int]]) -> Coords:
        return tuple(c % self.m for blk in blocks for c in blk)

    def int_mul(self, x: Sequence[int], y: Sequence[int]) -> Coords:
        e, f, m = self.e, self.f, self.m
        xb, yb = self._blocks(x), self._blocks(y)
        c = [[0] * f for _ in range(2 * e - 1)]
        for i, u in enumerate(xb):
            if not any(u):
                continue
            for j, w in enumerate(yb):
                if not any(w):
                    continue
                prod = self.u_mul(u, w)
                row = c[i + j]
                for a in range(f):
                    row[a] += prod[a]
        for k in range(2 * e - 2, e - 1, -1):
            ck = [v % m for v in c[k]]
            if any(ck):
                for b in range(e):
                    prod = self.u_mul(ck, self.eis[b])
                    row = c[k - e + b]
                    for a in range(f):
                        row[a] += prod[a]
        return self._flat(c[:e])

    def int_times_t(self, x: Sequence[int]) -> Coords:
        e, f = self.e, self.f
        xb = self._blocks(x)
        top = xb[-1]
        out = [[0] * f] + xb[:-1]
        if any(v % self.m for v in top):
            for b in range(e):
                prod = self.u_mul(top, self.eis[b])
                out[b] = [u + v for u, v in zip(out[b], prod)]
        return self._flat(out)

    def int_scale_p(self, x: Sequence[int], k: int) -> Coords:
        if k >= self.N:
            return (0,) * self.n
        s = self.p ** k
        return tuple(c * s % self.m for c in x)

    def int_times_tpow(self, x: Sequence[int], k: int) -> Coords:
        """x * π^k for k >= 0, using π^e = p ε."""
        q, r = divmod(k, self.e)
        y = tuple(x)
        for _ in range(r):
            y = self.int_times_t(y)
        if q:
            y = self.int_mul(y, self._eps_pow(q))
            y = self.int_scale_p(y, q)
        return y

    def int_valuation(self, x: Sequence[int]) -> Optional[int]:
        best = None
        for b, blk in enumerate(self._blocks(x)):
            if any(v % self.m for v in blk):
                v = self.e * self._u_vp(blk) + b
                if best is None or v < best:
                    best = v
        return best

    def int_divide_p(self, x: Sequence[int], k: int) -> Coords:
        s = self.p ** k
        if any(c % s for c in x):
            raise ArithmeticError("coordinates are not divisible by the requested power of p")
        return tuple((c // s) % self.m for c in x)

    def int_shift_down(self, x: Sequence[int], k: int) -> Tuple[Coords, int]:
        """x / π^k for x of valuation >= k; returns (coords, p-digits lost)."""
        if k == 0:
            return tuple(x), 0
        mm = -(-k // self.e)
        y = self.int_times_tpow(x, mm * self.e - k)
        # y = x π^(me-k) has valuation >= me, so p^m divides its coordinates
        y = self.int_divide_p(tuple(c % self.m for c in y), mm)
        y = self.int_mul(y, self._eps_inv_pow(mm))
        return y, mm

    @cached_property
    def one_coords(self) -> Coords:
        return (1,) + (0,) * (self.n - 1)

    @cached_property
    def _eps(self) -> Coords:
        """ε = π^e / p, a unit."""
        blocks = [[0] * self.f for _ in range(self.e)]
        for b in range(self.e):
            blocks[b] = [c // self.p for c in self.eis[b]]
        return self._flat(blocks)

    @cached_property
    def _eps_inv(self) -> Coords:
        return self.int_unit_inverse(self._eps)

    def _eps_pow(self, k: int) -> Coords:
        return self._int_pow(self._eps, k)

    def _eps_inv_pow(self, k: int) -> Coords:
        return self._int_pow(self._eps_inv, k)

    def _int_pow(self, x: Coords, k: int) -> Coords:
        result = self.one_coords
        base = x
        while k > 0:
            if k & 1:
                result = self.int_mul(result, base)
            k >>= 1
            if k:
                base = self.int_mul(base, base)
        return result

    def mult_matrix(self, x: Sequence[int]) -> List[List[int]]:
        """Rows are basis_i * x in flat coordinates."""
        rows = []
        for i in range(self.n):
            basis = [0] * self.n
            basis[i] = 1
            rows.append(list(self.int_mul(basis, x)))
        return rows

    def int_unit_inverse(self, x: Sequence[int]) -> Coords:
        if self.int_valuation(x) != 0:
            raise PrecisionExhaustedError("element is not a unit at working precision")
        return tuple(solve_left_mod(self.mult_matrix(x), self.one_coords, self.p, self.m))

    # -- elements ------------------------------------------------------------

    def zero(self, bound: Optional[int] = None) -> PadicElement:
        return PadicElement(self, None, (0,) * self.n, self.full_rel if bound is None else bound)

    @cached_property
    def one(self) -> PadicElement:
        return PadicElement(self, 0, self.one_coords, self.full_rel)

    @cached_property
    def pi(self) -> PadicElement:
        return PadicElement(self, 1, self.one_coords, self.full_rel)

    @cached_property
    def eps(self) -> PadicElement:
        return PadicElement(self, 0, self._eps, self.full_rel - self.e)

    def from_integral(self, x: Sequence[int], rel_abs: Optional[int] = None) -> PadicElement:
        """Element from flat integral coordinates known to absolute π-precision rel_abs."""
        abs_prec = self.full_rel if rel_abs is None else rel_abs
        x = tuple(c % self.m for c in x)
        w = self.int_valuation(x)
        if w is None or w >= abs_prec:
            return self.zero(abs_prec)
        unit, lost = self.int_shift_down(x, w)
        return PadicElement(self, w, unit, min(abs_prec - w, self.e * (self.N - lost)))

    def from_u(self, u: Sequence[int]) -> PadicElement:
        """Element of the unramified subfield, given by its z-coordinates."""
        x = [0] * self.n
        for a, c in enumerate(u):
            x[a] = c
        return self.from_integral(x)

    def from_rational(self, r) -> PadicElement:
        r = Fraction(r)
        if r == 0:
            return self.zero()
        num, den = r.numerator, r.denominator
        s = 0
        while num % self.p == 0:
            num //= self.p
            s += 1
        while den % self.p == 0:
            den //= self.p
            s -= 1
        w = num * pow(den, -1, self.m) % self.m
        unit = list(self.one_coords)
        unit[0] = w
        # p^s = π^(es) ε^(-s)
        if s > 0:
            unit = self.int_mul(unit, self._eps_inv_pow(s))
        elif s < 0:
            unit = self.int_mul(unit, self._eps_pow(-s))
        return PadicElement(self, self.e * s, tuple(unit), self.full_rel - self.e if s else self.full_rel)

    def coerce(self, x) -> PadicElement:
        if isinstance(x, PadicElement):
            if x.field is not self:
                raise ValueError("elements of different fields")
            return x
        return self.from_rational(x)

    def mul(self, a: PadicElement, b: PadicElement) -> PadicElement:
        if a.is_zero or b.is_zero:
            lo_a = a.rel if a.is_zero else a.val
            lo_b = b.rel if b.is_zero else b.val
            return self.zero(lo_a + lo_b)
        return PadicElement(self, a.val + b.val, self.int_mul(a.unit, b.unit), min(a.rel, b.rel))

    def inv(self, a: PadicElement) -> PadicElement:
        if a.is_zero:
            raise PrecisionExhaustedError("cannot invert an element that is zero at working precision")
        return PadicElement(self, -a.val, self.int_unit_inverse(a.unit), a.rel)

    def neg(self, a: PadicElement) -> PadicElement:
        if a.is_zero:
            return a
        return PadicElement(self, a.val, tuple((-c) % self.m for c in a.unit), a.rel)

    def pow(self, a: PadicElement, k: int) -> PadicElement:
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = self.one
        base = a
        while k > 0:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def add(self, a: PadicElement, b: PadicElement) -> PadicElement:
        if a.is_zero and b.is_zero:
            return self.zero(min(a.rel, b.rel))
        if a.is_zero or b.is_zero:
            z, x = (a, b) if a.is_zero else (b, a)
            abs_prec = min(z.rel, x.val + x.rel)
            if x.val >= abs_prec:
                return self.zero(abs_prec)
            return PadicElement(self, x.val, x.unit, abs_prec - x.val)
        abs_prec = min(a.val + a.rel, b.val + b.rel)
        m = min(a.val, b.val)
        if m >= abs_prec:
            return self.zero(abs_prec)
        sa = self.int_times_tpow(a.unit, a.val - m)
        sb = self.int_times_tpow(b.unit, b.val - m)
        s = tuple((x + y) % self.m for x, y in zip(sa, sb))
        w = self.int_valuation(s)
        if w is None or m + w >= abs_prec:
            return self.zero(abs_prec)
        unit, lost = self.int_shift_down(s, w)
        val = m + w
        return PadicElement(self, val, unit, min(abs_prec - val, self.e * (self.N - lost)))

    def residue(self, a: PadicElement) -> FqElement:
        """Residue of the unit part."""
        if a.is_zero:
            raise PrecisionExhaustedError("residue of an element that is zero at working precision")
        return self.residue_field.normalize([c % self.p for c in a.unit[:self.f]])

    def lift_residue(self, r: Sequence[int]) -> PadicElement:
        if not any(x % self.p for x in r):
            raise ValueError("cannot lift the zero residue to a unit")
        return self.from_u(list(r))

    def random_integral(self, rng: Random) -> Coords:
        return tuple(rng.randrange(self.m) for _ in range(self.n))

    def charpoly(self, a: PadicElement) -> List[int]:
        """Characteristic polynomial over ℚ_p of an integral element, modulo p^N."""
        if a.is_zero:
            return [0] * self.n + [1]
        if a.val < 0:
            raise ValueError("characteristic polynomial requested for a non-integral element")
        x = self.int_times_tpow(a.unit, a.val)
        return charpoly_mod(self.mult_matrix(x), self.m)

    def norm(self, a: PadicElement) -> Fraction:
        """N_{K/ℚ_p}(a) as p^k·u with the unit u correct to N - f digits."""
        if a.is_zero:
            raise PrecisionExhaustedError("norm of an element that is zero at working precision")
        sign = -1 if self.n % 2 else 1
        unit_norm = sign * self.charpoly(PadicElement(self, 0, a.unit, a.rel))[0]
        pi_unit = (sign * self.charpoly(self.pi)[0] % self.m) // self.p ** self.f
        return Fraction(self.p) ** (self.f * a.val) * Fraction(pi_unit) ** a.val * unit_norm


@lru_cache(maxsize=128)
def qp_field(p: int, N: int) -> LocalField:
    """ℚ_p itself as a trivial tower (Φ = z, E = t - p)."""
    return LocalField(p, N, (0, 1), ((p,),))
