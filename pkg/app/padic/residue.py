"""Finite residue fields F_q = F_p[z]/(phi) with elements as coefficient tuples."""
from dataclasses import dataclass
from functools import cached_property
from random import Random
from typing import Tuple

from app.arith.fp_poly import fp_add, fp_mod, fp_mul, fp_sub, fp_trim, fp_xgcd
from app.arith.integers import legendre

FqElement = Tuple[int, ...]


@dataclass(frozen=True)
class ResidueField:
    """F_q with q = p^f, presented by a monic irreducible phi over F_p (constant first)."""
    p: int
    phi: Tuple[int, ...]

    @property
    def f(self) -> int:
        return len(self.phi) - 1

    @property
    def q(self) -> int:
        return self.p ** self.f

    def normalize(self, a) -> FqElement:
        r = fp_mod(list(a), list(self.phi), self.p) if len(a) > self.f else fp_trim(a, self.p)
        return tuple(r) + (0,) * (self.f - len(r))

    @property
    def zero(self) -> FqElement:
        return (0,) * self.f

    @property
    def one(self) -> FqElement:
        return self.normalize([1])

    def from_int(self, n: int) -> FqElement:
        return self.normalize([n % self.p])

    def is_zero(self, a: FqElement) -> bool:
        return not any(x % self.p for x in a)

    def add(self, a: FqElement, b: FqElement) -> FqElement:
        return self.normalize(fp_add(a, b, self.p))

    def sub(self, a: FqElement, b: FqElement) -> FqElement:
        return self.normalize(fp_sub(a, b, self.p))

    def mul(self, a: FqElement, b: FqElement) -> FqElement:
        return self.normalize(fp_mod(fp_mul(a, b, self.p), list(self.phi), self.p))

    def pow(self, a: FqElement, e: int) -> FqElement:
        result = self.one
        base = a
        while e > 0:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def inv(self, a: FqElement) -> FqElement:
        if self.is_zero(a):
            raise ZeroDivisionError("zero has no inverse in the residue field")
        g, s, _ = fp_xgcd(fp_trim(a, self.p), list(self.phi), self.p)
        return self.normalize(s)

    def norm_to_fp(self, a: FqElement) -> int:
        """N_{F_q/F_p}(a) = a^((q-1)/(p-1))."""
        n = self.pow(a, (self.q - 1) // (self.p - 1))
        return n[0] % self.p

    def is_square(self, a: FqElement) -> bool:
        if self.is_zero(a) or self.p == 2:
            return True
        return legendre(self.norm_to_fp(a), self.p) == 1

    def chi(self, a: FqElement) -> int:
        """Quadratic character as a bit: 1 for a nonsquare (odd p only)."""
        return 0 if self.is_square(a) else 1

    def sqrt_char2(self, a: FqElement) -> FqElement:
        """Square root in characteristic 2: a^(q/2)."""
        return self.pow(a, self.q // 2)

    def trace_char2(self, a: FqElement) -> int:
        acc = a
        t = a
        for _ in range(self.f - 1):
            t = self.mul(t, t)
            acc = self.add(acc, t)
        return acc[0] % 2

    @cached_property
    def nonsquare(self) -> FqElement:
        rng = Random(self.q)
        while True:
            a = self.normalize([rng.randrange(self.p) for _ in range(self.f)])
            if not self.is_zero(a) and not self.is_square(a):
                return a

    @cached_property
    def trace_one(self) -> FqElement:
        """Some element of absolute trace 1 (characteristic 2)."""
        for j in range(self.f):
            e = self.normalize([0] * j + [1])
            if self.trace_char2(e):
                return e
        raise ArithmeticError("trace form vanishes on the power basis")

    def minus_one_is_square(self) -> bool:
        return self.q % 4 == 1 or self.p == 2
