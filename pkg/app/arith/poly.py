"""
Dense univariate polynomials over ℤ and ℚ.

Coefficient lists are stored constant term first. `IntPoly` is the immutable
integer polynomial used for curve equations; the free functions work on
plain lists of ints or Fractions so the p-adic and étale code can reuse
them without wrapping.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, List, Sequence, Tuple, Union

Number = Union[int, Fraction]


def trim(coeffs: Sequence[Number]) -> List[Number]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(a: Sequence[Number]) -> int:
    """Degree of a trimmed list; -1 for the zero polynomial."""
    return len(a) - 1


def padd(a: Sequence[Number], b: Sequence[Number]) -> List[Number]:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a: Sequence[Number], b: Sequence[Number]) -> List[Number]:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def pscale(a: Sequence[Number], c: Number) -> List[Number]:
    return trim([c * x for x in a])


def pmul(a: Sequence[Number], b: Sequence[Number]) -> List[Number]:
    if not a or not b:
        return []
    out: List[Number] = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def pderiv(a: Sequence[Number]) -> List[Number]:
    return trim([i * a[i] for i in range(1, len(a))])


def peval(a: Sequence[Number], x: Number) -> Number:
    acc: Number = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pdivmod(a: Sequence[Number], b: Sequence[Number]) -> Tuple[List[Fraction], List[Fraction]]:
    """Division with remainder over ℚ."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r: List[Fraction] = [Fraction(x) for x in trim(a)]
    db = len(b) - 1
    lb = Fraction(b[-1])
    if len(r) - 1 < db:
        return [], r
    q: List[Fraction] = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        coef = r[k + db] / lb
        q[k] = coef
        if coef:
            for j in range(db + 1):
                r[k + j] -= coef * b[j]
    return trim(q), trim(r[:db])


def pmod(a: Sequence[Number], b: Sequence[Number]) -> List[Fraction]:
    return pdivmod(a, b)[1]


def pmonic(a: Sequence[Number]) -> List[Fraction]:
    a = trim(a)
    lc = Fraction(a[-1])
    return [Fraction(x) / lc for x in a]


def pgcd(a: Sequence[Number], b: Sequence[Number]) -> List[Fraction]:
    """Monic gcd over ℚ (empty list when both are zero)."""
    a, b = [Fraction(x) for x in trim(a)], [Fraction(x) for x in trim(b)]
    while b:
        a, b = b, pmod(a, b)
    return pmonic(a) if a else []


def pxgcd(a: Sequence[Number], b: Sequence[Number]) -> Tuple[List[Fraction], List[Fraction], List[Fraction]]:
    """Return (g, s, t) with s*a + t*b = g monic, over ℚ."""
    r0, r1 = [Fraction(x) for x in trim(a)], [Fraction(x) for x in trim(b)]
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1))
        t0, t1 = t1, psub(t0, pmul(q, t1))
    lc = r0[-1]
    return pscale(r0, 1 / lc), pscale(s0, 1 / lc), pscale(t0, 1 / lc)


def resultant(a: Sequence[Number], b: Sequence[Number]) -> Fraction:
    """
    Res(a, b) by the Euclidean recursion
    Res(a, b) = (-1)^(mn) lc(b)^(m-k) Res(b, a mod b).
    """
    a, b = [Fraction(x) for x in trim(a)], [Fraction(x) for x in trim(b)]
    if not a or not b:
        return Fraction(0)
    acc = Fraction(1)
    while True:
        m, n = len(a) - 1, len(b) - 1
        if n == 0:
            return acc * b[0] ** m
        r = pmod(a, b)
        if not r:
            return Fraction(0)
        k = len(r) - 1
        if (m * n) % 2 == 1:
            acc = -acc
        acc *= b[-1] ** (m - k)
        a, b = b, r


def content(a: Sequence[int]) -> int:
    return reduce(gcd, (abs(x) for x in a), 0)


def primitive_part(a: Sequence[int]) -> List[int]:
    """Primitive part with positive leading coefficient."""
    a = trim(a)
    if not a:
        return []
    c = content(a)
    if a[-1] < 0:
        c = -c
    return [x // c for x in a]


def clear_denominators(a: Sequence[Number]) -> Tuple[List[int], int]:
    """Return (integer list, d) with a = list / d."""
    d = 1
    for x in a:
        d = d * Fraction(x).denominator // gcd(d, Fraction(x).denominator)
    return [int(Fraction(x) * d) for x in a], d


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients constant term first, trailing zeros stripped."""
    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(c) for c in trim(self.coeffs)))

    @classmethod
    def from_leading_first(cls, coeffs: Iterable[int]) -> "IntPoly":
        return cls(tuple(reversed(list(coeffs))))

    @classmethod
    def from_string(cls, text: str) -> "IntPoly":
        """Parse whitespace (or comma) separated integers, leading coefficient first."""
        parts = text.replace(",", " ").split()
        return cls.from_leading_first(int(p) for p in parts)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def leading_first(self) -> List[int]:
        return list(reversed(self.coeffs))

    def __call__(self, x: Number) -> Number:
        return peval(self.coeffs, x)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(tuple(pmul(self.coeffs, other.coeffs)))

    def __add__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(tuple(padd(self.coeffs, other.coeffs)))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return IntPoly(tuple(psub(self.coeffs, other.coeffs)))

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(pderiv(self.coeffs)))

    def reversed(self, n: int) -> "IntPoly":
        """x^n * f(1/x) for n >= degree."""
        padded = list(self.coeffs) + [0] * (n + 1 - len(self.coeffs))
        return IntPoly(tuple(reversed(padded)))

    def homogeneous_value(self, a: int, b: int, n: int) -> int:
        """b^n f(a/b) as an exact integer, for n >= degree."""
        if not self.coeffs:
            return 0
        d = self.degree
        acc = self.coeffs[d]
        bpow = 1
        for i in range(d - 1, -1, -1):
            bpow *= b
            acc = acc * a + self.coeffs[i] * bpow
        return acc * b ** (n - d)

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (mono == "" or abs(c) != 1) else ("-" if c < 0 else "")
            terms.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def poly_discriminant(f: IntPoly) -> int:
    """
    disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f).

    Args:
        f: Nonconstant integer polynomial

    Returns:
        The exact integer discriminant
    """
    n = f.degree
    if n < 1:
        raise ValueError("discriminant of a constant polynomial")
    if n == 1:
        return 1
    res = resultant(f.coeffs, pderiv(f.coeffs))
    d = res / f.lc
    if (n * (n - 1) // 2) % 2 == 1:
        d = -d
    if d.denominator != 1:
        raise ArithmeticError("non-integral discriminant")
    return int(d)
