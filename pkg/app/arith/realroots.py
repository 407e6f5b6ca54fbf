"""
Exact real root isolation with Sturm sequences.

All sign decisions are made on exact rationals. The Sturm chain is built as
a primitive pseudo-remainder sequence with positive scalings only, which
keeps coefficients small without disturbing signs.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import List, Sequence, Tuple

from app.arith.poly import IntPoly, clear_denominators, pderiv, pdivmod, pgcd, primitive_part, trim


def _prem(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """|lc(b)|^(deg a - deg b + 1) * a mod b over ℤ."""
    r = trim(list(a))
    db = len(b) - 1
    lb = b[-1]
    delta = len(r) - 1 - db
    if delta < 0:
        return r
    e = delta + 1
    while r and len(r) - 1 >= db:
        coef = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for j in range(db + 1):
            r[shift + j] -= coef * b[j]
        r = trim(r)
        e -= 1
    r = [lb ** e * x for x in r]
    if lb < 0 and (delta + 1) % 2 == 1:
        r = [-x for x in r]
    return trim(r)


def _positive_primitive(a: Sequence[int]) -> List[int]:
    c = reduce(gcd, (abs(x) for x in a), 0)
    return [x // c for x in a] if c > 1 else list(a)


@lru_cache(maxsize=256)
def sturm_sequence(coeffs: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    """Sturm chain f, f', -rem, ... (up to positive factors) of an integer polynomial."""
    f = trim(list(coeffs))
    chain = [f, pderiv(f)]
    while len(chain[-1]) > 1:
        r = _prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_positive_primitive([-x for x in r]))
    return tuple(tuple(c) for c in chain if c)


def _sign_at(poly: Sequence[int], x: Fraction) -> int:
    a, b = x.numerator, x.denominator
    d = len(poly) - 1
    acc = poly[d]
    bpow = 1
    for i in range(d - 1, -1, -1):
        bpow *= b
        acc = acc * a + poly[i] * bpow
    return (acc > 0) - (acc < 0)


def _variations(signs: List[int]) -> int:
    nonzero = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(nonzero, nonzero[1:]) if u != v)


def sign_variations(chain, x) -> int:
    """Sign variations of a Sturm chain at a rational x, or at +-inf when x is a float infinity."""
    if x == float("inf"):
        return _variations([(c[-1] > 0) - (c[-1] < 0) for c in chain])
    if x == float("-inf"):
        return _variations([((c[-1] > 0) - (c[-1] < 0)) * (-1) ** (len(c) - 1) for c in chain])
    x = Fraction(x)
    return _variations([_sign_at(c, x) for c in chain])


def count_roots(f: IntPoly, lo=float("-inf"), hi=float("inf")) -> int:
    """Number of distinct real roots of f in (lo, hi]."""
    chain = sturm_sequence(f.coeffs)
    return sign_variations(chain, lo) - sign_variations(chain, hi)


def cauchy_bound(f: IntPoly) -> int:
    lc = abs(f.lc)
    return 1 + max(-(-abs(c) // lc) for c in f.coeffs[:-1]) if f.degree > 0 else 1


@dataclass(frozen=True)
class IsolatingInterval:
    """Interval (lo, hi] holding exactly one root of `poly`; f(lo) and f(hi) have opposite signs."""
    lo: Fraction
    hi: Fraction
    poly: Tuple[int, ...]

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self, eps: Fraction) -> "IsolatingInterval":
        """Bisect until the width is below eps."""
        lo, hi = self.lo, self.hi
        s_lo = _sign_at(self.poly, lo)
        while hi - lo >= eps:
            mid = (lo + hi) / 2
            s_mid = _sign_at(self.poly, mid)
            if s_mid == 0:
                return IsolatingInterval(mid - eps / 4, mid + eps / 4, self.poly)
            if s_mid == s_lo:
                lo = mid
            else:
                hi = mid
        return IsolatingInterval(lo, hi, self.poly)

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def approx(self, eps: Fraction = Fraction(1, 10**30)) -> float:
        return float(self.refine(eps).midpoint())


def _nonroot_split(f: Sequence[int], lo: Fraction, hi: Fraction) -> Fraction:
    for num, den in ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (2, 5), (3, 5), (4, 5)):
        mid = lo + (hi - lo) * num / den
        if _sign_at(f, mid) != 0:
            return mid
    k = 7
    while True:
        mid = lo + (hi - lo) / k
        if _sign_at(f, mid) != 0:
            return mid
        k += 1


def isolate_real_roots(f: IntPoly) -> List[IsolatingInterval]:
    """
    Isolate the real roots of a squarefree integer polynomial.

    Args:
        f: Squarefree polynomial (disc != 0)

    Returns:
        Disjoint isolating intervals in increasing order, one per real root
    """
    if f.degree < 1:
        return []
    chain = sturm_sequence(f.coeffs)
    coeffs = list(f.coeffs)
    bound = Fraction(cauchy_bound(f))
    out: List[IsolatingInterval] = []
    stack = [(-bound, bound, sign_variations(chain, -bound), sign_variations(chain, bound))]
    while stack:
        lo, hi, v_lo, v_hi = stack.pop()
        n = v_lo - v_hi
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(lo, hi, tuple(coeffs)))
            continue
        mid = _nonroot_split(coeffs, lo, hi)
        v_mid = sign_variations(chain, mid)
        stack.append((mid, hi, v_mid, v_hi))
        stack.append((lo, mid, v_lo, v_mid))
    out.sort(key=lambda iv: iv.lo)
    return out


def sign_at_root(g: Sequence, interval: IsolatingInterval) -> int:
    """
    Sign of the rational polynomial g at the root isolated by `interval`.

    Raises:
        ValueError: if g vanishes at that root
    """
    g_int, _ = clear_denominators(trim(list(g)))
    g_int = trim(g_int)
    if not g_int:
        raise ValueError("zero polynomial has no sign")
    # A positive denominator never changes signs
    if len(g_int) == 1:
        return 1 if g_int[0] > 0 else -1
    common = pgcd(list(interval.poly), g_int)
    if len(common) > 1:
        common_int = IntPoly(tuple(primitive_part(clear_denominators(common)[0])))
        if count_roots(common_int, interval.lo, interval.hi) > 0:
            raise ValueError("polynomial vanishes at the isolated root")
    g_sqf = pgcd(g_int, pderiv(g_int))
    base = g_int
    if len(g_sqf) > 1:
        base = clear_denominators(pdivmod(g_int, g_sqf)[0])[0]
    g_poly = IntPoly(tuple(base))
    iv = interval
    while True:
        if count_roots(g_poly, iv.lo, iv.hi) == 0 and _sign_at(g_int, iv.hi) != 0:
            return _sign_at(g_int, iv.hi)
        iv = iv.refine(iv.width / 2)
