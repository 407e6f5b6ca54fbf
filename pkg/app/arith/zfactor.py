"""
Factorization of integer polynomials (Zassenhaus).

content -> squarefree decomposition -> factorization modulo a good prime ->
quadratic multifactor Hensel lifting past a Mignotte bound -> exhaustive
subset recombination.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import List, Sequence, Tuple

from app.arith.fp_poly import fp_factor, fp_is_squarefree, fp_mul, fp_trim, fp_xgcd
from app.arith.integers import next_prime
from app.arith.poly import (
    IntPoly,
    pderiv,
    pdivmod,
    pgcd,
    pmul,
    primitive_part,
    psub,
    clear_denominators,
    trim,
)
from app.utils.logging_utils import setup_logger

logger = setup_logger("arith.zfactor")


@dataclass(frozen=True)
class PolyFactorization:
    """f = content * prod(factor ** mult); factors primitive with positive leading coefficient."""
    content: int
    factors: Tuple[Tuple[IntPoly, int], ...]

    def expand(self) -> IntPoly:
        acc = IntPoly((self.content,))
        for g, m in self.factors:
            for _ in range(m):
                acc = acc * g
        return acc

    @property
    def is_irreducible(self) -> bool:
        """True for a single factor of multiplicity one with unit content."""
        return abs(self.content) == 1 and len(self.factors) == 1 and self.factors[0][1] == 1


def _symmetric(x: int, m: int) -> int:
    x %= m
    return x - m if x > m // 2 else x


def _zm(a: Sequence[int], m: int) -> List[int]:
    out = [x % m for x in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def _zm_mul(a: Sequence[int], b: Sequence[int], m: int) -> List[int]:
    return _zm(pmul(a, b), m)


def _zm_add(a: Sequence[int], b: Sequence[int], m: int) -> List[int]:
    n = max(len(a), len(b))
    return _zm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], m)


def _zm_sub(a: Sequence[int], b: Sequence[int], m: int) -> List[int]:
    n = max(len(a), len(b))
    return _zm([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)], m)


def _zm_divmod_monic(a: Sequence[int], h: Sequence[int], m: int) -> Tuple[List[int], List[int]]:
    """Division by a monic h modulo m."""
    r = _zm(a, m)
    dh = len(h) - 1
    if len(r) - 1 < dh:
        return [], r
    q = [0] * (len(r) - dh)
    for k in range(len(r) - 1 - dh, -1, -1):
        coef = r[k + dh] % m
        q[k] = coef
        if coef:
            for j in range(dh + 1):
                r[k + j] = (r[k + j] - coef * h[j]) % m
    return _zm(q, m), _zm(r[:dh], m)


def hensel_step(f, g, h, s, t, m):
    """
    One quadratic Hensel step.

    Given f = g*h and s*g + t*h = 1 modulo m with h monic, return
    (g, h, s, t) satisfying the same relations modulo m**2.
    """
    mm = m * m
    e = _zm_sub(f, _zm_mul(g, h, mm), mm)
    q, r = _zm_divmod_monic(_zm_mul(s, e, mm), h, mm)
    g2 = _zm_add(_zm_add(g, _zm_mul(t, e, mm), mm), _zm_mul(q, g, mm), mm)
    h2 = _zm_add(h, r, mm)
    b = _zm_sub(_zm_add(_zm_mul(s, g2, mm), _zm_mul(t, h2, mm), mm), [1], mm)
    c, d = _zm_divmod_monic(_zm_mul(s, b, mm), h2, mm)
    s2 = _zm_sub(s, d, mm)
    t2 = _zm_sub(_zm_sub(t, _zm_mul(t, b, mm), mm), _zm_mul(c, g2, mm), mm)
    return g2, h2, s2, t2


def multifactor_hensel(f: Sequence[int], factors: List[List[int]], p: int, k: int) -> List[List[int]]:
    """
    Lift a factorization f = lc(f) * prod(factors) mod p (factors monic and
    pairwise coprime) to a factorization modulo p**k.
    """
    target = p ** k
    if len(factors) == 1:
        inv = pow(f[-1], -1, target)
        return [_zm([c * inv for c in f], target)]
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    a = [1]
    for u in left:
        a = fp_mul(a, u, p)
    b = [1]
    for u in right:
        b = fp_mul(b, u, p)
    g = fp_trim([c * f[-1] for c in a], p)
    h = b
    _, s, t = fp_xgcd(g, h, p)
    m = p
    while m < target:
        g, h, s, t = hensel_step(f, g, h, s, t, m)
        m *= m
    g, h = _zm(g, target), _zm(h, target)
    return multifactor_hensel(g, left, p, k) + multifactor_hensel(h, right, p, k)


def _mignotte_bound(g: Sequence[int]) -> int:
    norm2 = isqrt(sum(c * c for c in g)) + 1
    return 2 ** (len(g) - 1) * norm2 * abs(g[-1])


def _exact_quotient(a: Sequence[int], b: Sequence[int]):
    q, r = pdivmod(a, b)
    if r or any(Fraction(x).denominator != 1 for x in q):
        return None
    return [int(x) for x in q]


def _choose_prime(g: Sequence[int], tries: int = 3) -> Tuple[int, List[List[int]]]:
    best = None
    p = 2
    found = 0
    while found < tries:
        p = next_prime(p)
        if g[-1] % p == 0:
            continue
        gp = fp_trim(g, p)
        if not fp_is_squarefree(gp, p):
            continue
        facs = [u for u, _ in fp_factor(gp, p)]
        found += 1
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(facs) == 1:
            break
    return best


def _factor_squarefree_primitive(g: List[int]) -> List[List[int]]:
    if len(g) <= 2:
        return [g]
    p, modular = _choose_prime(g)
    if len(modular) == 1:
        return [g]
    bound = 2 * _mignotte_bound(g)
    k = 1
    while p ** k <= bound:
        k += 1
    M = p ** k
    logger.debug(f"Zassenhaus: degree {len(g) - 1}, p={p}, {len(modular)} modular factors, k={k}")
    lifted = multifactor_hensel(g, modular, p, k)

    result: List[List[int]] = []
    current = list(g)
    remaining = list(range(len(lifted)))
    s = 1
    while 2 * s <= len(remaining):
        hit = None
        lc = current[-1]
        for subset in combinations(remaining, s):
            cand = [lc]
            for i in subset:
                cand = _zm_mul(cand, lifted[i], M)
            cand = trim([_symmetric(c, M) for c in cand])
            if not cand or len(cand) < 2:
                continue
            if cand[0] != 0 and (lc * current[0]) % cand[0] != 0:
                continue
            cand = primitive_part(cand)
            quotient = _exact_quotient(current, cand)
            if quotient is not None:
                hit = (subset, cand, quotient)
                break
        if hit is None:
            s += 1
            continue
        subset, cand, quotient = hit
        result.append(cand)
        current = primitive_part(quotient)
        remaining = [i for i in remaining if i not in subset]
    result.append(current)
    return result


def squarefree_decomposition(f: Sequence[int]) -> List[Tuple[List[int], int]]:
    """Yun's algorithm over ℚ; returns primitive integer parts with multiplicities."""
    f = trim(f)
    out: List[Tuple[List[int], int]] = []
    if len(f) <= 1:
        return out
    fd = pderiv(f)
    a0 = pgcd(f, fd)
    b = pdivmod(f, a0)[0]
    c = pdivmod(fd, a0)[0]
    d = psub(c, pderiv(b))
    i = 1
    while len(b) > 1:
        a = pgcd(b, d)
        b = pdivmod(b, a)[0]
        c = pdivmod(d, a)[0]
        d = psub(c, pderiv(b))
        if len(a) > 1:
            ints, _ = clear_denominators(a)
            out.append((primitive_part(ints), i))
        i += 1
    return out


def factor_poly_over_Z(f: IntPoly) -> PolyFactorization:
    """
    Factor a nonzero integer polynomial into irreducibles over ℤ.

    Args:
        f: Nonzero integer polynomial

    Returns:
        PolyFactorization whose expansion equals f exactly
    """
    coeffs = list(f.coeffs)
    if not coeffs:
        raise ValueError("cannot factor the zero polynomial")
    if len(coeffs) == 1:
        return PolyFactorization(content=coeffs[0], factors=())

    factors: List[Tuple[IntPoly, int]] = []
    for part, mult in squarefree_decomposition(coeffs):
        for irr in _factor_squarefree_primitive(part):
            factors.append((IntPoly(tuple(irr)), mult))

    product = IntPoly((1,))
    for g, m in factors:
        for _ in range(m):
            product = product * g
    unit = Fraction(f.lc, product.lc)
    if unit.denominator != 1:
        raise ArithmeticError("factorization does not reproduce the input")
    factors.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return PolyFactorization(content=int(unit), factors=tuple(factors))


def is_irreducible_over_Z(f: IntPoly) -> bool:
    """Irreducible as a polynomial in ℚ[x] of positive degree (content ignored)."""
    if f.degree < 1:
        return False
    fac = factor_poly_over_Z(f)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1
