"""
Integer primitives: primality, factorization and square tests.

Factorization is trial division by a sieved prime table followed by
Pollard's rho with Brent's cycle detection. The rho budget is counted in
iterations across all restarts; when it runs out the remaining composite is
kept as an explicit cofactor so callers can refuse to continue.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from random import Random
from typing import Dict, List, Optional, Tuple

import gmpy2

from app.utils.logging_utils import setup_logger

logger = setup_logger("arith.integers")

# Deterministic for n < 3.3 * 10**24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


@lru_cache(maxsize=4)
def primes_up_to(bound: int) -> Tuple[int, ...]:
    """Sieve of Eratosthenes; cached because the trial bound rarely changes."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, bound + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _miller_rabin_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 40) -> bool:
    """
    Miller-Rabin primality test.

    Deterministic below 3.3e24 using the first thirteen prime bases; above
    that, `rounds` bases drawn from an RNG seeded by n so repeated calls agree.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_LIMIT:
        return all(_miller_rabin_round(n, d, s, a) for a in _MR_BASES)
    rng = Random(n)
    return all(_miller_rabin_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(rounds))


def pollard_rho_brent(n: int, budget: int, rng: Random) -> Tuple[Optional[int], int]:
    """
    Pollard's rho with Brent's cycle detection and batched gcds.

    Args:
        n: Odd composite to split
        budget: Maximum number of polynomial iterations
        rng: Source of starting values

    Returns:
        (nontrivial factor or None, iterations used)
    """
    used = 0
    mz = gmpy2.mpz(n)
    while used < budget:
        y = gmpy2.mpz(rng.randrange(1, n))
        c = gmpy2.mpz(rng.randrange(1, n))
        m = 128
        g = r = q = gmpy2.mpz(1)
        x = ys = y
        while g == 1 and used < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % mz
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % mz
                    q = q * abs(x - y) % mz
                g = gmpy2.gcd(q, mz)
                k += m
            used += r
            r *= 2
        if g == mz:
            # Batched product collapsed; step back one at a time
            g = gmpy2.mpz(1)
            while g == 1:
                ys = (ys * ys + c) % mz
                g = gmpy2.gcd(abs(x - ys), mz)
        if 1 < g < mz:
            return int(g), used
    return None, used


@dataclass(frozen=True)
class FactoredInteger:
    """
    sign * prod(p**e) * cofactor, with cofactor == 1 when the factorization
    is complete. A cofactor > 1 is composite (or untested) and free of primes
    below the trial bound.
    """
    sign: int
    factors: Tuple[Tuple[int, int], ...]
    cofactor: int = 1

    @property
    def is_complete(self) -> bool:
        return self.cofactor == 1

    @property
    def value(self) -> int:
        n = self.sign * self.cofactor
        for p, e in self.factors:
            n *= p ** e
        return n

    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def as_dict(self) -> Dict[str, object]:
        return {
            "sign": self.sign,
            "factors": [[p, e] for p, e in self.factors],
            "cofactor": self.cofactor,
        }


def factor_integer(n: int, trial_bound: int = 10**6, rho_budget: int = 10**8) -> FactoredInteger:
    """
    Factor a nonzero integer.

    Args:
        n: Integer to factor, n != 0
        trial_bound: Trial division bound
        rho_budget: Total Pollard-rho iterations allowed

    Returns:
        FactoredInteger; check `is_complete` before relying on the prime list
    """
    if n == 0:
        raise ValueError("cannot factor zero")
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: Dict[int, int] = {}

    for p in primes_up_to(trial_bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if 1 < n <= trial_bound or (n > 1 and n < trial_bound * trial_bound):
        # No prime factor below trial_bound is left, so n is prime
        found[n] = found.get(n, 0) + 1
        n = 1

    cofactor = 1
    if n > 1:
        rng = Random(n)
        pending = [n]
        remaining = rho_budget
        while pending:
            m = pending.pop()
            if gmpy2.is_square(m):
                r = isqrt(m)
                pending.extend([r, r])
                continue
            if is_probable_prime(m):
                found[m] = found.get(m, 0) + 1
                continue
            d, used = pollard_rho_brent(m, remaining, rng)
            remaining -= used
            if d is None:
                logger.warning(f"Pollard rho budget exhausted; cofactor with {m.bit_length()} bits left")
                cofactor *= m
                continue
            pending.extend([d, m // d])

    factors = tuple(sorted(found.items()))
    return FactoredInteger(sign=sign, factors=factors, cofactor=cofactor)


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def is_square_int(n: int) -> bool:
    return n >= 0 and bool(gmpy2.is_square(n))


def is_square_rational(x: Fraction) -> bool:
    """True iff x is the square of a rational number (0 counts)."""
    x = Fraction(x)
    return is_square_int(x.numerator) and is_square_int(x.denominator)


def squarefree_part(n: int, primes: Optional[List[int]] = None) -> int:
    """Signed squarefree kernel of n using the given primes (or a full factorization)."""
    if primes is None:
        fac = factor_integer(n)
        if not fac.is_complete:
            raise ValueError("squarefree part needs a complete factorization")
        primes = fac.primes()
    s = -1 if n < 0 else 1
    n = abs(n)
    for p in primes:
        if valuation(n, p) % 2 == 1:
            s *= p
    return s


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> Tuple[int, int]:
    """Combine x = r1 mod m1 and x = r2 mod m2 for coprime moduli."""
    g = gcd(m1, m2)
    if g != 1:
        raise ValueError("moduli must be coprime")
    inv = pow(m1, -1, m2)
    x = (r1 + (r2 - r1) * inv % m2 * m1) % (m1 * m2)
    return x, m1 * m2


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    n += 1
    while not is_probable_prime(n):
        n += 1
    return n
