"""
Rational points of bounded height on y² = f(x).

x = a/b in lowest terms with |a|, b ≤ H. F(a, b) = b^(2g+2) f(a/b) must be a
square; candidates are sieved with square tables modulo small moduli before
the exact test.
"""
from fractions import Fraction
from math import gcd, isqrt
from typing import List, Optional

import gmpy2
import numpy as np

from app.etale.curve import Curve
from app.mu.image import Point
from app.utils.logging_utils import setup_logger

logger = setup_logger("pipeline.point_search")

SIEVE_MODULI = (16, 9, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _square_table(curve: Curve, m: int) -> np.ndarray:
    """T[a mod m, b mod m]: F(a, b) is a square modulo m."""
    squares = np.zeros(m, dtype=bool)
    squares[[(x * x) % m for x in range(m)]] = True
    n = curve.degree
    table = np.zeros((m, m), dtype=bool)
    for a in range(m):
        for b in range(m):
            table[a, b] = squares[curve.f.homogeneous_value(a, b, n) % m]
    return table


def points_at_infinity(curve: Curve) -> List[Point]:
    if not curve.has_points_at_infinity():
        return []
    r = isqrt(curve.c)
    return [(None, Fraction(r)), (None, Fraction(-r))]


def search_rational_points(curve: Curve, height: int, first_only: bool = False) -> List[Point]:
    """
    Points with x of height at most `height`, plus the points at infinity.

    Args:
        curve: The curve
        height: Bound H on |a| and b for x = a/b
        first_only: Stop at the first point found

    Returns:
        Points (x, y), both signs of y; x = None at infinity
    """
    if height < 1:
        raise ValueError("height bound must be at least 1")
    found: List[Point] = points_at_infinity(curve)
    if first_only and found:
        return found[:1]

    n = curve.degree
    half = n // 2
    tables = [(m, _square_table(curve, m)) for m in SIEVE_MODULI]
    a_values = np.arange(-height, height + 1, dtype=np.int64)
    # smallest |a| first
    a_values = a_values[np.argsort(np.abs(a_values), kind="stable")]
    a_residues = {m: a_values % m for m, _ in tables}

    candidates = 0
    for b in range(1, height + 1):
        mask = np.ones(a_values.shape, dtype=bool)
        for m, table in tables:
            mask &= table[a_residues[m], b % m]
        for a in a_values[mask]:
            a = int(a)
            if gcd(a, b) != 1:
                continue
            candidates += 1
            value = curve.f.homogeneous_value(a, b, n)
            if value < 0 or not gmpy2.is_square(value):
                continue
            x = Fraction(a, b)
            y = Fraction(int(gmpy2.isqrt(value)), b ** half)
            found.append((x, y))
            if first_only:
                logger.debug(f"point {x}, {y} on {curve}")
                return found
            if y:
                found.append((x, -y))
    logger.debug(f"point search on {curve} to height {height}: {candidates} sieved candidates, {len(found)} points")
    return found


def first_point(curve: Curve, height: int) -> Optional[Point]:
    points = search_rational_points(curve, height, first_only=True)
    return points[0] if points else None
