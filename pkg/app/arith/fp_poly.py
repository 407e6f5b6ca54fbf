"""
Polynomials over the prime field F_p as lists of residues, constant first.

Used for good-prime factorization in the Zassenhaus pipeline, for the
residue factorization that seeds p-adic Hensel lifting, and for residue
field arithmetic.
"""
from random import Random
from typing import Dict, List, Optional, Sequence, Tuple

Poly = List[int]


def fp_trim(a: Sequence[int], p: int) -> Poly:
    out = [x % p for x in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def fp_add(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    n = max(len(a), len(b))
    return fp_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def fp_sub(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    n = max(len(a), len(b))
    return fp_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)], p)


def fp_scale(a: Sequence[int], c: int, p: int) -> Poly:
    return fp_trim([c * x for x in a], p)


def fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return fp_trim(out, p)


def fp_divmod(a: Sequence[int], b: Sequence[int], p: int) -> Tuple[Poly, Poly]:
    b = fp_trim(b, p)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = fp_trim(a, p)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    inv = pow(b[-1], -1, p)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        coef = r[k + db] * inv % p
        q[k] = coef
        if coef:
            for j in range(db + 1):
                r[k + j] = (r[k + j] - coef * b[j]) % p
    return fp_trim(q, p), fp_trim(r[:db], p)


def fp_mod(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    return fp_divmod(a, b, p)[1]


def fp_monic(a: Sequence[int], p: int) -> Poly:
    a = fp_trim(a, p)
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def fp_gcd(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    a, b = fp_trim(a, p), fp_trim(b, p)
    while b:
        a, b = b, fp_mod(a, b, p)
    return fp_monic(a, p)


def fp_xgcd(a: Sequence[int], b: Sequence[int], p: int) -> Tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = fp_trim(a, p), fp_trim(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, fp_sub(s0, fp_mul(q, s1, p), p)
        t0, t1 = t1, fp_sub(t0, fp_mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return fp_scale(r0, inv, p), fp_scale(s0, inv, p), fp_scale(t0, inv, p)


def fp_deriv(a: Sequence[int], p: int) -> Poly:
    return fp_trim([i * a[i] for i in range(1, len(a))], p)


def fp_eval(a: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def fp_powmod(base: Sequence[int], e: int, mod: Sequence[int], p: int) -> Poly:
    result: Poly = [1]
    b = fp_mod(base, mod, p)
    while e > 0:
        if e & 1:
            result = fp_mod(fp_mul(result, b, p), mod, p)
        e >>= 1
        if e:
            b = fp_mod(fp_mul(b, b, p), mod, p)
    return fp_mod(result, mod, p)


def _pth_root(a: Sequence[int], p: int) -> Poly:
    """Undo a Frobenius: sum c_i x^(ip) -> sum c_i x^i (coefficients are fixed by Frobenius in F_p)."""
    return fp_trim([a[i] for i in range(0, len(a), p)], p)


def fp_squarefree(a: Sequence[int], p: int) -> List[Tuple[Poly, int]]:
    """Squarefree decomposition of a monic polynomial in characteristic p."""
    f = fp_monic(a, p)
    out: List[Tuple[Poly, int]] = []
    if len(f) <= 1:
        return out
    fd = fp_deriv(f, p)
    if fd:
        c = fp_gcd(f, fd, p)
        w = fp_divmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = fp_gcd(w, c, p)
            fac = fp_divmod(w, y, p)[0]
            if len(fac) > 1:
                out.append((fp_monic(fac, p), i))
            w = y
            c = fp_divmod(c, y, p)[0]
            i += 1
        if len(c) > 1:
            for g, m in fp_squarefree(_pth_root(c, p), p):
                out.append((g, m * p))
    else:
        for g, m in fp_squarefree(_pth_root(f, p), p):
            out.append((g, m * p))
    return out


def fp_distinct_degree(f: Sequence[int], p: int) -> List[Tuple[Poly, int]]:
    """Split a monic squarefree f into products of irreducibles of equal degree."""
    out: List[Tuple[Poly, int]] = []
    f = fp_monic(f, p)
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = fp_powmod(h, p, f, p)
        g = fp_gcd(f, fp_sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            f = fp_divmod(f, g, p)[0]
            h = fp_mod(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def fp_equal_degree(f: Sequence[int], d: int, p: int, rng: Random) -> List[Poly]:
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    f = fp_monic(f, p)
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = fp_trim([rng.randrange(p) for _ in range(n)], p)
        if len(a) < 2:
            continue
        if p == 2:
            # Trace map to F_2: a + a^2 + ... + a^(2^(d-1))
            t = a
            w = a
            for _ in range(d - 1):
                t = fp_mod(fp_mul(t, t, p), f, p)
                w = fp_add(w, t, p)
            g = fp_gcd(f, w, p)
        else:
            g = fp_gcd(f, a, p)
            if 1 < len(g) < len(f):
                break
            w = fp_powmod(a, (p ** d - 1) // 2, f, p)
            g = fp_gcd(f, fp_sub(w, [1], p), p)
        if 1 < len(g) < len(f):
            break
    other = fp_divmod(f, g, p)[0]
    return fp_equal_degree(g, d, p, rng) + fp_equal_degree(other, d, p, rng)


def fp_factor(a: Sequence[int], p: int, seed: int = 0) -> List[Tuple[Poly, int]]:
    """
    Complete factorization of a nonzero polynomial over F_p into monic
    irreducibles with multiplicities (the leading coefficient is dropped).
    """
    rng = Random(seed * 1_000_003 + p)
    merged: Dict[Tuple[int, ...], int] = {}
    for part, mult in fp_squarefree(a, p):
        for block, d in fp_distinct_degree(part, p):
            for irr in fp_equal_degree(block, d, p, rng):
                key = tuple(irr)
                merged[key] = merged.get(key, 0) + mult
    return sorted(((list(k), m) for k, m in merged.items()), key=lambda t: (len(t[0]), t[0]))


def fp_is_irreducible(a: Sequence[int], p: int) -> bool:
    a = fp_trim(a, p)
    if len(a) < 2:
        return False
    facs = fp_factor(a, p)
    return len(facs) == 1 and facs[0][1] == 1


def fp_is_squarefree(a: Sequence[int], p: int) -> bool:
    a = fp_trim(a, p)
    return len(fp_gcd(a, fp_deriv(a, p), p)) == 1


def fp_find_root(a: Sequence[int], p: int) -> Optional[int]:
    """Some root in F_p, by brute force for small p."""
    for x in range(p):
        if fp_eval(a, x, p) == 0:
            return x
    return None
