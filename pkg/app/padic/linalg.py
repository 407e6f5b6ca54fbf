"""
Matrix helpers over ℤ/p^N, F_p and the local ring ℤ_(p) (exact Fractions).

Row-vector convention throughout: a basis is a list of rows and the
coordinates c of v in basis B satisfy c · B = v.
"""
from fractions import Fraction
from typing import List, Sequence

from app.utils.errors import PrecisionExhaustedError

Matrix = List[List[int]]


def vp_int(x: int, p: int, cap: int) -> int:
    """Valuation of x with the convention that 0 has valuation `cap`."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def vp_frac(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def frac_mod(x: Fraction, m: int) -> int:
    """Image of a p-integral rational in ℤ/m."""
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, m) % m


def mat_mul_mod(a: Matrix, b: Matrix, m: int) -> Matrix:
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(cols):
                    acc[j] += x * bk[j]
        out.append([v % m for v in acc])
    return out


def vec_mat_mod(v: Sequence[int], b: Matrix, m: int) -> List[int]:
    cols = len(b[0]) if b else 0
    acc = [0] * cols
    for k, x in enumerate(v):
        if x:
            bk = b[k]
            for j in range(cols):
                acc[j] += x * bk[j]
    return [a % m for a in acc]


def solve_left_mod(basis: Matrix, v: Sequence[int], p: int, m: int) -> List[int]:
    """
    Coordinates c with c · basis = v modulo m = p^N.

    The rows of `basis` must stay independent modulo p (a direct summand),
    so every pivot chosen is a unit.
    """
    k = len(basis)
    if k == 0:
        if any(x % m for x in v):
            raise PrecisionExhaustedError("vector outside an empty span")
        return []
    width = len(basis[0])
    # Work on the transpose: columns of basis^T are the basis rows
    cols = [[basis[r][j] % m for r in range(k)] + [v[j] % m] for j in range(width)]
    rows = cols
    pivot_rows: List[List[int]] = []
    used = [False] * len(rows)
    order: List[int] = []
    for c in range(k):
        idx = next((i for i, r in enumerate(rows) if not used[i] and r[c] % p), None)
        if idx is None:
            raise PrecisionExhaustedError("basis rows are dependent modulo p")
        used[idx] = True
        inv = pow(rows[idx][c], -1, m)
        pr = [x * inv % m for x in rows[idx]]
        rows[idx] = pr
        for i, r in enumerate(rows):
            if i != idx and r[c] % m:
                factor = r[c]
                rows[i] = [(x - factor * y) % m for x, y in zip(r, pr)]
        order.append(idx)
        pivot_rows.append(pr)
    for i, r in enumerate(rows):
        if not used[i] and r[k] % m:
            raise PrecisionExhaustedError("vector is not in the span to working precision")
    return [rows[order[c]][k] for c in range(k)]


def inverse_mod(a: Matrix, p: int, m: int) -> Matrix:
    """Inverse of a matrix invertible modulo p, computed modulo m."""
    n = len(a)
    aug = [[x % m for x in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        idx = next((i for i in range(c, n) if aug[i][c] % p), None)
        if idx is None:
            raise PrecisionExhaustedError("matrix is singular modulo p")
        aug[c], aug[idx] = aug[idx], aug[c]
        inv = pow(aug[c][c], -1, m)
        aug[c] = [x * inv % m for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] % m:
                factor = aug[i][c]
                aug[i] = [(x - factor * y) % m for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def fp_kernel_left(rows: Matrix, p: int) -> Matrix:
    """Basis of {a : sum a_i rows[i] = 0} over F_p."""
    n = len(rows)
    width = len(rows[0]) if rows else 0
    aug = [[x % p for x in row] + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(rows)]
    r = 0
    for c in range(width):
        idx = next((i for i in range(r, n) if aug[i][c]), None)
        if idx is None:
            continue
        aug[r], aug[idx] = aug[idx], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                factor = aug[i][c]
                aug[i] = [(x - factor * y) % p for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[width:] for row in aug[r:]]


def fp_rank(rows: Matrix, p: int) -> int:
    return len(rows) - len(fp_kernel_left(rows, p)) if rows else 0


def fp_reduce_against(span: Matrix, v: Sequence[int], p: int) -> List[int]:
    """Reduce v modulo an echelonized span given as (pivot-normalized) rows."""
    v = [x % p for x in v]
    for row in span:
        c = next(i for i, x in enumerate(row) if x)
        if v[c]:
            factor = v[c]
            v = [(x - factor * y) % p for x, y in zip(v, row)]
    return v


def fp_echelon(rows: Matrix, p: int) -> Matrix:
    """Fully reduced echelon rows (leading entry 1) of the F_p span."""
    basis: Matrix = []
    for row in rows:
        v = fp_reduce_against(basis, row, p)
        if any(v):
            c = next(i for i, x in enumerate(v) if x)
            inv = pow(v[c], -1, p)
            v = [x * inv % p for x in v]
            basis = [
                [(x - b[c] * y) % p for x, y in zip(b, v)] if b[c] else b
                for b in basis
            ]
            basis.append(v)
    return basis


def local_hnf(gens: Sequence[Sequence[Fraction]], p: int, dim: int) -> List[List[Fraction]]:
    """
    Basis of the ℤ_(p)-lattice spanned by rational row vectors, upper
    triangular with p-power pivots. The lattice must have full rank `dim`.
    """
    rows = [[Fraction(x) for x in g] for g in gens if any(g)]
    basis: List[List[Fraction]] = []
    for c in range(dim):
        candidates = [i for i, r in enumerate(rows) if r[c] != 0]
        if not candidates:
            raise ValueError("generators do not span a full-rank lattice")
        best = min(candidates, key=lambda i: vp_frac(rows[i][c], p))
        pivot = rows.pop(best)
        pv = pivot[c]
        unit = pv / Fraction(p) ** vp_frac(pv, p)
        pivot = [x / unit for x in pivot]
        pv = pivot[c]
        new_rows = []
        for r in rows:
            if r[c] != 0:
                factor = r[c] / pv
                r = [x - factor * y for x, y in zip(r, pivot)]
            if any(r):
                new_rows.append(r)
        rows = new_rows
        basis.append(pivot)
    return basis


def frac_inverse(a: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        idx = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[idx] = aug[idx], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def frac_vec_mat(v: Sequence[Fraction], b: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    cols = len(b[0]) if b else 0
    acc = [Fraction(0)] * cols
    for k, x in enumerate(v):
        if x:
            for j in range(cols):
                acc[j] += x * b[k][j]
    return acc


def charpoly_mod(a: Matrix, m: int) -> List[int]:
    """
    Characteristic polynomial det(xI - A) modulo m by Berkowitz's
    division-free algorithm; coefficients constant term first.
    """
    n = len(a)
    if n == 0:
        return [1]
    # Berkowitz: vectors built from leading principal submatrices
    poly = [1, (-a[0][0]) % m]  # leading first during the build
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        sub = [x[:r] for x in a[:r]]
        # Toeplitz column: 1, -a_rr, -R C, -R A C, ...
        t = [1, (-a[r][r]) % m]
        vec = col[:]
        for _ in range(r):
            t.append((-sum(x * y for x, y in zip(row, vec))) % m)
            vec = [sum(sub[i][j] * vec[j] for j in range(r)) % m for i in range(r)]
        new = [0] * (len(poly) + 1)
        for i in range(len(new)):
            acc = 0
            for j in range(len(poly)):
                k = i - j
                if 0 <= k < len(t):
                    acc += t[k] * poly[j]
            new[i] = acc % m
        poly = new
    return list(reversed(poly))
