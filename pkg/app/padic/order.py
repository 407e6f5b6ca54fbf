"""
p-maximal orders and their splitting into local fields.

Given a monic squarefree G ∈ ℤ[w], the Round 2 iteration enlarges ℤ_(p)[w]
to the p-maximal order O of ℚ[w]/(G) with exact rational arithmetic.
Idempotents of O/pO (found in the Frobenius-fixed subalgebra and lifted
modulo p^N) split O ⊗ ℤ_p into the rings of integers of the completions;
each piece is then presented as an unramified-over-Eisenstein tower.
"""
from fractions import Fraction
from random import Random
from typing import List, Sequence, Tuple

from app.arith.fp_poly import fp_factor, fp_trim
from app.padic.field import LocalField, PadicElement
from app.padic.linalg import (
    frac_inverse,
    frac_mod,
    frac_vec_mat,
    fp_echelon,
    fp_kernel_left,
    fp_rank,
    fp_reduce_against,
    local_hnf,
    solve_left_mod,
)
from app.utils.errors import PrecisionExhaustedError
from app.utils.logging_utils import setup_logger

logger = setup_logger("padic.order")

Table = List[List[List[int]]]


def _poly_mulmod(a: Sequence[Fraction], b: Sequence[Fraction], g: Sequence[int]) -> List[Fraction]:
    d = len(g) - 1
    c = [Fraction(0)] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    c[i + j] += x * y
    for k in range(2 * d - 2, d - 1, -1):
        ck = c[k]
        if ck:
            for i in range(d):
                c[k - d + i] -= ck * g[i]
    return c[:d]


def _structure_constants(w_basis, w_inv, g) -> List[List[List[Fraction]]]:
    d = len(w_basis)
    table = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            prod = _poly_mulmod(w_basis[i], w_basis[j], g)
            coords = frac_vec_mat(prod, w_inv)
            table[i][j] = coords
            table[j][i] = coords
    return table


def _mul(x: Sequence[int], y: Sequence[int], table: Table, m: int) -> List[int]:
    d = len(x)
    acc = [0] * d
    for i, xi in enumerate(x):
        if xi:
            row_i = table[i]
            for j, yj in enumerate(y):
                if yj:
                    c = xi * yj
                    t = row_i[j]
                    for k in range(d):
                        acc[k] += c * t[k]
    return [a % m for a in acc]


def _pow(x: Sequence[int], k: int, one: Sequence[int], table: Table, m: int) -> List[int]:
    result = list(one)
    base = list(x)
    while k > 0:
        if k & 1:
            result = _mul(result, base, table, m)
        k >>= 1
        if k:
            base = _mul(base, base, table, m)
    return result


def _unit_vec(i: int, d: int) -> List[int]:
    v = [0] * d
    v[i] = 1
    return v


def _frobenius_kernel(table: Table, one: Sequence[int], p: int) -> List[List[int]]:
    """Nilradical of the F_p-algebra with the given table: kernel of x -> x^(p^k), p^k >= dim."""
    d = len(one)
    power = p
    while power < d:
        power *= p
    images = [_pow(_unit_vec(i, d), power, one, table, p) for i in range(d)]
    return fp_kernel_left(images, p)


def p_maximal_order(g: Sequence[int], p: int) -> List[List[Fraction]]:
    """
    Basis (rows, power-basis coordinates) of the p-maximal order of ℚ[w]/(g).

    Args:
        g: Monic integer polynomial, constant first, squarefree over ℚ
        p: Prime

    Returns:
        d rows spanning O ⊗ ℤ_(p)
    """
    d = len(g) - 1
    w_basis = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    rounds = 0
    while True:
        w_inv = frac_inverse(w_basis)
        table = _structure_constants(w_basis, w_inv, g)
        table_p = [[[frac_mod(c, p) for c in table[i][j]] for j in range(d)] for i in range(d)]
        one = [frac_mod(c, p) for c in frac_vec_mat([Fraction(1)] + [Fraction(0)] * (d - 1), w_inv)]
        radical = _frobenius_kernel(table_p, one, p)
        if not radical:
            break
        gens = [[Fraction(x) for x in r] for r in radical] + [
            [Fraction(p if i == j else 0) for j in range(d)] for i in range(d)
        ]
        gamma = local_hnf(gens, p, d)
        gamma_inv = frac_inverse(gamma)
        rows = []
        for i in range(d):
            row: List[int] = []
            for gj in gamma:
                prod = [Fraction(0)] * d
                for l, c in enumerate(gj):
                    if c:
                        t = table[i][l]
                        for k in range(d):
                            prod[k] += c * t[k]
                in_i = frac_vec_mat(prod, gamma_inv)
                row.extend(frac_mod(x, p) for x in in_i)
            rows.append(row)
        multipliers = fp_kernel_left(rows, p)
        if not multipliers:
            break
        gens = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)] + [
            [Fraction(x, p) for x in u] for u in multipliers
        ]
        new_basis = local_hnf(gens, p, d)
        w_basis = [frac_vec_mat(r, w_basis) for r in new_basis]
        rounds += 1
    logger.debug(f"Round 2 at p={p}: degree {d}, {rounds} enlargement(s)")
    return w_basis


class _Component:
    """Arithmetic in e·O with coordinates over a ℤ_p-basis selected from e·ω_j."""

    def __init__(self, basis: List[List[int]], table_o: Table, p: int, m: int):
        self.p, self.m = p, m
        self.basis = basis
        self.dim = len(basis)
        d = self.dim
        self.table = [[None] * d for _ in range(d)]
        for i in range(d):
            for j in range(i, d):
                prod = _mul(basis[i], basis[j], table_o, m)
                c = solve_left_mod(basis, prod, p, m)
                self.table[i][j] = c
                self.table[j][i] = c

    def coords(self, v: Sequence[int]) -> List[int]:
        return solve_left_mod(self.basis, v, self.p, self.m)

    def mul(self, x, y, mod=None) -> List[int]:
        return _mul(x, y, self.table, mod or self.m)

    def mult_rows(self, x) -> List[List[int]]:
        return [self.mul(_unit_vec(i, self.dim), x) for i in range(self.dim)]

    def inverse(self, x, one) -> List[int]:
        return solve_left_mod(self.mult_rows(x), one, self.p, self.m)


def _values(ye: List[int], e: List[int], table_p: Table, p: int) -> List[int]:
    """Distinct F_p values taken by ye on the components under e (roots of its minimal polynomial)."""
    powers = [list(e)]
    while True:
        powers.append(_mul(powers[-1], ye, table_p, p))
        kernel = fp_kernel_left(powers, p)
        if kernel:
            minpoly = fp_trim(kernel[0], p)
            return sorted((-lin[0]) % p for lin, _ in fp_factor(minpoly, p))


def _split_idempotents(table_p: Table, one_p: List[int], p: int, rng: Random) -> List[List[int]]:
    """Primitive idempotents of O/pO, found inside the subalgebra {x : x^p = x}."""
    d = len(one_p)
    images = []
    for i in range(d):
        x = _unit_vec(i, d)
        xp = _pow(x, p, one_p, table_p, p)
        images.append([(a - b) % p for a, b in zip(xp, x)])
    fixed = fp_kernel_left(images, p)
    r = len(fixed)
    idems = [one_p]
    attempts = 0
    while len(idems) < r:
        attempts += 1
        if attempts > 200 * (r + 1):
            raise PrecisionExhaustedError("idempotent splitting did not converge")
        y = [0] * d
        for v in fixed:
            c = rng.randrange(p)
            for k in range(d):
                y[k] = (y[k] + c * v[k]) % p
        new_idems = []
        for e in idems:
            ye = _mul(y, e, table_p, p)
            values = _values(ye, e, table_p, p)
            if len(values) <= 1:
                new_idems.append(e)
                continue
            for c in values:
                part = list(e)
                for c2 in values:
                    if c2 != c:
                        inv = pow((c - c2) % p, -1, p)
                        factor = [(a - c2 * b) * inv % p for a, b in zip(ye, e)]
                        part = _mul(part, factor, table_p, p)
                new_idems.append(part)
        idems = new_idems
    return idems


def _lift_idempotent(e: List[int], table: Table, m: int) -> List[int]:
    for _ in range(2 * m.bit_length() + 4):
        e2 = _mul(e, e, table, m)
        if e2 == e:
            return e
        e3 = _mul(e2, e, table, m)
        e = [(3 * a - 2 * b) % m for a, b in zip(e2, e3)]
    raise PrecisionExhaustedError("idempotent lifting did not stabilise")


def _select_basis(vectors: List[List[int]], p: int) -> List[List[int]]:
    chosen: List[List[int]] = []
    echelon: List[List[int]] = []
    for v in vectors:
        r = fp_reduce_against(echelon, v, p)
        if any(r):
            chosen.append(v)
            echelon = fp_echelon(echelon + [v], p)
    return chosen


def _tower(comp: _Component, one: List[int], p: int, m: int, N: int, rng: Random):
    """Residue generator ζ, uniformizer π̂ and the tower presentation of one component."""
    d = comp.dim
    one_p = [x % p for x in one]
    nil = _frobenius_kernel([[[c % p for c in comp.table[i][j]] for j in range(d)] for i in range(d)], one_p, p)
    nil_ech = fp_echelon(nil, p)
    f = d - len(nil_ech)
    if f <= 0 or d % f:
        raise PrecisionExhaustedError("component residue degree is inconsistent")
    e = d // f

    if f == 1:
        phi = [0, 1]
        zeta = [0] * d
    else:
        for _ in range(500):
            r = [rng.randrange(p) for _ in range(d)]
            powers = [one_p]
            for _ in range(f):
                powers.append(comp.mul(powers[-1], r, p))
            reduced = [fp_reduce_against(nil_ech, v, p) for v in powers]
            if fp_rank(reduced[:f], p) < f:
                continue
            c = solve_left_mod(reduced[:f], reduced[f], p, p)
            phi = [(-x) % p for x in c] + [1]
            break
        else:
            raise PrecisionExhaustedError("no residue field generator found")
        zeta = list(r)
        for _ in range(2 * N.bit_length() + 6):
            val = [0] * d
            dval = [0] * d
            for k in range(f, -1, -1):
                dval = [(a + b) % m for a, b in zip(comp.mul(dval, zeta), val)]
                val = [(a + phi[k] * b) % m for a, b in zip(comp.mul(val, zeta), one)]
            if not any(val):
                break
            step = comp.mul(val, comp.inverse(dval, one))
            zeta = [(a - b) % m for a, b in zip(zeta, step)]
        else:
            raise PrecisionExhaustedError("Teichmüller lift of the residue generator did not converge")

    if e == 1:
        pi_hat = None
    else:
        nil2 = fp_echelon([comp.mul(a, b, p) for a in nil_ech for b in nil_ech], p)
        pi_hat = next((v for v in nil_ech if any(fp_reduce_against(nil2, v, p))), None)
        if pi_hat is None:
            raise PrecisionExhaustedError("no uniformizer found in the maximal ideal")

    zeta_pows = [list(one)]
    for _ in range(f - 1):
        zeta_pows.append(comp.mul(zeta_pows[-1], zeta))
    tower_basis = []
    pi_pow = list(one)
    for b in range(e):
        for a in range(f):
            tower_basis.append(comp.mul(zeta_pows[a], pi_pow))
        if pi_hat is not None:
            pi_pow = comp.mul(pi_pow, pi_hat)
    if pi_hat is None:
        eis = [[p] + [0] * (f - 1)]
    else:
        c = solve_left_mod(tower_basis, pi_pow, p, m)
        eis = [[c[b * f + a] for a in range(f)] for b in range(e)]
    phi_full = [x % m for x in phi]
    field = LocalField(p, N, phi_full, eis)
    return field, tower_basis


def split_order(g: Sequence[int], p: int, N: int, seed: int = 0) -> List[Tuple[LocalField, PadicElement]]:
    """
    Completions of ℚ[w]/(g) at p with the image of w in each.

    Args:
        g: Monic integer polynomial, constant first, squarefree
        p: Prime
        N: Working precision in p-adic digits

    Returns:
        (field, image of w) for every factor of g over ℚ_p
    """
    d = len(g) - 1
    m = p ** N
    rng = Random(seed * 7919 + p)
    w_basis = p_maximal_order(g, p)
    w_inv = frac_inverse(w_basis)
    table_q = _structure_constants(w_basis, w_inv, g)
    table = [[[frac_mod(c, m) for c in table_q[i][j]] for j in range(d)] for i in range(d)]
    table_p = [[[c % p for c in table[i][j]] for j in range(d)] for i in range(d)]
    e_one = [frac_mod(c, m) for c in frac_vec_mat([Fraction(1)] + [Fraction(0)] * (d - 1), w_inv)]
    w_vec = [frac_mod(c, m) for c in frac_vec_mat([Fraction(int(j == 1)) for j in range(d)], w_inv)] if d > 1 else None

    out: List[Tuple[LocalField, PadicElement]] = []
    for idem_p in _split_idempotents(table_p, [x % p for x in e_one], p, rng):
        idem = _lift_idempotent(list(idem_p), table, m)
        generators = [_mul(idem, _unit_vec(j, d), table, m) for j in range(d)]
        comp = _Component(_select_basis(generators, p), table, p, m)
        one = comp.coords(idem)
        field, tower_basis = _tower(comp, one, p, m, N, rng)
        if w_vec is None:
            w_comp = comp.coords(_mul(idem, [(-g[0]) % m], table, m))
        else:
            w_comp = comp.coords(_mul(idem, w_vec, table, m))
        tower_coords = solve_left_mod(tower_basis, w_comp, p, m)
        out.append((field, field.from_integral(tower_coords)))
        logger.debug(f"Component at p={p}: e={field.e}, f={field.f}")
    if sum(fld.degree for fld, _ in out) != d:
        raise PrecisionExhaustedError("component degrees do not add up to the block degree")
    return out
