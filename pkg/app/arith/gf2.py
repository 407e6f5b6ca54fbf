"""
Linear algebra over GF(2) with rows packed into Python ints.

Bit j of a row is the entry in column j. Vectors are plain ints of a known
width, so XOR is addition and popcount parity is the dot product.
"""
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

F2Vector = int


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def dot(u: F2Vector, v: F2Vector) -> int:
    return parity(u & v)


def to_bits(v: F2Vector, width: int) -> List[int]:
    return [(v >> j) & 1 for j in range(width)]


def from_bits(bits: Iterable[int]) -> F2Vector:
    v = 0
    for j, b in enumerate(bits):
        if b & 1:
            v |= 1 << j
    return v


def unit_vector(i: int) -> F2Vector:
    return 1 << i


@dataclass(frozen=True)
class F2Matrix:
    """Matrix over GF(2); `rows[i]` is row i as a bitset of width `ncols`."""
    rows: Tuple[int, ...]
    ncols: int

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "F2Matrix":
        width = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        return cls(tuple(from_bits(r) for r in rows), width)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def apply(self, v: F2Vector) -> F2Vector:
        """M v, with v a column vector of width ncols; result has width nrows."""
        return from_bits(dot(r, v) for r in self.rows)

    def transpose(self) -> "F2Matrix":
        cols = []
        for j in range(self.ncols):
            cols.append(from_bits((r >> j) & 1 for r in self.rows))
        return F2Matrix(tuple(cols), self.nrows)

    def to_lists(self) -> List[List[int]]:
        return [to_bits(r, self.ncols) for r in self.rows]


def f2_row_reduce(m: F2Matrix) -> Tuple[List[int], List[int]]:
    """
    Reduced row echelon form.

    Returns:
        (nonzero reduced rows, pivot column of each row)
    """
    rows = [r for r in m.rows]
    pivots: List[int] = []
    reduced: List[int] = []
    for col in range(m.ncols):
        bit = 1 << col
        idx = next((i for i, r in enumerate(rows) if r & bit), None)
        if idx is None:
            continue
        pivot_row = rows.pop(idx)
        rows = [r ^ pivot_row if r & bit else r for r in rows]
        reduced = [r ^ pivot_row if r & bit else r for r in reduced]
        reduced.append(pivot_row)
        pivots.append(col)
    return reduced, pivots


def f2_rank(m: F2Matrix) -> int:
    return len(f2_row_reduce(m)[1])


def f2_kernel(m: F2Matrix) -> List[F2Vector]:
    """
    Basis of {v : M v = 0}.

    Args:
        m: Matrix over GF(2)

    Returns:
        Linearly independent vectors of width ncols spanning the null space
    """
    reduced, pivots = f2_row_reduce(m)
    pivot_set = set(pivots)
    basis: List[F2Vector] = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, col in zip(reduced, pivots):
            if (row >> free) & 1:
                v |= 1 << col
        basis.append(v)
    return basis


class F2Span:
    """Incrementally maintained row space with reduction against pivots."""

    def __init__(self) -> None:
        self._rows: List[Tuple[int, int]] = []

    def reduce(self, v: F2Vector) -> F2Vector:
        for pivot, row in self._rows:
            if v & pivot:
                v ^= row
        return v

    def add(self, v: F2Vector) -> bool:
        """Insert v; return True when it enlarged the span."""
        v = self.reduce(v)
        if v == 0:
            return False
        pivot = v & -v
        # Keep earlier rows free of the new pivot
        self._rows = [(p, r ^ v if r & pivot else r) for p, r in self._rows]
        self._rows.append((pivot, v))
        return True

    def __contains__(self, v: F2Vector) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self) -> List[F2Vector]:
        return [r for _, r in self._rows]


def f2_in_span(vectors: Iterable[F2Vector], v: F2Vector) -> bool:
    span = F2Span()
    for u in vectors:
        span.add(u)
    return v in span


def f2_dependencies(vectors: Sequence[F2Vector]) -> List[int]:
    """
    Combinations of `vectors` summing to zero, as bitmasks over their indices.

    Each vector is reduced against the running echelon basis while tracking
    which inputs were combined; a vector that reduces to zero yields one
    dependency.
    """
    echelon: List[Tuple[int, int, int]] = []
    deps: List[int] = []
    for idx, v in enumerate(vectors):
        history = 1 << idx
        for pivot, row, hist in echelon:
            if v & pivot:
                v ^= row
                history ^= hist
        if v == 0:
            deps.append(history)
        else:
            echelon.append((v & -v, v, history))
    return deps
