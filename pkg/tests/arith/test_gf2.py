from hypothesis import given, strategies as st

from app.arith.gf2 import F2Matrix, F2Span, dot, f2_dependencies, f2_kernel, f2_rank, from_bits, to_bits

rows = st.lists(st.integers(min_value=0, max_value=2**12 - 1), min_size=1, max_size=10)


@given(rows)
def test_kernel_vectors_are_annihilated(r):
    m = F2Matrix(tuple(r), 12)
    kernel = f2_kernel(m)
    for v in kernel:
        assert m.apply(v) == 0
    assert len(kernel) + f2_rank(m) == 12


@given(rows)
def test_span_dimension_matches_rank(r):
    span = F2Span()
    for v in r:
        span.add(v)
    assert span.dim == f2_rank(F2Matrix(tuple(r), 12))
    for v in r:
        assert v in span


@given(rows)
def test_dependencies_sum_to_zero(r):
    for dep in f2_dependencies(r):
        acc = 0
        for i, v in enumerate(r):
            if (dep >> i) & 1:
                acc ^= v
        assert dep and acc == 0


def test_span_pivots_stay_reduced():
    span = F2Span()
    assert span.add(0b0110)
    assert span.add(0b0011)
    assert not span.add(0b0101)
    basis = span.basis()
    pivots = [v & -v for v in basis]
    for p in pivots:
        assert sum(1 for v in basis if v & p) == 1


def test_bits_round_trip_and_dot():
    assert to_bits(0b1011, 5) == [1, 1, 0, 1, 0]
    assert from_bits([1, 1, 0, 1, 0]) == 0b1011
    assert dot(0b1011, 0b0011) == 0
    assert dot(0b1011, 0b0001) == 1


def test_transpose():
    m = F2Matrix.from_lists([[1, 0, 1], [0, 1, 1]])
    assert m.transpose().to_lists() == [[1, 0], [0, 1], [1, 1]]
