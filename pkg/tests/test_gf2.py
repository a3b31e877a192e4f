import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from z2top.gf2 import Z2Matrix, Z2Vector, column_space_basis

from .conftest import oracle_rank


def random_dense(seed, rows, cols):
    return np.random.default_rng(seed).integers(0, 2, (rows, cols)).astype(np.uint8)


@given(st.integers(0, 10_000), st.integers(1, 40), st.integers(1, 40))
@settings(max_examples=60, deadline=None)
def test_rank_matches_oracle(seed, rows, cols):
    dense = random_dense(seed, rows, cols)
    assert Z2Matrix.from_dense(dense).rank() == oracle_rank(dense)


@given(st.integers(0, 10_000), st.integers(1, 25), st.integers(1, 25))
@settings(max_examples=40, deadline=None)
def test_nullspace_vectors_are_kernel(seed, rows, cols):
    dense = random_dense(seed, rows, cols)
    m = Z2Matrix.from_dense(dense)
    basis = m.nullspace()
    assert len(basis) == cols - m.rank()
    for v in basis:
        assert m.matvec(v).is_zero()
    if basis:
        stacked = Z2Matrix.from_columns(basis, cols)
        assert stacked.rank() == len(basis)


@given(st.integers(0, 10_000), st.integers(1, 20), st.integers(1, 20))
@settings(max_examples=40, deadline=None)
def test_solve_is_a_solution_when_consistent(seed, rows, cols):
    dense = random_dense(seed, rows, cols)
    m = Z2Matrix.from_dense(dense)
    rng = np.random.default_rng(seed + 1)
    x = Z2Vector.from_support(cols, [i for i in range(cols) if rng.random() < 0.5])
    b = m.matvec(x)
    sol = m.solve(b)
    assert sol is not None
    assert m.matvec(sol) == b


def test_solve_detects_inconsistency():
    m = Z2Matrix.from_dense([[1, 0], [1, 0]])
    b = Z2Vector.from_support(2, [0])
    assert m.solve(b) is None


def test_matmul_matches_dense():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 2, (7, 5)).astype(np.uint8)
    b = rng.integers(0, 2, (5, 9)).astype(np.uint8)
    prod = Z2Matrix.from_dense(a).matmul(Z2Matrix.from_dense(b))
    assert np.array_equal(prod.to_dense(), (a @ b) % 2)


def test_dense_roundtrip_and_transpose():
    dense = random_dense(11, 9, 70)  # spans multiple words
    m = Z2Matrix.from_dense(dense)
    assert np.array_equal(m.to_dense(), dense)
    assert np.array_equal(m.transpose().to_dense(), dense.T)


def test_rref_pivots_deterministic():
    dense = random_dense(5, 12, 12)
    m = Z2Matrix.from_dense(dense)
    r1, p1 = m.rref()
    r2, p2 = m.rref()
    assert p1 == p2 and r1 == r2


def test_column_space_basis_spans():
    dense = random_dense(8, 10, 14)
    m = Z2Matrix.from_dense(dense)
    basis = column_space_basis(m)
    assert len(basis) == m.rank()
    stacked = Z2Matrix.from_columns(basis, m.rows)
    assert stacked.rank() == len(basis)


def test_vector_support_and_xor():
    v = Z2Vector.from_support(130, [0, 64, 129])
    w = Z2Vector.from_support(130, [64, 100])
    assert (v + w).support() == [0, 100, 129]
    assert v.get(64) == 1 and v.get(63) == 0
    v.flip(64)
    assert v.support() == [0, 129]
