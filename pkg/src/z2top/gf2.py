"""Dense GF(2) linear algebra on bit-packed matrices.

Rows are packed 64 columns per uint64 word.  Elimination is plain
Gauss-Jordan with vectorized row XOR; pivot search scans columns left to
right, ties broken by lowest row index, so echelon forms, ranks, kernel
bases and solutions are deterministic for a given input.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

import numpy as np

WORD = 64


def _nwords(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


class Z2Vector:
    """A length-n bit vector over GF(2)."""

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: Optional[np.ndarray] = None):
        self.n = n
        if words is None:
            self.words = np.zeros(_nwords(n), dtype=np.uint64)
        else:
            self.words = words.astype(np.uint64, copy=False)

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> "Z2Vector":
        v = cls(n)
        for i in support:
            v.flip(i)
        return v

    def get(self, i: int) -> int:
        return int((self.words[i // WORD] >> np.uint64(i % WORD)) & np.uint64(1))

    def flip(self, i: int) -> None:
        self.words[i // WORD] ^= np.uint64(1) << np.uint64(i % WORD)

    def set(self, i: int, value: int) -> None:
        if self.get(i) != (value & 1):
            self.flip(i)

    def support(self) -> List[int]:
        out = []
        for w, word in enumerate(self.words):
            word = int(word)
            while word:
                low = word & -word
                out.append(w * WORD + low.bit_length() - 1)
                word ^= low
        return out

    def is_zero(self) -> bool:
        return not self.words.any()

    def copy(self) -> "Z2Vector":
        return Z2Vector(self.n, self.words.copy())

    def __iadd__(self, other: "Z2Vector") -> "Z2Vector":
        self.words ^= other.words
        return self

    def __add__(self, other: "Z2Vector") -> "Z2Vector":
        return Z2Vector(self.n, self.words ^ other.words)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Z2Vector)
            and self.n == other.n
            and bool(np.array_equal(self.words, other.words))
        )

    def __hash__(self):
        return hash((self.n, self.words.tobytes()))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"Z2Vector(n={self.n}, support={self.support()})"


class Z2Matrix:
    """A rows x cols matrix over GF(2), rows bit-packed into uint64 words."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[np.ndarray] = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        else:
            self.data = data.astype(np.uint64, copy=False)

    # -- construction -------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Z2Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Z2Matrix":
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    @classmethod
    def from_dense(cls, array) -> "Z2Matrix":
        a = np.asarray(array, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        m = cls(a.shape[0], a.shape[1])
        for i, j in zip(*np.nonzero(a)):
            m.set(int(i), int(j), 1)
        return m

    @classmethod
    def from_columns(cls, cols: Sequence[Z2Vector], nrows: int) -> "Z2Matrix":
        m = cls(nrows, len(cols))
        for j, v in enumerate(cols):
            for i in v.support():
                m.set(i, j, 1)
        return m

    # -- element access -----------------------------------------------

    def get(self, i: int, j: int) -> int:
        return int((self.data[i, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1))

    def set(self, i: int, j: int, value: int) -> None:
        mask = np.uint64(1) << np.uint64(j % WORD)
        if value & 1:
            self.data[i, j // WORD] |= mask
        else:
            self.data[i, j // WORD] &= ~mask

    def row(self, i: int) -> Z2Vector:
        return Z2Vector(self.cols, self.data[i].copy())

    def column(self, j: int) -> Z2Vector:
        bits = (self.data[:, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1)
        v = Z2Vector(self.rows)
        for i in np.nonzero(bits)[0]:
            v.flip(int(i))
        return v

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for j in range(self.cols):
            out[:, j] = (self.data[:, j // WORD] >> np.uint64(j % WORD)) & np.uint64(1)
        return out

    def copy(self) -> "Z2Matrix":
        return Z2Matrix(self.rows, self.cols, self.data.copy())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Z2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self) -> str:
        return f"Z2Matrix({self.rows}x{self.cols})"

    # -- algebra --------------------------------------------------------

    def matvec(self, v: Z2Vector) -> Z2Vector:
        if v.n != self.cols:
            raise ValueError("dimension mismatch")
        acc = np.bitwise_xor.reduce(self.data & v.words, axis=1)
        # parity of each row's AND with v
        bits = np.zeros(self.rows, dtype=np.uint64)
        x = acc.copy()
        while x.any():
            bits ^= x & np.uint64(1)
            x >>= np.uint64(1)
        out = Z2Vector(self.rows)
        for i in np.nonzero(bits)[0]:
            out.flip(int(i))
        return out

    def matmul(self, other: "Z2Matrix") -> "Z2Matrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = Z2Matrix(self.rows, other.cols)
        for i in range(self.rows):
            acc = np.zeros(out.data.shape[1], dtype=np.uint64)
            r = self.data[i]
            for k in range(self.cols):
                if (r[k // WORD] >> np.uint64(k % WORD)) & np.uint64(1):
                    acc ^= other.data[k]
            out.data[i] = acc
        return out

    def transpose(self) -> "Z2Matrix":
        out = Z2Matrix(self.cols, self.rows)
        dense_col = self.to_dense()
        for i, j in zip(*np.nonzero(dense_col)):
            out.set(int(j), int(i), 1)
        return out

    # -- elimination ----------------------------------------------------

    def rref(self) -> tuple["Z2Matrix", List[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        R = self.copy()
        pivots: List[int] = []
        r = 0
        for c in range(R.cols):
            if r >= R.rows:
                break
            w, b = c // WORD, np.uint64(c % WORD)
            colbits = (R.data[r:, w] >> b) & np.uint64(1)
            nz = np.nonzero(colbits)[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                R.data[[r, p]] = R.data[[p, r]]
            allbits = (R.data[:, w] >> b) & np.uint64(1)
            allbits[r] = 0
            hit = np.nonzero(allbits)[0]
            if hit.size:
                R.data[hit] ^= R.data[r]
            pivots.append(c)
            r += 1
        return R, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> List[Z2Vector]:
        """Deterministic kernel basis: one vector per free column, in
        increasing column order, with 1 at the free column."""
        R, pivots = self.rref()
        pivot_set = set(pivots)
        basis: List[Z2Vector] = []
        pivot_row = {c: i for i, c in enumerate(pivots)}
        for c in range(self.cols):
            if c in pivot_set:
                continue
            v = Z2Vector(self.cols)
            v.flip(c)
            for pc in pivots:
                if R.get(pivot_row[pc], c):
                    v.flip(pc)
            basis.append(v)
        return basis

    def solve(self, b: Z2Vector) -> Optional[Z2Vector]:
        """One solution of A x = b (free variables 0), or None."""
        if b.n != self.rows:
            raise ValueError("dimension mismatch")
        aug = Z2Matrix(self.rows, self.cols + 1)
        aug.data[:, : self.data.shape[1]] = self.data
        for i in b.support():
            aug.set(i, self.cols, 1)
        R, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = Z2Vector(self.cols)
        for i, c in enumerate(pivots):
            if R.get(i, self.cols):
                x.flip(c)
        return x


def column_space_basis(m: Z2Matrix) -> List[Z2Vector]:
    """Columns of m at the pivot positions of its RREF (a basis of im m)."""
    _, pivots = m.rref()
    return [m.column(c) for c in pivots]
