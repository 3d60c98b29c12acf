"""Dense linear algebra over GF(2).

Rows are stored as Python integers used as bitsets: bit ``j`` of a row is the
entry in column ``j``.  Row XOR is then a single big-int operation, which is
word-parallel for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def popcount(v: int) -> int:
    return v.bit_count()


def parity(v: int) -> int:
    return v.bit_count() & 1


def bits_to_int(bits: Iterable[int]) -> int:
    out = 0
    for j, b in enumerate(bits):
        if int(b) & 1:
            out |= 1 << j
    return out


def int_to_bits(v: int, length: int) -> list[int]:
    return [(v >> j) & 1 for j in range(length)]


@dataclass(frozen=True)
class BinaryMatrix:
    """An ``rows x cols`` matrix over GF(2) with bit-packed rows."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        limit = 1 << self.cols
        for r in self.data:
            if r < 0 or r >= limit:
                raise ValueError(f"row {r:#x} does not fit in {self.cols} columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> BinaryMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(bits_to_int(r) for r in rows))

    @classmethod
    def from_array(cls, arr) -> BinaryMatrix:
        a = np.asarray(arr, dtype=np.int64) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls.from_rows(a.tolist(), cols=a.shape[1])

    @classmethod
    def from_ints(cls, rows: Iterable[int], cols: int) -> BinaryMatrix:
        data = tuple(rows)
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BinaryMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> BinaryMatrix:
        return cls(n, n, tuple(1 << j for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.data):
            out[i] = int_to_bits(r, self.cols)
        return out

    def row_bits(self, i: int) -> list[int]:
        return int_to_bits(self.data[i], self.cols)

    def row_weights(self) -> list[int]:
        return [popcount(r) for r in self.data]

    def transpose(self) -> BinaryMatrix:
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BinaryMatrix(self.cols, self.rows, tuple(out))

    def matmul(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.data:
            acc = 0
            j = 0
            while r:
                if r & 1:
                    acc ^= other.data[j]
                r >>= 1
                j += 1
            out.append(acc)
        return BinaryMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: int) -> int:
        """Return ``M v`` with ``v`` and the result packed as ints."""
        out = 0
        for i, r in enumerate(self.data):
            if parity(r & v):
                out |= 1 << i
        return out

    def vstack(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BinaryMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def is_zero(self) -> bool:
        return not any(self.data)

    def __str__(self) -> str:
        return "\n".join("".join(str(b) for b in self.row_bits(i)) for i in range(self.rows))

    # -- file format -------------------------------------------------------

    def dumps(self) -> str:
        body = str(self)
        return f"{self.rows} {self.cols}\n" + (body + "\n" if self.rows else "")

    @classmethod
    def loads(cls, text: str) -> BinaryMatrix:
        lines = [ln.strip() for ln in text.splitlines()]
        if not lines or not lines[0]:
            raise FormatError("empty matrix file", line=1)
        head = lines[0].split()
        if len(head) != 2 or not all(h.isdigit() for h in head):
            raise FormatError("header must be '<rows> <cols>'", line=1)
        rows, cols = int(head[0]), int(head[1])
        # trailing blank lines are ignored, except as the rows of a 0-column matrix
        while len(lines) - 1 > rows and not lines[-1]:
            lines.pop()
        if len(lines) - 1 != rows:
            raise FormatError(f"expected {rows} matrix rows, found {len(lines) - 1}", line=len(lines))
        data = []
        for k, ln in enumerate(lines[1:], start=2):
            if len(ln) != cols or set(ln) - {"0", "1"}:
                raise FormatError(f"row must be {cols} characters in {{0,1}}", line=k)
            data.append(bits_to_int(int(c) for c in ln))
        return cls(rows, cols, tuple(data))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path: str | Path) -> BinaryMatrix:
        return cls.loads(Path(path).read_text())


class FormatError(ValueError):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _rref_rows(data: Sequence[int], cols: int) -> tuple[list[int], list[int]]:
    rows = list(data)
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        bit = 1 << col
        found = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if found is None:
            continue
        rows[r], rows[found] = rows[found], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(m: BinaryMatrix) -> tuple[BinaryMatrix, int, list[int]]:
    """Reduced row echelon form (leftmost pivot, topmost row first).

    Returns ``(R, rank, pivot_cols)``; rows of ``R`` past ``rank`` are zero.
    """
    rows, pivots = _rref_rows(m.data, m.cols)
    return BinaryMatrix(m.rows, m.cols, tuple(rows)), len(pivots), pivots


def rank(m: BinaryMatrix) -> int:
    return rref(m)[1]


def kernel_basis(m: BinaryMatrix) -> BinaryMatrix:
    """Rows form a basis of ``{v : M v = 0}``; one row per free column."""
    rows, pivots = _rref_rows(m.data, m.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for i, p in enumerate(pivots):
            if (rows[i] >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return BinaryMatrix(len(basis), m.cols, tuple(basis))


def row_basis(m: BinaryMatrix) -> BinaryMatrix:
    rows, pivots = _rref_rows(m.data, m.cols)
    return BinaryMatrix(len(pivots), m.cols, tuple(rows[: len(pivots)]))


def reduce_vector(basis_rows: Sequence[int], pivots: Sequence[int], v: int) -> int:
    for row, p in zip(basis_rows, pivots):
        if (v >> p) & 1:
            v ^= row
    return v


def in_row_span(m: BinaryMatrix, v: int | Sequence[int]) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``m``."""
    if not isinstance(v, int):
        v = list(v)
        if len(v) != m.cols:
            raise ValueError(f"vector length {len(v)} != {m.cols} columns")
        v = bits_to_int(v)
    elif v >> m.cols:
        raise ValueError(f"vector does not fit in {m.cols} columns")
    rows, pivots = _rref_rows(m.data, m.cols)
    return reduce_vector(rows, pivots, v) == 0


def matrix_tensor(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Kronecker product; column ``i*b.cols + j`` pairs columns ``i`` of a and ``j`` of b."""
    out = []
    for ra in a.data:
        for rb in b.data:
            acc = 0
            x = ra
            while x:
                low = x & -x
                acc |= rb << ((low.bit_length() - 1) * b.cols)
                x ^= low
            out.append(acc)
    return BinaryMatrix(a.rows * b.rows, a.cols * b.cols, tuple(out))


def span_elements(rows: Sequence[int]) -> list[int]:
    """All ``2**len(rows)`` combinations (with repeats if dependent)."""
    out = [0]
    for r in rows:
        out += [x ^ r for x in out]
    return out


def solve(m: BinaryMatrix, b: int) -> tuple[int | None, BinaryMatrix]:
    """Solve ``M x = b`` (``b`` packed over rows).

    Returns ``(x0, K)`` where ``x0`` is one solution (``None`` if inconsistent)
    and the rows of ``K`` span the homogeneous solutions.
    """
    aug = [row | (((b >> i) & 1) << m.cols) for i, row in enumerate(m.data)]
    rows, pivots = _rref_rows(aug, m.cols)
    flag = 1 << m.cols
    for row in rows[len(pivots):]:
        if row & flag:
            return None, kernel_basis(m)
    x0 = 0
    for row, p in zip(rows, pivots):
        if row & flag:
            x0 |= 1 << p
    return x0, kernel_basis(m)
