r"""Exact matrices of nonnegative arbitrary-precision integers.

Transition and intersection counts must never be rounded: stretch factors
are certified against matrices whose entries grow like :math:`\lambda^n`,
so everything here is plain Python ``int`` arithmetic on immutable
tuple-of-tuple storage.  Instances are safe to share between threads and
usable as dict keys.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


class IntMatrix:
    """An immutable matrix with nonnegative integer entries."""

    __slots__ = ("_entries", "rows", "cols")

    def __init__(self, entries: Iterable[Iterable[int]]):
        grid = tuple(tuple(row) for row in entries)
        if not grid:
            raise ValueError("matrix needs at least one row")
        width = len(grid[0])
        if width == 0:
            raise ValueError("matrix needs at least one column")
        for row in grid:
            if len(row) != width:
                raise ValueError("ragged rows")
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValueError(f"entry {x!r} is not an integer")
                if x < 0:
                    raise ValueError(f"entry {x} is negative")
        object.__setattr__(self, "_entries", grid)
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", width)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "IntMatrix":
        cols = rows if cols is None else cols
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def unit(cls, n: int, i: int, j: int, value: int = 1) -> "IntMatrix":
        """n-by-n matrix with a single nonzero entry at (i, j)."""
        grid = [[0] * n for _ in range(n)]
        grid[i][j] = value
        return cls(grid)

    # -- access ------------------------------------------------------

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self._entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._entries[i]

    @property
    def entries(self) -> tuple[tuple[int, ...], ...]:
        return self._entries

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self._entries)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (i, j, entry) for every nonzero entry."""
        for i, row in enumerate(self._entries):
            for j, x in enumerate(row):
                if x:
                    yield i, j, x

    def max_entry(self) -> int:
        return max(max(row) for row in self._entries)

    def is_zero(self) -> bool:
        return all(not any(row) for row in self._entries)

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in matrix sum")
        return IntMatrix(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self._entries, other._entries)
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return mat_mul(self, other)

    def __pow__(self, k: int) -> "IntMatrix":
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative matrix power")
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = mat_mul(result, base)
            k >>= 1
            if k:
                base = mat_mul(base, base)
        return result

    def scale(self, c: int) -> "IntMatrix":
        if c < 0:
            raise ValueError("negative scale")
        return IntMatrix(tuple(c * x for x in row) for row in self._entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self._entries))

    # -- comparisons / conversions ------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def dominates(self, other: "IntMatrix") -> bool:
        """Entrywise >= comparison."""
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in comparison")
        return all(
            a >= b for ra, rb in zip(self._entries, other._entries)
            for a, b in zip(ra, rb)
        )

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self._entries]

    def to_float_array(self):
        import numpy as np

        return np.array(self._entries, dtype=float)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._entries)
        return f"IntMatrix[{body}]"


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Exact product of two IntMatrix values."""
    if a.cols != b.rows:
        raise ValueError(
            f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}"
        )
    bt = tuple(zip(*b.entries))
    return IntMatrix(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
        for row in a.entries
    )


def mat_vec(a: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    """Exact matrix-vector product (column vector on the right)."""
    if a.cols != len(v):
        raise ValueError("dimension mismatch in matrix-vector product")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a.entries)
