r"""Finitely supported Laurent polynomials with integer-matrix coefficients.

A banded, level-homogeneous operator on the states ``(index, level)``,
``level`` ranging over all integers, is determined by the finitely many
blocks ``A_s`` that move a state ``s`` levels up: the full operator acts as
the block-Toeplitz matrix with ``A_{j'-j}`` in block position ``(j, j')``.
We store exactly the map ``shift -> block`` and write it as a matrix-valued
Laurent polynomial ``sum_s A_s t^s``.  Multiplication is convolution on
shifts; evaluating at ``t = 1`` collapses the operator onto the base
(unlifted) matrix.
"""

from __future__ import annotations

from typing import Mapping

from .intmatrix import IntMatrix, mat_mul


class LaurentBlockMatrix:
    """Finitely supported map ``shift -> d x d IntMatrix``, zero blocks dropped."""

    __slots__ = ("_blocks", "block_dim")

    def __init__(self, block_dim: int, blocks: Mapping[int, IntMatrix]):
        if block_dim < 1:
            raise ValueError("block dimension must be positive")
        kept: dict[int, IntMatrix] = {}
        for shift, block in blocks.items():
            if not isinstance(shift, int):
                raise ValueError(f"shift {shift!r} is not an integer")
            if block.rows != block_dim or block.cols != block_dim:
                raise ValueError(
                    f"block at shift {shift} is {block.rows}x{block.cols}, "
                    f"expected {block_dim}x{block_dim}"
                )
            if not block.is_zero():
                kept[shift] = block
        object.__setattr__(self, "_blocks", dict(sorted(kept.items())))
        object.__setattr__(self, "block_dim", block_dim)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentBlockMatrix is immutable")

    @classmethod
    def identity(cls, block_dim: int) -> "LaurentBlockMatrix":
        return cls(block_dim, {0: IntMatrix.identity(block_dim)})

    @classmethod
    def zero(cls, block_dim: int) -> "LaurentBlockMatrix":
        return cls(block_dim, {})

    # -- access ------------------------------------------------------

    @property
    def shifts(self) -> tuple[int, ...]:
        return tuple(self._blocks)

    def block(self, shift: int) -> IntMatrix:
        """The block at a shift; zero matrix if the shift is unsupported."""
        got = self._blocks.get(shift)
        return IntMatrix.zeros(self.block_dim) if got is None else got

    @property
    def band(self) -> int:
        """Largest absolute shift with a nonzero block (0 for diagonal/zero)."""
        if not self._blocks:
            return 0
        return max(abs(s) for s in self._blocks)

    def items(self):
        return self._blocks.items()

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: "LaurentBlockMatrix") -> "LaurentBlockMatrix":
        if self.block_dim != other.block_dim:
            raise ValueError("dimension mismatch in Laurent sum")
        out: dict[int, IntMatrix] = dict(self._blocks)
        for shift, block in other.items():
            out[shift] = out[shift] + block if shift in out else block
        return LaurentBlockMatrix(self.block_dim, out)

    def __matmul__(self, other: "LaurentBlockMatrix") -> "LaurentBlockMatrix":
        return laurent_mul(self, other)

    def __pow__(self, k: int) -> "LaurentBlockMatrix":
        if k < 0:
            raise ValueError("negative power of a Laurent block matrix")
        result = LaurentBlockMatrix.identity(self.block_dim)
        base = self
        while k:
            if k & 1:
                result = laurent_mul(result, base)
            k >>= 1
            if k:
                base = laurent_mul(base, base)
        return result

    def left_mul(self, m: IntMatrix) -> "LaurentBlockMatrix":
        """Multiply every block by a plain matrix on the left."""
        return LaurentBlockMatrix(
            self.block_dim, {s: mat_mul(m, b) for s, b in self.items()}
        )

    def transpose_flip(self) -> "LaurentBlockMatrix":
        """The adjoint operator: transpose every block and negate its shift."""
        return LaurentBlockMatrix(
            self.block_dim, {-s: b.transpose() for s, b in self.items()}
        )

    # -- comparisons / views -------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentBlockMatrix)
            and self.block_dim == other.block_dim
            and self._blocks == other._blocks
        )

    def __hash__(self) -> int:
        return hash((self.block_dim, tuple(self._blocks.items())))

    def __repr__(self) -> str:
        if not self._blocks:
            return f"LaurentBlockMatrix(d={self.block_dim}, 0)"
        parts = [f"t^{s}*{b!r}" for s, b in self._blocks.items()]
        return f"LaurentBlockMatrix(d={self.block_dim}, " + " + ".join(parts) + ")"

    def truncate(self, window_levels: int) -> IntMatrix:
        """Finite section over levels ``-w..w``.

        State ``(index i, level l)`` maps to row ``(l + w) * d + i``; edges
        leaving the window are dropped, so the section under-counts paths
        that excurse past ``+-w``.
        """
        w = window_levels
        if w < 0:
            raise ValueError("window must be nonnegative")
        d = self.block_dim
        n = d * (2 * w + 1)
        grid = [[0] * n for _ in range(n)]
        for shift, block in self.items():
            for level in range(-w, w + 1):
                target = level + shift
                if target < -w or target > w:
                    continue
                base_r = (level + w) * d
                base_c = (target + w) * d
                for i, row in enumerate(block.entries):
                    out = grid[base_r + i]
                    for j, x in enumerate(row):
                        if x:
                            out[base_c + j] = x
        return IntMatrix(grid)


def laurent_mul(
    a: LaurentBlockMatrix, b: LaurentBlockMatrix
) -> LaurentBlockMatrix:
    """Convolution product: ``(ab)_s = sum_r a_r b_{s-r}``."""
    if a.block_dim != b.block_dim:
        raise ValueError("dimension mismatch in Laurent product")
    out: dict[int, IntMatrix] = {}
    for r, ablock in a.items():
        for q, bblock in b.items():
            s = r + q
            prod = mat_mul(ablock, bblock)
            out[s] = out[s] + prod if s in out else prod
    return LaurentBlockMatrix(a.block_dim, out)


def laurent_eval_one(a: LaurentBlockMatrix) -> IntMatrix:
    """Sum of all blocks: the base matrix the operator covers."""
    total = IntMatrix.zeros(a.block_dim)
    for _, block in a.items():
        total = total + block
    return total
