r"""Lifts of curve systems to the doubly infinite handle chain.

Cutting the chain surface into fundamental blocks indexes every curve lift
by an integer level.  Intersection numbers then split into a symmetric
within-level part ``W`` and a cross part ``X`` pairing level ``j`` with
level ``j + 1``; level homogeneity forces the pairing of ``j`` with
``j - 1`` to be ``X^T``, and the three parts must add back up to the base
matrix.  The lifted intersection operator is the Laurent block matrix

    Sigma~(t) = X^T t^-1 + W + X t

and a twist word lifts to the product of ``(I + E_k Sigma~(t))^{|delta_k|}``
in word order.  Specialising ``t = 1`` recovers the base computation
exactly, which downstream consumers treat as a structural self-check.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DecompositionError, ValidationFailedError
from .intmatrix import IntMatrix
from .laurent import LaurentBlockMatrix, laurent_mul
from .penner import CurveSystem, TwistWord, validate


@dataclass(frozen=True)
class LiftedCurveSystem:
    """A curve system plus the within/cross split of its intersections."""

    base: CurveSystem
    sigma_within: IntMatrix
    sigma_cross: IntMatrix

    def __post_init__(self):
        n = self.base.size
        for name, m in (("sigma_within", self.sigma_within),
                        ("sigma_cross", self.sigma_cross)):
            if m.rows != n or m.cols != n:
                raise DecompositionError(f"{name} is not {n}x{n}")
        if self.sigma_within != self.sigma_within.transpose():
            raise DecompositionError("sigma_within is not symmetric")
        for i in range(n):
            if self.sigma_within[i, i] != 0 or self.sigma_cross[i, i] != 0:
                raise DecompositionError(
                    f"curve {self.base.labels[i]} intersects its own lifts "
                    "within the window; levels must be embedded")
        total = self.sigma_within + self.sigma_cross \
            + self.sigma_cross.transpose()
        if total != self.base.sigma:
            raise DecompositionError(
                "within + cross + cross^T does not reproduce the base sigma")
        fams = self.base.families
        for i in range(n):
            for j in range(n):
                if fams[i] == fams[j] and (
                        self.sigma_within[i, j] or self.sigma_cross[i, j]):
                    raise DecompositionError(
                        f"same-family curves {self.base.labels[i]}, "
                        f"{self.base.labels[j]} intersect in the lift")

    @property
    def degenerate_cross(self) -> bool:
        """True when no intersection crosses a level boundary.

        Such data describes lifts whose levels never talk to each other;
        downstream analysis still runs but reports flag the input as a
        disconnected-cover degeneracy rather than rejecting it.
        """
        return self.sigma_cross.is_zero()


def lift_sigma(lifted: LiftedCurveSystem) -> LaurentBlockMatrix:
    """The lifted intersection operator ``X^T t^-1 + W + X t``."""
    return LaurentBlockMatrix(lifted.base.size, {
        -1: lifted.sigma_cross.transpose(),
        0: lifted.sigma_within,
        1: lifted.sigma_cross,
    })


def lift_penner_matrix(lifted: LiftedCurveSystem, word: TwistWord,
                       check: bool = True) -> LaurentBlockMatrix:
    """Laurent transition matrix of the lifted twist word."""
    if check:
        report = validate(lifted.base, word)
        if not report.ok:
            raise ValidationFailedError(report)
    n = lifted.base.size
    sigma_t = lift_sigma(lifted)
    result = LaurentBlockMatrix.identity(n)
    for k, delta in word.letters:
        selector = IntMatrix.unit(n, k, k)
        factor = LaurentBlockMatrix.identity(n) + sigma_t.left_mul(selector)
        result = laurent_mul(result, factor ** abs(delta))
    return result


# -- band-1 chains and reblocking -------------------------------------------


@dataclass(frozen=True)
class ShiftChain:
    """A band-1 level-homogeneous chain: blocks for shifts -1, 0, +1."""

    a_minus: IntMatrix
    a_zero: IntMatrix
    a_plus: IntMatrix

    def __post_init__(self):
        d = self.a_zero.rows
        for name, m in (("a_minus", self.a_minus), ("a_zero", self.a_zero),
                        ("a_plus", self.a_plus)):
            if m.rows != d or m.cols != d:
                raise ValueError(f"{name} is not {d}x{d}")

    @property
    def block_dim(self) -> int:
        return self.a_zero.rows

    @property
    def base_matrix(self) -> IntMatrix:
        return self.a_minus + self.a_zero + self.a_plus

    def to_laurent(self) -> LaurentBlockMatrix:
        return LaurentBlockMatrix(self.block_dim, {
            -1: self.a_minus, 0: self.a_zero, 1: self.a_plus})

    @classmethod
    def from_laurent(cls, lbm: LaurentBlockMatrix) -> "ShiftChain":
        if lbm.band > 1:
            raise ValueError(
                f"band {lbm.band} > 1; reblock before building a chain")
        return cls(a_minus=lbm.block(-1), a_zero=lbm.block(0),
                   a_plus=lbm.block(1))

    def is_level_symmetric(self) -> bool:
        """Exact symmetry of the infinite operator: A0 = A0^T, A+ = A-^T."""
        return (self.a_zero == self.a_zero.transpose()
                and self.a_plus == self.a_minus.transpose())


@dataclass(frozen=True)
class StochasticShiftChain:
    """Band-1 chain of float transition probabilities (rows sum to 1)."""

    p_minus: np.ndarray
    p_zero: np.ndarray
    p_plus: np.ndarray

    def __post_init__(self):
        d = self.p_zero.shape[0]
        for name, m in (("p_minus", self.p_minus), ("p_zero", self.p_zero),
                        ("p_plus", self.p_plus)):
            if m.shape != (d, d):
                raise ValueError(f"{name} is not {d}x{d}")
            m.setflags(write=False)

    @property
    def block_dim(self) -> int:
        return self.p_zero.shape[0]

    @property
    def base_matrix(self) -> np.ndarray:
        return self.p_minus + self.p_zero + self.p_plus

    def row_mass(self) -> np.ndarray:
        return self.base_matrix.sum(axis=1)


def reblock(lbm: LaurentBlockMatrix, group: int | None = None) -> ShiftChain:
    """Group consecutive levels into superlevels to force band 1.

    ``group`` defaults to the band ``k`` (the smallest group that works);
    any ``group >= k`` is accepted, e.g. ``2 * k + 1`` for window-centred
    conventions.  Original level ``l`` becomes position ``l mod group``
    inside superlevel ``l // group``, and state ``(i, l)`` maps to block
    index ``(l mod group) * d + i``.
    """
    k = lbm.band
    if group is None:
        group = max(k, 1)
    if group < max(k, 1):
        raise ValueError(f"group {group} is below the band {k}")
    d = lbm.block_dim
    size = d * group
    blocks: dict[int, list[list[int]]] = {
        -1: [[0] * size for _ in range(size)],
        0: [[0] * size for _ in range(size)],
        1: [[0] * size for _ in range(size)],
    }
    for a in range(group):
        for b in range(group):
            for big_shift in (-1, 0, 1):
                small = big_shift * group + b - a
                block = lbm.block(small) if abs(small) <= k else None
                if block is None or block.is_zero():
                    continue
                target = blocks[big_shift]
                for i in range(d):
                    for j in range(d):
                        x = block[i, j]
                        if x:
                            target[a * d + i][b * d + j] = x
    return ShiftChain(a_minus=IntMatrix(blocks[-1]),
                      a_zero=IntMatrix(blocks[0]),
                      a_plus=IntMatrix(blocks[1]))


# -- the skip-free fold ------------------------------------------------------


@dataclass(frozen=True)
class QbdBlocks:
    """Folded two-sided chain as a one-sided quasi-birth-death process.

    Folded level ``n`` collects original levels ``-n`` and ``n + 1``; the
    boundary block ``corner`` couples them, while ``down``/``level``/``up``
    are the repeating interior blocks (toward the boundary, staying, away).
    Contents are IntMatrix for counting chains and float arrays for
    stochastic ones.
    """

    corner: object
    down: object
    level: object
    up: object


def qbd_fold(chain: ShiftChain | StochasticShiftChain) -> QbdBlocks:
    """Fold a two-sided band-1 chain at the level-0/1 boundary."""
    if isinstance(chain, ShiftChain):
        lo, zero, hi = chain.a_minus, chain.a_zero, chain.a_plus
        d = chain.block_dim

        def two_by_two(tl, tr, bl, br):
            top = [list(tl.row(i)) + list(tr.row(i)) for i in range(d)]
            bottom = [list(bl.row(i)) + list(br.row(i)) for i in range(d)]
            return IntMatrix(top + bottom)

        z = IntMatrix.zeros(d)
        return QbdBlocks(
            corner=two_by_two(zero, hi, lo, zero),
            down=two_by_two(hi, z, z, lo),
            level=two_by_two(zero, z, z, zero),
            up=two_by_two(lo, z, z, hi),
        )
    lo, zero, hi = chain.p_minus, chain.p_zero, chain.p_plus
    z = np.zeros_like(zero)
    return QbdBlocks(
        corner=np.block([[zero, hi], [lo, zero]]),
        down=np.block([[hi, z], [z, lo]]),
        level=np.block([[zero, z], [z, zero]]),
        up=np.block([[lo, z], [z, hi]]),
    )


# -- finite-window certificates ---------------------------------------------


class BandedVerdict(enum.Enum):
    """Tri-state outcome of a stabilised finite-window check."""

    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"


def _as_laurent(chain) -> LaurentBlockMatrix:
    if isinstance(chain, LaurentBlockMatrix):
        return chain
    if isinstance(chain, ShiftChain):
        return chain.to_laurent()
    raise TypeError(f"expected a chain or Laurent matrix, got {type(chain)!r}")


def _window_adjacency(lbm: LaurentBlockMatrix, w: int) -> list[list[int]]:
    d = lbm.block_dim
    n = d * (2 * w + 1)
    adj: list[list[int]] = [[] for _ in range(n)]
    for shift, block in lbm.items():
        for level in range(-w, w + 1):
            target = level + shift
            if not -w <= target <= w:
                continue
            for i, j, _ in block.edges():
                adj[(level + w) * d + i].append((target + w) * d + j)
    return adj


def _reach(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _window_connected(lbm: LaurentBlockMatrix, w: int) -> bool:
    """Do all states at levels 0 and 1 lie in one strongly connected piece
    of the window?  Restricting to central states avoids boundary-cut
    artifacts; including level 1 rules out one-way translations, which a
    single level would certify vacuously."""
    d = lbm.block_dim
    adj = _window_adjacency(lbm, w)
    centre = [w * d + i for i in range(d)] + [(w + 1) * d + i for i in range(d)]
    fwd = _reach(adj, centre[0])
    if not all(c in fwd for c in centre):
        return False
    n = len(adj)
    radj: list[list[int]] = [[] for _ in range(n)]
    for u, vs in enumerate(adj):
        for v in vs:
            radj[v].append(u)
    bwd = _reach(radj, centre[0])
    return all(c in bwd for c in centre)


def banded_irreducible(chain, window_levels: int = 6) -> BandedVerdict:
    """Stabilised window check for irreducibility of the infinite chain.

    Verdicts from windows ``w`` and ``w + 1`` must agree; otherwise the
    result is inconclusive and the caller should widen the window.  A
    finite window can only certify, never prove, the infinite property;
    stabilisation is the accepted certificate.
    """
    lbm = _as_laurent(chain)
    first = _window_connected(lbm, window_levels)
    second = _window_connected(lbm, window_levels + 1)
    if first != second:
        return BandedVerdict.INCONCLUSIVE
    return BandedVerdict.TRUE if first else BandedVerdict.FALSE


def banded_period(chain, window_levels: int = 6) -> int | None:
    """Stabilised period of the level-0 component; None if not stabilised."""
    lbm = _as_laurent(chain)
    values = [_window_period(lbm, w)
              for w in (window_levels, window_levels + 1)]
    if values[0] is not None and values[0] == values[1]:
        return values[0]
    return None


def _window_period(lbm: LaurentBlockMatrix, w: int) -> int | None:
    d = lbm.block_dim
    adj = _window_adjacency(lbm, w)
    start = w * d
    fwd = _reach(adj, start)
    n = len(adj)
    radj: list[list[int]] = [[] for _ in range(n)]
    for u, vs in enumerate(adj):
        for v in vs:
            radj[v].append(u)
    scc = fwd & _reach(radj, start)
    depth = {start: 0}
    queue = deque([start])
    g = 0
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in scc:
                continue
            if v not in depth:
                depth[v] = depth[u] + 1
                queue.append(v)
            g = math.gcd(g, depth[u] + 1 - depth[v])
    return g if g > 0 else None
