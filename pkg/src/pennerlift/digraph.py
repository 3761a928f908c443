"""Directed-graph checks on the support of a square matrix.

The digraph of a matrix has an edge ``i -> j`` exactly when the entry
``(i, j)`` is nonzero.  Both checks below are plain breadth-first searches;
no matrix powers are ever formed, so they stay cheap on matrices whose
entries are huge integers.
"""

from __future__ import annotations

import math
from collections import deque

from .errors import ReducibleError
from .intmatrix import IntMatrix


def _successors(m: IntMatrix) -> list[list[int]]:
    return [[j for j, x in enumerate(row) if x] for row in m.entries]


def _reachable(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def strongly_connected(m: IntMatrix) -> bool:
    """True iff the support digraph is strongly connected.

    A 1x1 matrix is strongly connected by convention even when zero; use
    :func:`is_irreducible` when the matrix sense (some power has a positive
    diagonal) is needed.
    """
    if not m.is_square:
        raise ValueError("connectivity is defined for square matrices only")
    n = m.rows
    fwd = _successors(m)
    if len(_reachable(fwd, 0)) != n:
        return False
    bwd = _successors(m.transpose())
    return len(_reachable(bwd, 0)) == n


def is_irreducible(m: IntMatrix) -> bool:
    """Matrix irreducibility: every state reaches every state in >= 1 step."""
    if m.rows == 1:
        return m[0, 0] > 0
    return strongly_connected(m)


def period(m: IntMatrix) -> int:
    """gcd of cycle lengths through state 0 of an irreducible matrix.

    Computed from BFS level differences: for every edge ``u -> v`` the value
    ``depth(u) + 1 - depth(v)`` is a cycle-length difference, and the gcd of
    all of them is the period.
    """
    if not is_irreducible(m):
        raise ReducibleError("period is defined for irreducible matrices only")
    adj = _successors(m)
    depth = {0: 0}
    queue = deque([0])
    g = 0
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in depth:
                depth[v] = depth[u] + 1
                queue.append(v)
            g = math.gcd(g, depth[u] + 1 - depth[v])
    return g
