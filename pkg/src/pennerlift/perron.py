r"""Perron eigendata of irreducible nonnegative integer matrices.

The dominant eigenvalue is found by power iteration on ``M + I`` (the shift
makes periodic matrices converge) carried out in 40-digit mpmath arithmetic,
well past quad precision, so the float64 data handed back is limited only by
its own rounding.  Collatz-Wielandt ratios give two-sided brackets on the
eigenvalue at every step, which is what the stopping rule tests.

Normalisation: ``sum(v) == d`` and ``u . v == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .digraph import is_irreducible
from .errors import NonConvergenceError, ReducibleError
from .intmatrix import IntMatrix

_WORKING_DPS = 40
_DEFAULT_TOL = 1e-12
_DEFAULT_MAX_ITERATIONS = 10**6


@dataclass(frozen=True)
class PerronData:
    """Dominant eigenvalue with left/right eigenvectors and a residual bound.

    ``residual`` bounds both ``max|M v - lam v|`` and ``max|u M - lam u|``
    for the rounded float values stored here, evaluated against the exact
    integer matrix.
    """

    lam: float
    u: tuple[float, ...]
    v: tuple[float, ...]
    residual: float

    @property
    def dim(self) -> int:
        return len(self.v)


def _iterate(rows: tuple[tuple[int, ...], ...], tol, max_iterations: int):
    """Power iteration on (M + I); returns the positive eigenvector and
    the final Collatz-Wielandt bracket for the eigenvalue of M + I."""
    n = len(rows)
    x = [mpf(1)] * n
    target = mpf(tol) / 4
    for _ in range(max_iterations):
        y = [sum(c * x[j] for j, c in enumerate(row) if c) + x[i]
             for i, row in enumerate(rows)]
        ratios = [yi / xi for yi, xi in zip(y, x)]
        lo, hi = min(ratios), max(ratios)
        total = sum(y)
        x = [yi / total for yi in y]
        if hi - lo <= target:
            return x, lo, hi
    raise NonConvergenceError(
        f"power iteration did not reach tol={tol} in {max_iterations} steps"
    )


def perron_eigenpair(
    m: IntMatrix,
    tol: float = _DEFAULT_TOL,
    max_iterations: int = _DEFAULT_MAX_ITERATIONS,
) -> PerronData:
    """Compute Perron data for an irreducible nonnegative integer matrix.

    Deterministic: the starting vector is all-ones and the arithmetic is
    fixed-precision decimal, so repeated calls give identical floats.
    Raises :class:`ReducibleError` when the support digraph is not strongly
    connected (or a 1x1 zero matrix), :class:`NonConvergenceError` when the
    iteration cap or the requested tolerance is unreachable.
    """
    if not m.is_square:
        raise ValueError("Perron data is defined for square matrices only")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if not is_irreducible(m):
        raise ReducibleError("matrix is not irreducible")
    d = m.rows

    if d == 1:
        lam = float(m[0, 0])
        return PerronData(lam=lam, u=(1.0,), v=(1.0,), residual=0.0)

    with mp.workdps(_WORKING_DPS):
        rows = m.entries
        cols = m.transpose().entries
        v_mp, lo, hi = _iterate(rows, tol, max_iterations)
        u_mp, lo2, hi2 = _iterate(cols, tol, max_iterations)
        # Intersect the two brackets; both contain lam(M) + 1.
        lam_mp = (max(lo, lo2) + min(hi, hi2)) / 2 - 1

        scale_v = d / sum(v_mp)
        v_mp = [x * scale_v for x in v_mp]
        dot = sum(a * b for a, b in zip(u_mp, v_mp))
        u_mp = [x / dot for x in u_mp]

        lam = float(lam_mp)
        u = tuple(float(x) for x in u_mp)
        v = tuple(float(x) for x in v_mp)

        # Residual of the rounded float data against the exact matrix.
        r = mpf(0)
        for i, row in enumerate(rows):
            r = max(r, abs(sum(mpf(c) * mpf(v[j]) for j, c in enumerate(row))
                           - mpf(lam) * mpf(v[i])))
        for j, col in enumerate(cols):
            r = max(r, abs(sum(mpf(c) * mpf(u[i]) for i, c in enumerate(col))
                           - mpf(lam) * mpf(u[j])))
        residual = float(r)

    if residual > tol:
        raise NonConvergenceError(
            f"requested tol={tol} is below what float64 output can certify "
            f"(achieved residual {residual:.3e})"
        )
    return PerronData(lam=lam, u=u, v=v, residual=residual)
