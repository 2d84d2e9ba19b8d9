"""Exact rational linear algebra: a dense simplex method and a linear solver.

Only what the regularity test needs: ``maximize c.x`` subject to
``A x <= b``, ``x >= 0`` with ``b >= 0`` (so the origin is feasible and no
phase one is required), and Gauss-Jordan elimination over ``Fraction``.
Bland's rule guarantees termination on degenerate problems.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence


class Unbounded(ArithmeticError):
    pass


def maximize(
    c: Sequence[Fraction], a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> tuple[Fraction, list[Fraction]]:
    """Return (optimal value, optimal x)."""
    m, n = len(a), len(c)
    if any(v < 0 for v in b):
        raise ValueError("right-hand side must be nonnegative")
    # tableau rows: [A | I | b]; basis starts at the slacks
    width = n + m + 1
    rows = []
    for i in range(m):
        r = [Fraction(v) for v in a[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        r[n + i] = Fraction(1)
        rows.append(r)
    obj = [-Fraction(v) for v in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]
    while True:
        enter = next((j for j in range(width - 1) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            coef = rows[i][enter]
            if coef > 0:
                ratio = rows[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise Unbounded("objective is unbounded")
        piv = rows[leave]
        pv = piv[enter]
        if pv != 1:
            piv = [v / pv for v in piv]
            rows[leave] = piv
        nz = [j for j in range(width) if piv[j]]
        for i in range(m):
            if i != leave:
                f = rows[i][enter]
                if f:
                    r = rows[i]
                    for j in nz:
                        r[j] -= f * piv[j]
        f = obj[enter]
        if f:
            for j in nz:
                obj[j] -= f * piv[j]
        basis[leave] = enter
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rows[i][-1]
    return obj[-1], x


def solve_linear_system(aug: Sequence[Sequence[Fraction]], k: int) -> Optional[list[Fraction]]:
    """Unique solution of an augmented system with ``k`` unknowns, else None."""
    rows = [list(map(Fraction, r)) for r in aug]
    piv_cols = []
    r = 0
    for col in range(k):
        p = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][col]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][k] != 0:
            return None  # inconsistent
    if len(piv_cols) < k:
        return None  # not unique
    sol = [Fraction(0)] * k
    for i, col in enumerate(piv_cols):
        sol[col] = rows[i][k]
    return sol
