"""Exact Gaussian elimination: linear solve, rank, nullspace, inverse."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .._kernel import Tableau
from .qarith import Matrix, Vector, as_matrix, as_vector, vec_zero


def _rref(tab: Tableau, cols: int) -> list[tuple[int, int]]:
    """Gauss-Jordan over the first ``cols`` columns; returns (row, col) pivots.

    Rows are never swapped; each column pivots on the first unused row with a
    nonzero entry, which keeps the procedure deterministic.
    """
    pivots: list[tuple[int, int]] = []
    used: set[int] = set()
    for c in range(cols):
        prow = -1
        for i in range(tab.nrows):
            if i not in used and tab.sign(i, c) != 0:
                prow = i
                break
        if prow < 0:
            continue
        tab.pivot(prow, c)
        used.add(prow)
        pivots.append((prow, c))
    return pivots


def rank(a: Sequence[Sequence]) -> int:
    mat = as_matrix(a)
    if not mat or not mat[0]:
        return 0
    tab = Tableau(mat)
    return len(_rref(tab, tab.ncols))


def solve_linear(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """One exact solution of A x = b, or None if the system is inconsistent."""
    mat = as_matrix(a)
    rhs = as_vector(b)
    if len(mat) != len(rhs):
        raise ValueError("row count mismatch")
    if not mat:
        return ()
    n = len(mat[0])
    tab = Tableau([row + (rhs[i],) for i, row in enumerate(mat)])
    pivots = _rref(tab, n)
    pivot_rows = {r for r, _ in pivots}
    for i in range(tab.nrows):
        if i not in pivot_rows and tab.sign(i, n) != 0:
            return None
    x = list(vec_zero(n))
    for r, c in pivots:
        x[c] = tab.entry(r, n)
    return tuple(x)


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Deterministic basis of the kernel of A (one vector per free column)."""
    mat = as_matrix(a)
    if not mat:
        if ncols is None:
            raise ValueError("ncols required for empty matrix")
        n = ncols
        pivots: list[tuple[int, int]] = []
        tab = None
    else:
        n = len(mat[0])
        tab = Tableau(mat)
        pivots = _rref(tab, n)
    pivot_cols = {c for _, c in pivots}
    basis: list[Vector] = []
    for f in range(n):
        if f in pivot_cols:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in pivots:
            assert tab is not None
            v[c] = -tab.entry(r, f)
        basis.append(tuple(v))
    return basis


def invert(a: Sequence[Sequence]) -> Matrix | None:
    """Exact inverse of a square matrix, or None if singular."""
    mat = as_matrix(a)
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix not square")
    if n == 0:
        return ()
    aug = [
        row + tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
        for i, row in enumerate(mat)
    ]
    tab = Tableau(aug)
    pivots = _rref(tab, n)
    if len(pivots) < n:
        return None
    row_of_col = {c: r for r, c in pivots}
    return tuple(
        tuple(tab.entry(row_of_col[i], n + j) for j in range(n)) for i in range(n)
    )
