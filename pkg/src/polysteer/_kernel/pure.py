"""Pure-Python reference implementation of the rational pivot kernel."""

from __future__ import annotations

from fractions import Fraction


class Tableau:
    """Dense mutable matrix of rationals supporting Gauss-Jordan pivots.

    The pivot operation is the inner loop of both the simplex method and
    exact Gaussian elimination; keeping it behind this small interface lets a
    compiled backend replace it wholesale.
    """

    backend = "pure"

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows):
        self._rows = [[Fraction(x) for x in row] for row in rows]
        self.nrows = len(self._rows)
        self.ncols = len(self._rows[0]) if self._rows else 0
        for row in self._rows:
            if len(row) != self.ncols:
                raise ValueError("ragged tableau")

    def entry(self, i: int, j: int) -> Fraction:
        return self._rows[i][j]

    def row(self, i: int) -> list[Fraction]:
        return list(self._rows[i])

    def sign(self, i: int, j: int) -> int:
        v = self._rows[i][j]
        if v > 0:
            return 1
        if v < 0:
            return -1
        return 0

    def pivot(self, r: int, c: int) -> None:
        """Scale row r so entry (r, c) becomes 1, then clear column c elsewhere."""
        rows = self._rows
        prow = rows[r]
        p = prow[c]
        if p == 0:
            raise ZeroDivisionError("pivot on zero entry")
        if p != 1:
            rows[r] = prow = [x / p for x in prow]
        for i in range(self.nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                rows[i] = [a - f * b for a, b in zip(row, prow)]
