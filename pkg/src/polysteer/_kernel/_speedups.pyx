# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled exact-rational pivot kernel.

Entries are kept as separate numerator/denominator Python integers (always
coprime, denominator positive), so the pivot inner loop runs on plain integer
arithmetic instead of Fraction objects. Results are identical to the
pure-Python backend by construction; only the speed differs.
"""

from fractions import Fraction
from math import gcd

cdef object _F = Fraction


cdef class Tableau:
    """Dense mutable matrix of rationals supporting Gauss-Jordan pivots."""

    cdef list _nums
    cdef list _dens
    cdef readonly Py_ssize_t nrows
    cdef readonly Py_ssize_t ncols

    backend = "compiled"

    def __init__(self, rows):
        cdef list nums = []
        cdef list dens = []
        cdef list rn, rd
        cdef Py_ssize_t width = -1
        for row in rows:
            rn = []
            rd = []
            for x in row:
                if isinstance(x, (int, Fraction)):
                    rn.append(x.numerator)
                    rd.append(x.denominator)
                else:
                    f = _F(x)
                    rn.append(f.numerator)
                    rd.append(f.denominator)
            if width < 0:
                width = len(rn)
            elif len(rn) != width:
                raise ValueError("ragged tableau")
            nums.append(rn)
            dens.append(rd)
        self._nums = nums
        self._dens = dens
        self.nrows = len(nums)
        self.ncols = width if width >= 0 else 0

    def entry(self, Py_ssize_t i, Py_ssize_t j):
        return _F((<list>self._nums[i])[j], (<list>self._dens[i])[j])

    def row(self, Py_ssize_t i):
        cdef list rn = <list>self._nums[i]
        cdef list rd = <list>self._dens[i]
        cdef Py_ssize_t j
        return [_F(rn[j], rd[j]) for j in range(self.ncols)]

    def sign(self, Py_ssize_t i, Py_ssize_t j):
        n = (<list>self._nums[i])[j]
        if n > 0:
            return 1
        if n < 0:
            return -1
        return 0

    def pivot(self, Py_ssize_t r, Py_ssize_t c):
        """Scale row r so entry (r, c) becomes 1, then clear column c elsewhere."""
        cdef list pn_row = <list>self._nums[r]
        cdef list pd_row = <list>self._dens[r]
        cdef Py_ssize_t i, j
        cdef Py_ssize_t ncols = self.ncols
        pn = pn_row[c]
        pd = pd_row[c]
        if pn == 0:
            raise ZeroDivisionError("pivot on zero entry")
        if pn != pd:
            for j in range(ncols):
                x = pn_row[j]
                if x == 0:
                    pd_row[j] = 1
                    continue
                num = x * pd
                den = pd_row[j] * pn
                if den < 0:
                    num = -num
                    den = -den
                if den == 1:
                    pn_row[j] = num
                    pd_row[j] = den
                else:
                    g = gcd(num, den)
                    pn_row[j] = num // g
                    pd_row[j] = den // g
        pn_row[c] = 1
        pd_row[c] = 1

        cdef list rn, rd
        for i in range(self.nrows):
            if i == r:
                continue
            rn = <list>self._nums[i]
            rd = <list>self._dens[i]
            fn = rn[c]
            if fn == 0:
                continue
            fd = rd[c]
            for j in range(ncols):
                p = pn_row[j]
                if p == 0:
                    continue
                q = pd_row[j]
                a = rn[j]
                b = rd[j]
                num = a * fd * q - fn * p * b
                if num == 0:
                    rn[j] = 0
                    rd[j] = 1
                    continue
                den = b * fd * q
                if den == 1:
                    rn[j] = num
                    rd[j] = den
                else:
                    g = gcd(num, den)
                    rn[j] = num // g
                    rd[j] = den // g
            rn[c] = 0
            rd[c] = 1
