"""Rational scalars, vectors and matrices.

Scalars are ``fractions.Fraction`` (arbitrary precision, always in lowest
terms with positive denominator). Vectors are tuples of Fractions, matrices
tuples of row tuples; the tuple length is the dimension.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or 'p'. Rejects floats, exponents and negative denominators."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    """Canonical textual form: 'p/q' in lowest terms, or 'p' for integers."""
    return str(Fraction(x))


def as_vector(entries: Iterable) -> Vector:
    return tuple(Fraction(x) for x in entries)


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    mat = tuple(as_vector(row) for row in rows)
    if mat and any(len(row) != len(mat[0]) for row in mat):
        raise ValueError("ragged matrix")
    return mat


def vec_zero(n: int) -> Vector:
    return (Fraction(0),) * n


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c, v: Sequence[Fraction]) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in v)


def vec_dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), Fraction(0))


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in v)


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return tuple(vec_dot(row, v) for row in m)


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(vec_dot(row, col) for col in bt) for row in a)


def mat_transpose(m: Sequence[Sequence[Fraction]]) -> Matrix:
    return tuple(tuple(col) for col in zip(*m))


def mat_identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale v by the unique positive rational giving integer entries, gcd 1.

    This is the canonical representative of v under positive scaling, used to
    store cone rays and facet normals so that set equality is syntactic.
    """
    v = [Fraction(x) for x in v]
    if all(a == 0 for a in v):
        raise ValueError("zero vector has no primitive representative")
    den_lcm = 1
    for a in v:
        den_lcm = den_lcm * a.denominator // math.gcd(den_lcm, a.denominator)
    ints = [int(a * den_lcm) for a in v]
    g = 0
    for n in ints:
        g = math.gcd(g, n)
    return tuple(n // g for n in ints)
