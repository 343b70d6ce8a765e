"""Double description over the integers, plus exact polytope vertex enumeration.

``extreme_rays`` converts a homogeneous inequality description of a pointed
cone into its extreme rays. Running it on a ray matrix instead computes the
extreme rays of the dual cone, i.e. the facets of the primal, so the same
routine drives both conversion directions.

All vectors are kept as primitive integer tuples (gcd 1, positive scale), so
intermediate arithmetic is pure-integer and results compare syntactically.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .ratlin import (
    LinearProgram,
    as_matrix,
    lp_feasible,
    nullspace,
    primitive,
    rank,
    solve_linear,
    vec_dot,
)

IntVec = tuple[int, ...]


def _idot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _independent_subset(rows: Sequence[IntVec], dim: int) -> list[int]:
    chosen: list[int] = []
    current = 0
    for i, row in enumerate(rows):
        cand = [rows[j] for j in chosen] + [row]
        r = rank(cand)
        if r > current:
            chosen.append(i)
            current = r
            if current == dim:
                break
    return chosen


def extreme_rays(rows: Sequence[Sequence[int]], dim: int) -> list[IntVec]:
    """Extreme rays of {x : h.x >= 0 for h in rows}; requires a pointed result.

    Incremental double description with the combinatorial adjacency test:
    rays p, m are adjacent iff no third ray is tight on every inserted row
    that both p and m are tight on.
    """
    normd = [primitive(r) for r in rows]
    base_idx = _independent_subset(normd, dim)
    if len(base_idx) < dim:
        raise ValueError("inequality rows do not span the space; cone is not pointed")

    base = as_matrix([normd[i] for i in base_idx])
    inv_cols = _inverse_columns(base)
    rays: list[IntVec] = [primitive(col) for col in inv_cols]
    processed: list[IntVec] = [normd[i] for i in base_idx]
    remaining = [normd[i] for i in range(len(normd)) if i not in set(base_idx)]

    inc = [_incidence(r, processed) for r in rays]
    for h in remaining:
        vals = [_idot(h, r) for r in rays]
        if all(v >= 0 for v in vals):
            processed.append(h)
            inc = [_incidence(r, processed) for r in rays]
            continue
        plus = [j for j, v in enumerate(vals) if v > 0]
        zero = [j for j, v in enumerate(vals) if v == 0]
        minus = [j for j, v in enumerate(vals) if v < 0]
        fresh: list[IntVec] = []
        for p in plus:
            for m in minus:
                common = inc[p] & inc[m]
                adjacent = True
                for j in range(len(rays)):
                    if j != p and j != m and (inc[j] & common) == common:
                        adjacent = False
                        break
                if adjacent:
                    w = tuple(
                        vals[p] * rays[m][k] - vals[m] * rays[p][k] for k in range(dim)
                    )
                    fresh.append(primitive(w))
        rays = [rays[j] for j in plus] + [rays[j] for j in zero] + fresh
        processed.append(h)
        inc = [_incidence(r, processed) for r in rays]
    return sorted(set(rays))


def _inverse_columns(base) -> list[tuple[Fraction, ...]]:
    from .ratlin import invert

    inv = invert(base)
    assert inv is not None, "independent subset must be invertible"
    return [tuple(row[j] for row in inv) for j in range(len(inv))]


def _incidence(ray: IntVec, rows: list[IntVec]) -> int:
    mask = 0
    for k, h in enumerate(rows):
        if _idot(h, ray) == 0:
            mask |= 1 << k
    return mask


def polytope_vertices(
    ineqs: Sequence[tuple[Sequence[Fraction], Fraction]],
    eqs: Sequence[tuple[Sequence[Fraction], Fraction]],
    dim: int,
) -> list[tuple[Fraction, ...]]:
    """All vertices of the bounded polyhedron {x : g.x >= h, a.x = b}.

    Works in the affine hull (implicit equalities are detected by strict-LP
    probes), homogenizes, and runs the double description method, so the
    result is exact for polytopes of any dimension. Raises on unbounded input.
    """
    ineqs = [(tuple(map(Fraction, g)), Fraction(h)) for g, h in ineqs]
    eqs = [(tuple(map(Fraction, a)), Fraction(b)) for a, b in eqs]
    base = LinearProgram(dim, eq=eqs, ge=ineqs)
    if lp_feasible(base).status != "feasible":
        return []

    # Find implicit equality rows. One all-strict probe settles the common
    # full-dimensional case; otherwise probe row by row, reusing witnesses.
    implicit: list[int] = []
    probe = lp_feasible(LinearProgram(dim, eq=eqs, gt=ineqs))
    if probe.status == "feasible":
        witnesses = [probe.witness]
    else:
        witnesses = []
        for i, (g, h) in enumerate(ineqs):
            if any(vec_dot(g, w) > h for w in witnesses):
                continue
            others = ineqs[:i] + ineqs[i + 1 :]
            res = lp_feasible(LinearProgram(dim, eq=eqs, ge=others, gt=[(g, h)]))
            if res.status == "feasible":
                witnesses.append(res.witness)
            else:
                implicit.append(i)

    hull_rows = [lhs for lhs, _ in eqs] + [ineqs[i][0] for i in implicit]
    hull_rhs = [rhs for _, rhs in eqs] + [ineqs[i][1] for i in implicit]
    if hull_rows:
        x0 = solve_linear(hull_rows, hull_rhs)
        assert x0 is not None, "nonempty polytope has a consistent hull"
        basis = nullspace(hull_rows)
    else:
        x0 = (Fraction(0),) * dim
        basis = [
            tuple(Fraction(1) if j == i else Fraction(0) for j in range(dim))
            for i in range(dim)
        ]
    q = len(basis)
    if q == 0:
        return [x0]

    hom_rows: list[tuple[int, ...]] = []
    for i, (g, h) in enumerate(ineqs):
        if i in implicit:
            continue
        w = [vec_dot(g, n) for n in basis]
        row = tuple(w) + (vec_dot(g, x0) - h,)
        if all(c == 0 for c in row):
            continue
        hom_rows.append(primitive(row))
    hom_rows.append((0,) * q + (1,))

    try:
        cone_rays = extreme_rays(hom_rows, q + 1)
    except ValueError:
        # The homogenization is not pointed, so the recession cone of the
        # feasible region contains a whole line.
        raise ValueError("polytope is unbounded") from None
    vertices = []
    for r in cone_rays:
        if r[q] <= 0:
            if r[q] == 0:
                raise ValueError("polytope is unbounded")
            raise AssertionError("ray with negative homogenizing coordinate")
        t = Fraction(r[q])
        z = [Fraction(c) / t for c in r[:q]]
        x = tuple(
            x0[k] + sum(z[i] * basis[i][k] for i in range(q)) for k in range(dim)
        )
        vertices.append(x)
    return sorted(set(vertices))
