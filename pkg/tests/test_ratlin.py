"""Exact linear algebra and LP kernel tests.

Randomized checks compare against independent oracles implemented here with
cofactor determinants and exhaustive vertex enumeration, never against the
code paths under test.
"""

from fractions import Fraction
from itertools import combinations
import random

import pytest

from polysteer.ratlin import (
    LinearProgram,
    as_matrix,
    as_vector,
    format_rational,
    invert,
    lp_feasible,
    lp_optimize,
    mat_identity,
    mat_mul,
    mat_vec,
    nullspace,
    parse_rational,
    primitive,
    rank,
    solve_linear,
    vec_dot,
)

F = Fraction


# --- independent oracles -------------------------------------------------


def det_cofactor(m):
    n = len(m)
    if n == 0:
        return F(1)
    if n == 1:
        return m[0][0]
    total = F(0)
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        sign = -1 if j % 2 else 1
        total += sign * m[0][j] * det_cofactor(minor)
    return total


def rank_by_minors(m):
    rows, cols = len(m), len(m[0]) if m else 0
    for r in range(min(rows, cols), 0, -1):
        for ri in combinations(range(rows), r):
            for ci in combinations(range(cols), r):
                sub = [[m[i][j] for j in ci] for i in ri]
                if det_cofactor(sub) != 0:
                    return r
    return 0


def cramer_solve(a, b):
    d = det_cofactor(a)
    if d == 0:
        return None
    n = len(a)
    out = []
    for j in range(n):
        aj = [row[:j] + [b[i]] + row[j + 1 :] for i, row in enumerate(a)]
        out.append(det_cofactor(aj) / d)
    return out


def brute_force_optimal(lp):
    """Max over all vertices (bounded pointed programs only)."""
    rows = list(lp.eq) + list(lp.ge)
    eq_idx = set(range(len(lp.eq)))
    best = None
    for subset in combinations(range(len(rows)), lp.n_vars):
        if not eq_idx.issubset(subset) and eq_idx - set(subset):
            continue
        a = [list(rows[i][0]) for i in subset]
        b = [rows[i][1] for i in subset]
        x = cramer_solve(a, b)
        if x is None:
            continue
        if all(vec_dot(lhs, x) == rhs for lhs, rhs in lp.eq) and all(
            vec_dot(lhs, x) >= rhs for lhs, rhs in lp.ge
        ):
            val = vec_dot(lp.objective, x)
            if best is None or val > best:
                best = val
    return best


# --- rationals -----------------------------------------------------------


def test_parse_rational_accepts_canonical_forms():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational("-7") == F(-7)
    assert parse_rational("+2/3") == F(2, 3)
    assert parse_rational("0") == 0


@pytest.mark.parametrize("bad", ["1.5", "1e3", "1/-2", "1/0", "", "a/b", "2 / 3", "--1"])
def test_parse_rational_rejects_noncanonical(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_round_trip():
    for s in ["3/4", "-7", "0", "22/7"]:
        assert format_rational(parse_rational(s)) == s.lstrip("+")


def test_primitive_scaling():
    assert primitive([F(1, 2), F(3, 4)]) == (2, 3)
    assert primitive([F(-2), F(4)]) == (-1, 2)
    with pytest.raises(ValueError):
        primitive([F(0), F(0)])


# --- gaussian elimination ------------------------------------------------


def test_solve_linear_unique():
    a = as_matrix([[1, 1], [1, -1]])
    x = solve_linear(a, [3, 1])
    assert x == (F(2), F(1))


def test_solve_linear_inconsistent():
    a = as_matrix([[1, 1], [2, 2]])
    assert solve_linear(a, [1, 3]) is None


def test_solve_linear_underdetermined_resubstitutes():
    a = as_matrix([[1, 2, 3]])
    x = solve_linear(a, [6])
    assert x is not None and vec_dot(a[0], x) == 6


def test_rank_and_nullspace():
    a = as_matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(a) == 2
    basis = nullspace(a)
    assert len(basis) == 1
    assert all(vec_dot(row, basis[0]) == 0 for row in a)


def test_invert():
    a = as_matrix([[2, 1], [1, 1]])
    inv = invert(a)
    assert mat_mul(a, inv) == mat_identity(2)
    assert invert(as_matrix([[1, 2], [2, 4]])) is None


def test_gauss_randomized_against_minor_oracle():
    rng = random.Random(20260814)
    for _ in range(40):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = as_matrix([[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)])
        assert rank(m) == rank_by_minors([list(r) for r in m])
        for v in nullspace(m):
            assert all(vec_dot(row, v) == 0 for row in m)
        assert len(nullspace(m)) == cols - rank(m)
        b = [rng.randint(-3, 3) for _ in range(rows)]
        x = solve_linear(m, b)
        if x is None:
            aug = [list(r) + [b[i]] for i, r in enumerate(m)]
            assert rank_by_minors(aug) > rank_by_minors([list(r) for r in m])
        else:
            assert list(mat_vec(m, x)) == [F(v) for v in b]


# --- linear programs -----------------------------------------------------


def test_lp_optimize_simple_bounded():
    lp = LinearProgram(
        2,
        ge=[((1, 0), 0), ((0, 1), 0), ((-1, -2), -4), ((-2, -1), -4)],
        objective=(1, 1),
    )
    out = lp_optimize(lp)
    assert out.status == "optimal"
    assert out.value == F(8, 3)
    assert out.witness == (F(4, 3), F(4, 3))
    assert out.check(lp)


def test_lp_optimize_unbounded_gives_ray():
    lp = LinearProgram(1, ge=[((1,), 0)], objective=(1,))
    out = lp_optimize(lp)
    assert out.status == "unbounded"
    assert out.check(lp)


def test_lp_optimize_infeasible_gives_farkas():
    lp = LinearProgram(1, ge=[((1,), 0), ((-1,), 1)], objective=(1,))
    out = lp_optimize(lp)
    assert out.status == "infeasible"
    assert out.check(lp)


def test_lp_optimize_equality_rows():
    lp = LinearProgram(
        3,
        eq=[((1, 1, 1), 1)],
        ge=[((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0)],
        objective=(1, 2, 3),
    )
    out = lp_optimize(lp)
    assert out.status == "optimal" and out.value == 3
    assert out.witness == (0, 0, 1)


def test_lp_optimize_rejects_strict_rows():
    lp = LinearProgram(1, gt=[((1,), 0)], objective=(1,))
    with pytest.raises(ValueError):
        lp_optimize(lp)


def test_lp_feasible_strict_witness_is_strict():
    lp = LinearProgram(2, eq=[((1, 1), 1)], gt=[((1, 0), 0), ((0, 1), 0)])
    out = lp_feasible(lp)
    assert out.status == "feasible"
    assert out.witness[0] > 0 and out.witness[1] > 0
    assert out.check(lp)


def test_lp_feasible_strict_boundary_infeasible():
    # x > 0 together with x <= 0: contradiction only via the strict row.
    lp = LinearProgram(1, ge=[((-1,), 0)], gt=[((1,), 0)])
    out = lp_feasible(lp)
    assert out.status == "infeasible"
    assert out.check(lp)
    # strict multiplier must be engaged
    assert out.farkas[1] > 0


def test_lp_feasible_strict_relaxation_already_infeasible():
    lp = LinearProgram(1, ge=[((1,), 2), ((-1,), -1)], gt=[((1,), 0)])
    out = lp_feasible(lp)
    assert out.status == "infeasible"
    assert out.check(lp)


def test_lp_feasible_empty_program():
    lp = LinearProgram(2)
    out = lp_feasible(lp)
    assert out.status == "feasible"
    assert out.witness == (0, 0)


def test_lp_feasible_zero_vars():
    assert lp_feasible(LinearProgram(0, ge=[((), -1)])).status == "feasible"
    out = lp_feasible(LinearProgram(0, ge=[((), 1)]))
    assert out.status == "infeasible" and out.check(LinearProgram(0, ge=[((), 1)]))


def test_lp_free_variables():
    # Variables carry no implicit sign: minimum of x at -5 is reachable.
    lp = LinearProgram(1, ge=[((1,), -5)], objective=(-1,))
    out = lp_optimize(lp)
    assert out.status == "optimal" and out.witness == (-5,) and out.value == 5


def test_lp_randomized_against_vertex_enumeration():
    rng = random.Random(911)
    box = 5
    agree = 0
    for _ in range(60):
        n = rng.randint(1, 3)
        lp_ge = []
        for j in range(n):
            unit = [0] * n
            unit[j] = 1
            lp_ge.append((tuple(unit), -box))
            lp_ge.append((tuple(-v for v in unit), -box))
        for _ in range(rng.randint(0, 4)):
            lhs = tuple(rng.randint(-3, 3) for _ in range(n))
            lp_ge.append((lhs, rng.randint(-4, 4)))
        eq = []
        if n > 1 and rng.random() < 0.3:
            eq.append((tuple(rng.randint(-2, 2) for _ in range(n)), rng.randint(-2, 2)))
        obj = tuple(rng.randint(-3, 3) for _ in range(n))
        lp = LinearProgram(n, eq=eq, ge=lp_ge, objective=obj)
        out = lp_optimize(lp)
        assert out.check(lp)
        oracle = brute_force_optimal(lp)
        if out.status == "optimal":
            assert oracle == out.value
            agree += 1
        else:
            assert out.status == "infeasible" and oracle is None
    assert agree > 20


def test_lp_strict_randomized_constructed_feasible():
    rng = random.Random(4242)
    for _ in range(30):
        n = rng.randint(1, 3)
        center = [F(rng.randint(-3, 3)) for _ in range(n)]
        gt = []
        for _ in range(rng.randint(1, 4)):
            lhs = tuple(F(rng.randint(-3, 3)) for _ in range(n))
            margin = vec_dot(lhs, center)
            gt.append((lhs, margin - rng.randint(1, 3)))
        lp = LinearProgram(n, gt=gt)
        out = lp_feasible(lp)
        assert out.status == "feasible" and out.check(lp)


def test_lp_outcomes_always_carry_valid_certificates():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(1, 3)
        rows = [
            (tuple(rng.randint(-2, 2) for _ in range(n)), rng.randint(-2, 2))
            for _ in range(rng.randint(1, 5))
        ]
        kinds = [rng.choice(["eq", "ge", "gt"]) for _ in rows]
        lp = LinearProgram(
            n,
            eq=[r for r, k in zip(rows, kinds) if k == "eq"],
            ge=[r for r, k in zip(rows, kinds) if k == "ge"],
            gt=[r for r, k in zip(rows, kinds) if k == "gt"],
        )
        out = lp_feasible(lp)
        assert out.status in ("feasible", "infeasible")
        assert out.check(lp)


def test_vector_width_validation():
    with pytest.raises(ValueError):
        LinearProgram(2, ge=[((1,), 0)])
    with pytest.raises(ValueError):
        LinearProgram(2, objective=(1,))
    with pytest.raises(ValueError):
        as_vector(["1", "x"])
