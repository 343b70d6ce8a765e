"""Exact simplex over the rationals with certificate-producing outcomes.

Programs have free variables; all sign information lives in the rows.
Feasibility of systems with strict rows is decided by maximizing an auxiliary
gap variable, and every verdict carries a certificate that re-substitutes
exactly: a witness point, a nonnegative-multiplier infeasibility vector, or an
improving ray. Pivoting uses Bland's rule throughout, so the method
terminates on every input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .._kernel import Tableau
from .qarith import Vector, as_vector, vec_dot, vec_zero

_ZERO = Fraction(0)
_ONE = Fraction(1)


class LinearProgram:
    """max objective.x subject to eq rows (=), ge rows (>=), gt rows (>).

    Strict rows are only meaningful to lp_feasible; lp_optimize rejects them.
    """

    __slots__ = ("n_vars", "eq", "ge", "gt", "objective")

    def __init__(self, n_vars: int, eq=(), ge=(), gt=(), objective=None):
        self.n_vars = int(n_vars)
        self.eq = self._rows(eq)
        self.ge = self._rows(ge)
        self.gt = self._rows(gt)
        self.objective = None if objective is None else as_vector(objective)
        if self.objective is not None and len(self.objective) != self.n_vars:
            raise ValueError("objective width mismatch")

    def _rows(self, pairs) -> tuple[tuple[Vector, Fraction], ...]:
        out = []
        for lhs, rhs in pairs:
            v = as_vector(lhs)
            if len(v) != self.n_vars:
                raise ValueError("row width mismatch")
            out.append((v, Fraction(rhs)))
        return tuple(out)

    def row_count(self) -> int:
        return len(self.eq) + len(self.ge) + len(self.gt)


@dataclass(frozen=True)
class LPOutcome:
    """Solver verdict plus the exact certificate backing it.

    farkas holds one multiplier per row in [eq, ge, gt] order; ge/gt
    multipliers are nonnegative and recombine the rows into an impossible
    inequality (0 >= r with r > 0, or 0 > 0 via a strict row).
    """

    status: str
    witness: Vector | None = None
    farkas: Vector | None = None
    ray: Vector | None = None
    value: Fraction | None = None

    @staticmethod
    def feasible(witness) -> "LPOutcome":
        return LPOutcome("feasible", witness=as_vector(witness))

    @staticmethod
    def infeasible(farkas) -> "LPOutcome":
        return LPOutcome("infeasible", farkas=as_vector(farkas))

    @staticmethod
    def optimal(point, value) -> "LPOutcome":
        return LPOutcome("optimal", witness=as_vector(point), value=Fraction(value))

    @staticmethod
    def unbounded(ray) -> "LPOutcome":
        return LPOutcome("unbounded", ray=as_vector(ray))

    def check(self, lp: LinearProgram) -> bool:
        """Re-substitute the certificate into the program, exactly."""
        if self.status in ("feasible", "optimal"):
            x = self.witness
            if x is None or len(x) != lp.n_vars:
                return False
            ok = (
                all(vec_dot(a, x) == b for a, b in lp.eq)
                and all(vec_dot(a, x) >= b for a, b in lp.ge)
                and all(vec_dot(a, x) > b for a, b in lp.gt)
            )
            if self.status == "optimal":
                ok = ok and lp.objective is not None and vec_dot(lp.objective, x) == self.value
            return ok
        if self.status == "infeasible":
            y = self.farkas
            e, g, s = len(lp.eq), len(lp.ge), len(lp.gt)
            if y is None or len(y) != e + g + s:
                return False
            if any(v < 0 for v in y[e:]):
                return False
            combo = [_ZERO] * lp.n_vars
            r = _ZERO
            for mult, (lhs, rhs) in zip(y, lp.eq + lp.ge + lp.gt):
                if mult:
                    for j, c in enumerate(lhs):
                        combo[j] += mult * c
                    r += mult * rhs
            if any(c != 0 for c in combo):
                return False
            return r > 0 or (r == 0 and any(v > 0 for v in y[e + g :]))
        if self.status == "unbounded":
            r = self.ray
            if r is None or len(r) != lp.n_vars or lp.objective is None:
                return False
            return (
                all(vec_dot(a, r) == 0 for a, _ in lp.eq)
                and all(vec_dot(a, r) >= 0 for a, _ in lp.ge)
                and vec_dot(lp.objective, r) > 0
            )
        return False


class _Simplex:
    """Two-phase simplex on the standard form x = p - q, slacks, artificials.

    Tableau layout: constraint rows, then the phase-2 objective row, then the
    phase-1 objective row; columns are [p | q | slacks | artificials | rhs].
    Both objective rows ride along through every pivot, so switching phases
    never rebuilds the tableau.
    """

    def __init__(self, n_vars: int, eq_rows, ge_rows, objective=None):
        self.n = n_vars
        self.g = len(ge_rows)
        self.m = len(eq_rows) + self.g
        self.n_real = 2 * n_vars + self.g
        self.n_total = self.n_real + self.m
        self.rhs_col = self.n_total
        self.obj2_row = self.m
        self.obj1_row = self.m + 1
        self.sigma: list[int] = []

        rows: list[list[Fraction]] = []
        basis: list[int] = []
        specs = [(lhs, rhs, None) for lhs, rhs in eq_rows]
        specs += [(lhs, rhs, i) for i, (lhs, rhs) in enumerate(ge_rows)]
        for k, (lhs, rhs, slack) in enumerate(specs):
            coeffs = [_ZERO] * (self.n_total + 1)
            for j, c in enumerate(lhs):
                coeffs[j] = c
                coeffs[n_vars + j] = -c
            if slack is not None:
                coeffs[2 * n_vars + slack] = Fraction(-1)
            coeffs[self.rhs_col] = rhs
            # A ge row with rhs <= 0 is flipped so its slack has coefficient
            # +1 and can start in the basis; everything else starts on its
            # artificial. Fewer basic artificials means fewer phase-1 pivots.
            if slack is not None and rhs <= 0:
                sign = -1
            else:
                sign = -1 if rhs < 0 else 1
            if sign < 0:
                coeffs = [-c for c in coeffs]
            coeffs[self.n_real + k] = _ONE
            self.sigma.append(sign)
            if slack is not None and rhs <= 0:
                basis.append(2 * n_vars + slack)
            else:
                basis.append(self.n_real + k)
            rows.append(coeffs)

        obj2 = [_ZERO] * (self.n_total + 1)
        if objective is not None:
            for j, c in enumerate(objective):
                obj2[j] = -c
                obj2[n_vars + j] = c
        obj1 = [_ZERO] * (self.n_total + 1)
        for j in range(self.n_real, self.n_total):
            obj1[j] = _ONE
        for k, row in enumerate(rows):
            if basis[k] < self.n_real:
                continue
            for j in range(self.n_total + 1):
                if row[j]:
                    obj1[j] -= row[j]

        self.tab = Tableau(rows + [obj2, obj1])
        self.basis = basis
        self.active = [True] * self.m

    def _bland(self, obj_row: int, allow_artificial: bool) -> str:
        """Pivot until the driving objective row is optimal. Bland's rule."""
        tab = self.tab
        limit = self.n_total if allow_artificial else self.n_real
        while True:
            enter = -1
            for j in range(limit):
                if tab.sign(obj_row, j) < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best: Fraction | None = None
            for i in range(self.m):
                if not self.active[i]:
                    continue
                if tab.sign(i, enter) > 0:
                    ratio = tab.entry(i, self.rhs_col) / tab.entry(i, enter)
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                self._unbounded_col = enter
                return "unbounded"
            tab.pivot(leave, enter)
            self.basis[leave] = enter

    def phase1(self) -> bool:
        status = self._bland(self.obj1_row, allow_artificial=True)
        assert status == "optimal", "phase 1 is always bounded"
        return self.tab.entry(self.obj1_row, self.rhs_col) == 0

    def phase1_farkas(self) -> Vector:
        """Row multipliers certifying infeasibility, in original row order."""
        out = []
        for k in range(self.m):
            coeff = self.tab.entry(self.obj1_row, self.n_real + k)
            out.append(self.sigma[k] * (_ONE - coeff))
        return tuple(out)

    def drive_out_artificials(self) -> None:
        for i in range(self.m):
            if self.basis[i] < self.n_real:
                continue
            col = -1
            for j in range(self.n_real):
                if self.tab.sign(i, j) != 0:
                    col = j
                    break
            if col < 0:
                self.active[i] = False
            else:
                self.tab.pivot(i, col)
                self.basis[i] = col

    def phase2(self) -> str:
        return self._bland(self.obj2_row, allow_artificial=False)

    def objective_value(self) -> Fraction:
        return self.tab.entry(self.obj2_row, self.rhs_col)

    def solution(self) -> Vector:
        x = [_ZERO] * self.n
        for i in range(self.m):
            if not self.active[i]:
                continue
            b = self.basis[i]
            if b < self.n:
                x[b] += self.tab.entry(i, self.rhs_col)
            elif b < 2 * self.n:
                x[b - self.n] -= self.tab.entry(i, self.rhs_col)
        return tuple(x)

    def ray(self) -> Vector:
        enter = self._unbounded_col
        d = [_ZERO] * self.n
        if enter < self.n:
            d[enter] += _ONE
        elif enter < 2 * self.n:
            d[enter - self.n] -= _ONE
        for i in range(self.m):
            if not self.active[i]:
                continue
            b = self.basis[i]
            coeff = self.tab.entry(i, enter)
            if not coeff:
                continue
            if b < self.n:
                d[b] -= coeff
            elif b < 2 * self.n:
                d[b - self.n] += coeff
        return tuple(d)


def _certified(out: LPOutcome, lp: LinearProgram) -> LPOutcome:
    if not out.check(lp):
        raise RuntimeError(f"internal: {out.status} certificate failed re-substitution")
    return out


def lp_optimize(lp: LinearProgram) -> LPOutcome:
    """Maximize lp.objective. Returns optimal(point, value) | unbounded(ray) | infeasible(farkas)."""
    if lp.objective is None:
        raise ValueError("lp_optimize requires an objective")
    if lp.gt:
        raise ValueError("strict rows are feasibility-mode only")
    sx = _Simplex(lp.n_vars, lp.eq, lp.ge, objective=lp.objective)
    if not sx.phase1():
        return _certified(LPOutcome.infeasible(sx.phase1_farkas()), lp)
    sx.drive_out_artificials()
    if sx.phase2() == "unbounded":
        return _certified(LPOutcome.unbounded(sx.ray()), lp)
    point = sx.solution()
    return _certified(LPOutcome.optimal(point, sx.objective_value()), lp)


def lp_feasible(lp: LinearProgram) -> LPOutcome:
    """Decide feasibility. Returns feasible(witness) | infeasible(farkas)."""
    if not lp.gt:
        sx = _Simplex(lp.n_vars, lp.eq, lp.ge)
        if sx.phase1():
            return _certified(LPOutcome.feasible(sx.solution()), lp)
        return _certified(LPOutcome.infeasible(sx.phase1_farkas()), lp)
    return _feasible_strict(lp)


def _feasible_strict(lp: LinearProgram) -> LPOutcome:
    """Strict rows: maximize a gap variable t with E x - t >= f, 0 <= t <= 1."""
    n = lp.n_vars
    ext_eq = [(lhs + (_ZERO,), rhs) for lhs, rhs in lp.eq]
    ext_ge = [(lhs + (_ZERO,), rhs) for lhs, rhs in lp.ge]
    ext_ge += [(lhs + (Fraction(-1),), rhs) for lhs, rhs in lp.gt]
    t_row = vec_zero(n) + (_ONE,)
    ext_ge.append((t_row, _ZERO))
    ext_ge.append((tuple(-c for c in t_row), Fraction(-1)))
    ext = LinearProgram(n + 1, eq=ext_eq, ge=ext_ge, objective=t_row)

    out = lp_optimize(ext)
    if out.status == "infeasible":
        # The two t-bound rows only loosen the certificate; dropping their
        # multipliers still recombines to 0 >= r with r > 0.
        y = out.farkas[: lp.row_count()]
        return _certified(LPOutcome.infeasible(y), lp)
    if out.status != "optimal":
        raise RuntimeError("internal: gap program cannot be unbounded")
    if out.value > 0:
        return _certified(LPOutcome.feasible(out.witness[:n]), lp)
    return _certified(LPOutcome.infeasible(_motzkin_certificate(lp)), lp)


def _motzkin_certificate(lp: LinearProgram) -> Vector:
    """Multipliers proving a relaxation-feasible strict system infeasible.

    Searches for y >= 0 on ge/gt rows with total strict weight 1 whose
    combination cancels every variable and has nonnegative right-hand side;
    such y exists exactly when no point satisfies the strict rows strictly.
    """
    e, g, s = len(lp.eq), len(lp.ge), len(lp.gt)
    rows = list(lp.eq) + list(lp.ge) + list(lp.gt)
    nvars = e + g + s
    cert_eq = []
    for j in range(lp.n_vars):
        cert_eq.append((tuple(lhs[j] for lhs, _ in rows), _ZERO))
    cert_eq.append((vec_zero(e + g) + (_ONE,) * s, _ONE))
    cert_ge = [(tuple(rhs for _, rhs in rows), _ZERO)]
    for k in range(e, nvars):
        unit = [_ZERO] * nvars
        unit[k] = _ONE
        cert_ge.append((tuple(unit), _ZERO))
    cert = LinearProgram(nvars, eq=cert_eq, ge=cert_ge)
    res = lp_feasible(cert)
    if res.status != "feasible":
        raise RuntimeError("internal: strict infeasibility certificate must exist")
    return res.witness
