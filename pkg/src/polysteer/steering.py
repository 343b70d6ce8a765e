"""Ensemble lifting and steering decisions for bipartite states.

A bipartite state steers its B marginal when every ensemble for that
marginal is produced by measuring some observable on the A side. Over
polyhedral cones the ensembles of a fixed length form a polytope whose
vertices can be enumerated exactly, and the liftable ensembles form a
convex subset, so checking the vertices decides each length outright.
Verdicts therefore come qualified by the depth searched, and every
verdict carries certificates: lifted observables on success, an
unliftable ensemble with an exact infeasibility vector on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .composite import (
    BipartiteState,
    TensorSpace,
    marginal_b,
    min_tensor,
    purify,
)
from .cone import PolyhedralCone, cone_from_rays, face_of, is_extremal
from .dd import polytope_vertices
from .ratlin import (
    LinearProgram,
    Matrix,
    Vector,
    as_vector,
    lp_feasible,
    lp_optimize,
    mat_transpose,
    nullspace,
    rank,
    solve_linear,
    vec_dot,
    vec_scale,
    vec_sub,
)

_ZERO = Fraction(0)
from .space import (
    Effect,
    HomogeneityVerdict,
    Observable,
    StateSpace,
    effects_interval,
    is_homogeneous,
    is_weakly_self_dual,
)


def order_interval_vertices(cone: PolyhedralCone, top: Sequence) -> tuple[Vector, ...]:
    """Vertices of the order interval [0, top] = {y : y >= 0, top - y >= 0}."""
    top = as_vector(top)
    if not cone.contains(top):
        raise ValueError("interval top must lie in the cone")
    rows: list[tuple[Vector, Fraction]] = []
    for g in cone.facets:
        gv = as_vector(g)
        rows.append((gv, Fraction(0)))
        rows.append((vec_scale(Fraction(-1), gv), -vec_dot(gv, top)))
    return tuple(polytope_vertices(rows, [], cone.ambient_dim))


@dataclass(frozen=True)
class Ensemble:
    """A finite list of cone elements; the state it splits is their sum."""

    space: StateSpace
    parts: tuple[Vector, ...]

    def __post_init__(self) -> None:
        parts = tuple(as_vector(p) for p in self.parts)
        if not parts:
            raise ValueError("an ensemble needs at least one part")
        for p in parts:
            if not self.space.cone.contains(p):
                raise ValueError(f"ensemble part {p} is not in the cone")
        object.__setattr__(self, "parts", parts)

    def total(self) -> Vector:
        return tuple(sum(col) for col in zip(*self.parts))

    def is_for(self, target: Sequence) -> bool:
        return self.total() == as_vector(target)

    def canonical_parts(self) -> tuple[Vector, ...]:
        return tuple(sorted(self.parts))


@dataclass(frozen=True)
class Chain:
    """Points 0 <= y1 <= y2 <= ... <= yk in the cone order."""

    space: StateSpace
    points: tuple[Vector, ...]

    def __post_init__(self) -> None:
        points = tuple(as_vector(y) for y in self.points)
        if not points:
            raise ValueError("a chain needs at least one point")
        previous = (Fraction(0),) * self.space.dim
        for y in points:
            if not self.space.cone.contains(vec_sub(y, previous)):
                raise ValueError("chain points must increase in the cone order")
            previous = y
        object.__setattr__(self, "points", points)


def ensemble_to_chain(e: Ensemble) -> Chain:
    """Partial sums of the parts, ending at the ensemble's total."""
    running = (Fraction(0),) * e.space.dim
    points = []
    for p in e.parts:
        running = tuple(a + b for a, b in zip(running, p))
        points.append(running)
    return Chain(e.space, tuple(points))


def chain_to_ensemble(c: Chain) -> Ensemble:
    """Successive differences of the chain points."""
    previous = (Fraction(0),) * c.space.dim
    parts = []
    for y in c.points:
        parts.append(vec_sub(y, previous))
        previous = y
    return Ensemble(c.space, tuple(parts))


@dataclass(frozen=True)
class LiftResult:
    """Either an observable realizing the ensemble or a Farkas vector."""

    observable: Observable | None
    farkas: Vector | None

    def __bool__(self) -> bool:
        return self.observable is not None


@dataclass(frozen=True)
class ChainLift:
    """Either an increasing preimage chain inside [0, u_A] or a Farkas vector."""

    points: tuple[Vector, ...] | None
    farkas: Vector | None

    def __bool__(self) -> bool:
        return self.points is not None


def ensemble_lift_program(omega: BipartiteState, e: Ensemble) -> LinearProgram:
    """The feasibility program behind lift_ensemble, over stacked effect
    coordinates. Exposed so an infeasibility certificate can be re-checked
    against the very rows it claims to combine."""
    space_a = omega.space_a
    da, db = space_a.dim, omega.space_b.dim
    k = len(e.parts)
    n = k * da
    ge: list[tuple[Vector, Fraction]] = []
    for i in range(k):
        for r in space_a.cone.rays:
            row = [Fraction(0)] * n
            for c in range(da):
                row[i * da + c] = Fraction(r[c])
            ge.append((tuple(row), Fraction(0)))
    eq: list[tuple[Vector, Fraction]] = []
    for c in range(da):
        row = [Fraction(0)] * n
        for i in range(k):
            row[i * da + c] = Fraction(1)
        eq.append((tuple(row), Fraction(space_a.unit[c])))
    for i, part in enumerate(e.parts):
        for j in range(db):
            row = [Fraction(0)] * n
            for c in range(da):
                row[i * da + c] = omega.matrix[j][c]
            eq.append((tuple(row), part[j]))
    return LinearProgram(n, eq=eq, ge=ge)


def lift_ensemble(omega: BipartiteState, e: Ensemble) -> LiftResult:
    """An observable {a_i} on A with each image omega-hat(a_i) = e.parts[i].

    One exact feasibility LP over the stacked effect coordinates: every a_i
    must be nonnegative on the rays of the A cone, the a_i must sum to the
    order unit, and each must map onto its part.
    """
    target = marginal_b(omega).vector
    if not e.is_for(target):
        raise ValueError("the ensemble does not sum to the B marginal")
    space_a = omega.space_a
    da = space_a.dim
    k = len(e.parts)
    out = lp_feasible(ensemble_lift_program(omega, e))
    if out.status != "feasible":
        return LiftResult(None, out.farkas)
    w = out.witness
    effects = tuple(
        Effect(space_a, tuple(w[i * da + c] for c in range(da))) for i in range(k)
    )
    return LiftResult(Observable(space_a, effects), None)


def lift_chain(omega: BipartiteState, c: Chain) -> ChainLift:
    """Preimages x1 <= ... <= xk within [0, u_A] with omega-hat(x_i) = y_i."""
    target = marginal_b(omega).vector
    top_gap = vec_sub(target, c.points[-1])
    if not omega.space_b.cone.contains(top_gap):
        raise ValueError("the chain must stay below the B marginal")
    space_a = omega.space_a
    da, db = space_a.dim, omega.space_b.dim
    k = len(c.points)
    n = k * da
    ge: list[tuple[Vector, Fraction]] = []
    for r in space_a.cone.rays:
        rv = as_vector(r)
        bound = vec_dot(space_a.unit, rv)
        for i in range(k):
            row = [Fraction(0)] * n
            for col in range(da):
                row[i * da + col] = rv[col]
                if i > 0:
                    row[(i - 1) * da + col] = -rv[col]
            ge.append((tuple(row), Fraction(0)))
        last = [Fraction(0)] * n
        for col in range(da):
            last[(k - 1) * da + col] = -rv[col]
        ge.append((tuple(last), -bound))
    eq: list[tuple[Vector, Fraction]] = []
    for i, y in enumerate(c.points):
        for j in range(db):
            row = [Fraction(0)] * n
            for col in range(da):
                row[i * da + col] = omega.matrix[j][col]
            eq.append((tuple(row), y[j]))
    out = lp_feasible(LinearProgram(n, eq=eq, ge=ge))
    if out.status != "feasible":
        return ChainLift(None, out.farkas)
    w = out.witness
    points = tuple(
        tuple(w[i * da + col] for col in range(da)) for i in range(k)
    )
    return ChainLift(points, None)


def chain_lift_to_observable(
    omega: BipartiteState, lift: ChainLift
) -> Observable:
    """Differences of the lifted chain, completed to sum to the order unit."""
    if not lift:
        raise ValueError("only a successful chain lift converts")
    space_a = omega.space_a
    effects = []
    previous = (Fraction(0),) * space_a.dim
    for x in lift.points:
        effects.append(Effect(space_a, vec_sub(x, previous)))
        previous = x
    remainder = vec_sub(space_a.unit, previous)
    if any(x != 0 for x in remainder):
        effects.append(Effect(space_a, remainder))
    return Observable(space_a, tuple(effects))


def image_interval(omega: BipartiteState) -> tuple[Vector, ...]:
    """Extreme points of the image of the A-side effect interval."""
    images = []
    for v in effects_interval(omega.space_a).vertices:
        img = omega.apply(v)
        if img not in images:
            images.append(img)
    extreme = []
    for i, p in enumerate(images):
        others = [q for j, q in enumerate(images) if j != i]
        if not others:
            extreme.append(p)
            continue
        n = len(others)
        eq = []
        for c in range(len(p)):
            eq.append((tuple(q[c] for q in others), p[c]))
        eq.append(((Fraction(1),) * n, Fraction(1)))
        ge = []
        for j in range(n):
            row = [Fraction(0)] * n
            row[j] = Fraction(1)
            ge.append((tuple(row), Fraction(0)))
        if lp_feasible(LinearProgram(n, eq=eq, ge=ge)).status != "feasible":
            extreme.append(p)
    return tuple(sorted(extreme))


def face_condition(omega: BipartiteState) -> bool:
    """Whether the images of the dual extreme rays generate the face of the
    B marginal; necessary for steering but not sufficient."""
    target = marginal_b(omega).vector
    face = face_of(omega.space_b.cone, target)
    images = [omega.apply(f) for f in omega.space_a.cone.facets]
    for img in images:
        if not face.contains(img):
            return False
    n = len(images)
    for fr in face.rays():
        eq = []
        for c in range(omega.space_b.dim):
            eq.append((tuple(img[c] for img in images), Fraction(fr[c])))
        ge = []
        for j in range(n):
            row = [Fraction(0)] * n
            row[j] = Fraction(1)
            ge.append((tuple(row), Fraction(0)))
        if lp_feasible(LinearProgram(n, eq=eq, ge=ge)).status != "feasible":
            return False
    return True


@dataclass(frozen=True)
class LiftedEnsemble:
    ensemble: Ensemble
    observable: Observable


@dataclass(frozen=True)
class SteeringVerdict:
    """Outcome of the depth-bounded steering decision.

    status is "steering_up_to" when every extremal ensemble with at most
    `depth` parts lifted, "not_steering" when some ensemble provably fails,
    and "undecided" is reserved for callers that abandon the search early.
    """

    status: str
    depth: int
    lifted: tuple[LiftedEnsemble, ...] = ()
    counterexample: Ensemble | None = None
    farkas: Vector | None = None

    def __bool__(self) -> bool:
        return self.status == "steering_up_to"


def ensemble_polytope_vertices(
    space: StateSpace, target: Sequence, k: int
) -> list[tuple[Vector, ...]]:
    """Vertices of the polytope of k-part splittings of target in the cone."""
    target = as_vector(target)
    db = space.dim
    n = (k - 1) * db
    ge: list[tuple[Vector, Fraction]] = []
    for i in range(k - 1):
        for g in space.cone.facets:
            row = [Fraction(0)] * n
            for c in range(db):
                row[i * db + c] = Fraction(g[c])
            ge.append((tuple(row), Fraction(0)))
    for g in space.cone.facets:
        gv = as_vector(g)
        row = [Fraction(0)] * n
        for i in range(k - 1):
            for c in range(db):
                row[i * db + c] = -gv[c]
        ge.append((tuple(row), -vec_dot(gv, target)))
    out = []
    for v in polytope_vertices(ge, [], n):
        parts = [tuple(v[i * db + c] for c in range(db)) for i in range(k - 1)]
        rest = target
        for p in parts:
            rest = vec_sub(rest, p)
        parts.append(rest)
        out.append(tuple(parts))
    return out


def decide_steering(omega: BipartiteState, depth: int = 3) -> SteeringVerdict:
    """Check every extremal ensemble of the B marginal with up to `depth`
    parts. All lift: steering up to that depth. Any failure: not steering,
    with the unliftable ensemble and its infeasibility certificate."""
    if depth < 2:
        raise ValueError("the search depth must be at least 2")
    target = marginal_b(omega).vector
    space_b = omega.space_b
    lifted: list[LiftedEnsemble] = []
    seen: set[tuple[Vector, ...]] = set()
    for k in range(2, depth + 1):
        for parts in ensemble_polytope_vertices(space_b, target, k):
            nonzero = tuple(p for p in parts if any(x != 0 for x in p))
            if not nonzero:
                continue
            e = Ensemble(space_b, nonzero)
            key = e.canonical_parts()
            if key in seen:
                continue
            seen.add(key)
            result = lift_ensemble(omega, e)
            if not result:
                return SteeringVerdict(
                    "not_steering",
                    depth=k,
                    lifted=tuple(lifted),
                    counterexample=Ensemble(space_b, key),
                    farkas=result.farkas,
                )
            lifted.append(LiftedEnsemble(e, result.observable))
    return SteeringVerdict("steering_up_to", depth=depth, lifted=tuple(lifted))


@dataclass(frozen=True)
class AffineSection:
    """An affine right inverse of the state's map over [0, marginal].

    Stored by its values on an affine basis of the interval's hull; apply
    reconstructs the value anywhere on that hull by solving for affine
    coordinates.
    """

    base_points: tuple[Vector, ...]
    images: tuple[Vector, ...]

    def coordinates(self, y: Sequence) -> Vector:
        y = as_vector(y)
        cols = len(self.base_points)
        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        for c in range(len(y)):
            rows.append([Fraction(p[c]) for p in self.base_points])
            rhs.append(Fraction(y[c]))
        rows.append([Fraction(1)] * cols)
        rhs.append(Fraction(1))
        lam = solve_linear(rows, rhs)
        if lam is None:
            raise ValueError("point is outside the section's affine hull")
        return lam

    def apply(self, y: Sequence) -> Vector:
        lam = self.coordinates(y)
        d = len(self.images[0])
        return tuple(
            sum(lam[i] * self.images[i][c] for i in range(len(self.images)))
            for c in range(d)
        )

    def verify(self, omega: BipartiteState) -> bool:
        target = marginal_b(omega).vector
        interval = effects_interval(omega.space_a)
        for y in order_interval_vertices(omega.space_b.cone, target):
            x = self.apply(y)
            if omega.apply(x) != y or not interval.contains(x):
                return False
        # Monotonicity: the linear part must carry face directions to
        # nonnegative functionals, so chains map to chains.
        face = face_of(omega.space_b.cone, target)
        zero = (Fraction(0),) * omega.space_b.dim
        base = self.apply(zero)
        for fr in face.rays():
            step = vec_sub(self.apply(fr), base)
            for r in omega.space_a.cone.rays:
                if vec_dot(step, as_vector(r)) < 0:
                    return False
        return True


@dataclass(frozen=True)
class SectionSearch:
    """Feasibility report for affine sections over the marginal's interval."""

    section: AffineSection | None
    dimension: int | None = None
    alternate: AffineSection | None = None
    farkas: Vector | None = None

    def __bool__(self) -> bool:
        return self.section is not None


def _affine_basis(points: Sequence[Vector]) -> list[Vector]:
    base = points[0]
    chosen = [base]
    diffs: list[Vector] = []
    for p in points[1:]:
        d = vec_sub(p, base)
        if rank(diffs + [list(d)]) > len(diffs):
            diffs.append(list(d))
            chosen.append(p)
    return chosen


def _basis_coords(basis: Sequence[Vector], y: Vector) -> Vector:
    """Affine weights of y over an affinely independent basis."""
    dim = len(basis[0])
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for c in range(dim):
        rows.append([Fraction(p[c]) for p in basis])
        rhs.append(Fraction(y[c]))
    rows.append([Fraction(1)] * len(basis))
    rhs.append(Fraction(1))
    lam = solve_linear(rows, rhs)
    assert lam is not None
    return lam


def _direction_coords(basis: Sequence[Vector], direction: Vector) -> Vector | None:
    """Weights of a direction over the basis differences b_i - b_0."""
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for c in range(len(basis[0])):
        rows.append([Fraction(p[c] - basis[0][c]) for p in basis[1:]])
        rhs.append(Fraction(direction[c]))
    return solve_linear(rows, rhs)


def _section_search_full(
    omega: BipartiteState, verts: Sequence[Vector], basis: Sequence[Vector]
) -> SectionSearch:
    """Feasibility search over the raw basis images, one block of unknowns
    per basis point. Used when the reduced parametrization does not apply;
    its farkas certificate covers the value constraints explicitly."""
    space_a, space_b = omega.space_a, omega.space_b
    da = space_a.dim
    m = len(basis)
    n = m * da

    eq: list[tuple[Vector, Fraction]] = []
    ge: list[tuple[Vector, Fraction]] = []
    for y in verts:
        lam = _basis_coords(basis, y)
        for j in range(space_b.dim):
            row = [Fraction(0)] * n
            for i in range(m):
                for c in range(da):
                    row[i * da + c] = lam[i] * omega.matrix[j][c]
            eq.append((tuple(row), Fraction(y[j])))
        for r in space_a.cone.rays:
            rv = as_vector(r)
            bound = vec_dot(space_a.unit, rv)
            low = [Fraction(0)] * n
            for i in range(m):
                for c in range(da):
                    low[i * da + c] = lam[i] * rv[c]
            ge.append((tuple(low), Fraction(0)))
            ge.append((tuple(-x for x in low), -bound))
    face = face_of(space_b.cone, target := marginal_b(omega).vector)
    for fr in face.rays():
        coeff = _direction_coords(basis, as_vector(fr))
        if coeff is None:
            continue
        for r in space_a.cone.rays:
            rv = as_vector(r)
            row = [Fraction(0)] * n
            for i in range(1, m):
                for c in range(da):
                    row[i * da + c] += coeff[i - 1] * rv[c]
                    row[0 * da + c] -= coeff[i - 1] * rv[c]
            ge.append((tuple(row), Fraction(0)))

    out = lp_feasible(LinearProgram(n, eq=eq, ge=ge))
    if out.status != "feasible":
        return SectionSearch(None, farkas=out.farkas)

    def to_section(w: Vector) -> AffineSection:
        images = tuple(
            tuple(w[i * da + c] for c in range(da)) for i in range(m)
        )
        return AffineSection(tuple(basis), images)

    directions: list[Vector] = []
    alternate = None
    point = out.witness
    for coord in range(n):
        obj = [Fraction(0)] * n
        obj[coord] = Fraction(1)
        hi = lp_optimize(LinearProgram(n, eq=eq, ge=ge, objective=tuple(obj)))
        lo = lp_optimize(
            LinearProgram(n, eq=eq, ge=ge, objective=tuple(-x for x in obj))
        )
        if hi.status != "optimal" or lo.status != "optimal":
            continue
        if hi.value != -lo.value:
            gap = vec_sub(hi.witness, lo.witness)
            if rank(directions + [list(gap)]) > len(directions):
                directions.append(list(gap))
                if alternate is None:
                    point = lo.witness
                    alternate = to_section(hi.witness)
    dimension = len(directions)
    return SectionSearch(
        to_section(point),
        dimension=dimension,
        alternate=alternate,
    )


def affine_section_search(omega: BipartiteState) -> SectionSearch:
    """Search for an affine, order-preserving right inverse of the state's
    map from [0, marginal] into [0, u_A]; such a section forces every
    ensemble of every length to lift. Reports the feasible set's dimension
    and, when it is positive, a second distinct section.

    The unknown image of each basis point is written as one particular
    preimage plus a combination of kernel directions of the state's map.
    That substitution satisfies the value constraints identically (an affine
    map that inverts the state's map on an affine basis inverts it on the
    whole hull), so the search runs over kernel coefficients only and the
    program keeps just the membership and monotonicity inequalities.
    """
    target = marginal_b(omega).vector
    space_a, space_b = omega.space_a, omega.space_b
    da = space_a.dim
    verts = order_interval_vertices(space_b.cone, target)
    basis = _affine_basis(verts)
    m = len(basis)

    mat = [[Fraction(omega.matrix[j][c]) for c in range(da)] for j in range(space_b.dim)]
    particular: list[Vector] = []
    for p in basis:
        w0 = solve_linear(mat, [Fraction(x) for x in p])
        if w0 is None:
            return _section_search_full(omega, verts, basis)
        particular.append(w0)
    kernel = nullspace(mat, ncols=da)
    kappa = len(kernel)
    n = m * kappa

    # Rows over the kernel coefficients: image of each interval vertex sits
    # in [0, u_A], and the linear part sends the marginal's face into the
    # positive cone.
    ge: list[tuple[Vector, Fraction]] = []
    fixed_violation = False
    for y in verts:
        lam = _basis_coords(basis, y)
        base_pt = [_ZERO] * da
        for i in range(m):
            for c in range(da):
                base_pt[c] += lam[i] * particular[i][c]
        for r in space_a.cone.rays:
            rv = as_vector(r)
            bound = vec_dot(space_a.unit, rv)
            const = vec_dot(tuple(base_pt), rv)
            low = [_ZERO] * n
            for i in range(m):
                for t in range(kappa):
                    low[i * kappa + t] = lam[i] * vec_dot(kernel[t], rv)
            if kappa == 0:
                fixed_violation = fixed_violation or const < 0 or const > bound
            else:
                ge.append((tuple(low), -const))
                ge.append((tuple(-x for x in low), const - bound))
    face = face_of(space_b.cone, target)
    for fr in face.rays():
        coeff = _direction_coords(basis, as_vector(fr))
        if coeff is None:
            continue
        step = [_ZERO] * da
        for i in range(1, m):
            for c in range(da):
                step[c] += coeff[i - 1] * (particular[i][c] - particular[0][c])
        for r in space_a.cone.rays:
            rv = as_vector(r)
            const = vec_dot(tuple(step), rv)
            row = [_ZERO] * n
            for i in range(1, m):
                for t in range(kappa):
                    kr = coeff[i - 1] * vec_dot(kernel[t], rv)
                    row[i * kappa + t] += kr
                    row[0 * kappa + t] -= kr
            if kappa == 0:
                fixed_violation = fixed_violation or const < 0
            else:
                ge.append((tuple(row), -const))

    def to_section(xi: Vector) -> AffineSection:
        images = []
        for i in range(m):
            w = list(particular[i])
            for t in range(kappa):
                s = xi[i * kappa + t]
                for c in range(da):
                    w[c] += s * kernel[t][c]
            images.append(tuple(w))
        return AffineSection(tuple(basis), tuple(images))

    if kappa == 0:
        if fixed_violation:
            return _section_search_full(omega, verts, basis)
        return SectionSearch(to_section(()), dimension=0)

    out = lp_feasible(LinearProgram(n, ge=ge))
    if out.status != "feasible":
        return SectionSearch(None, farkas=out.farkas)

    directions: list[Vector] = []
    alternate = None
    point = out.witness
    for coord in range(n):
        obj = [Fraction(0)] * n
        obj[coord] = Fraction(1)
        hi = lp_optimize(LinearProgram(n, ge=ge, objective=tuple(obj)))
        lo = lp_optimize(
            LinearProgram(n, ge=ge, objective=tuple(-x for x in obj))
        )
        if hi.status != "optimal" or lo.status != "optimal":
            continue
        if hi.value != -lo.value:
            gap = vec_sub(hi.witness, lo.witness)
            if rank(directions + [list(gap)]) > len(directions):
                directions.append(list(gap))
                if alternate is None:
                    point = lo.witness
                    alternate = to_section(hi.witness)
    dimension = len(directions)
    return SectionSearch(
        to_section(point),
        dimension=dimension,
        alternate=alternate,
    )


def adjoint_state(omega: BipartiteState) -> BipartiteState:
    """The same bilinear form read in the other order: the map B* -> A."""
    return BipartiteState(
        omega.space_b, omega.space_a, mat_transpose(omega.matrix)
    )


def bisteering(
    omega: BipartiteState, depth: int = 3
) -> tuple[SteeringVerdict, SteeringVerdict]:
    """Steering verdicts for the A marginal and the B marginal, in that order."""
    return (
        decide_steering(adjoint_state(omega), depth),
        decide_steering(omega, depth),
    )


def injective_steering_implies_iso(omega: BipartiteState, depth: int = 2) -> bool:
    """Cross-check: an injective map steering an interior marginal must be an
    order isomorphism. Returns whether that implication held here."""
    from .composite import is_isomorphism_state

    if nullspace(list(omega.matrix), ncols=omega.space_a.dim):
        raise ValueError("the cross-check needs an injective map")
    target = marginal_b(omega).vector
    if not omega.space_b.cone.interior_contains(target):
        raise ValueError("the cross-check needs an interior marginal")
    steering = bool(decide_steering(omega, depth))
    iso = is_isomorphism_state(omega) is not None
    return iso or not steering


def steering_product_inner(
    a: StateSpace,
    b: StateSpace,
    generators: Sequence[BipartiteState] = (),
    depth: int = 2,
) -> TensorSpace:
    """An inner approximation of the composite cone generated by steering
    states: the supplied generators (each checked to steer at the given
    depth) together with all product states."""
    rays = [list(r) for r in min_tensor(a, b).cone.rays]
    for g in generators:
        if g.space_a.cone != a.cone or g.space_b.cone != b.cone:
            raise ValueError("generator defined over different factors")
        if not decide_steering(g, depth):
            raise ValueError(
                f"generator fails the steering check at depth {depth}"
            )
        rays.append(list(g.as_tensor_vector()))
    cone = cone_from_rays(rays, a.dim * b.dim)
    return TensorSpace(a, b, "steering_inner", cone, min_tensor(a, b).unit)


@dataclass(frozen=True)
class ScanEntry:
    state: Vector
    status: str
    verdict: SteeringVerdict | None = None


@dataclass(frozen=True)
class SelfSteeringReport:
    """Grid survey of which states arise as marginals of steering states on
    two copies of the space, cross-checked against the structural criteria
    that predict when the survey can succeed everywhere."""

    entries: tuple[ScanEntry, ...]
    homogeneous: HomogeneityVerdict
    weakly_self_dual: bool
    predicted_universal: bool
    all_steered: bool
    consistent: bool


def universal_self_steering_scan(
    space: StateSpace, grid: Sequence[Sequence], depth: int = 2
) -> SelfSteeringReport:
    entries: list[ScanEntry] = []
    for raw in grid:
        alpha = as_vector(raw)
        if vec_dot(space.unit, alpha) != 1 or not space.cone.contains(alpha):
            raise ValueError("grid entries must be normalized states")
        if space.cone.interior_contains(alpha):
            omega = purify(space, alpha)
            if omega is None:
                entries.append(ScanEntry(alpha, "no_purification"))
                continue
            verdict = decide_steering(omega, depth)
            status = "steered" if verdict else "purification_not_steering"
            entries.append(ScanEntry(alpha, status, verdict))
        elif is_extremal(space.cone, alpha):
            omega = BipartiteState.from_products(
                space, space, [(Fraction(1), alpha, alpha)]
            )
            verdict = decide_steering(omega, depth)
            status = "steered" if verdict else "product_not_steering"
            entries.append(ScanEntry(alpha, status, verdict))
        else:
            entries.append(ScanEntry(alpha, "no_witness_found"))
    hom = is_homogeneous(space)
    wsd = is_weakly_self_dual(space) is not None
    predicted = hom.status == "yes" and wsd
    all_steered = all(e.status == "steered" for e in entries)
    interior = [
        e
        for e in entries
        if space.cone.interior_contains(e.state)
    ]
    # Only the positive prediction is refutable by a finite grid: when the
    # structural criteria hold, every interior grid state must steer. A grid
    # where all samples steer never contradicts a negative prediction, since
    # the failing marginal may simply lie off the grid.
    consistent = not predicted or all(e.status == "steered" for e in interior)
    return SelfSteeringReport(
        entries=tuple(entries),
        homogeneous=hom,
        weakly_self_dual=wsd,
        predicted_universal=predicted,
        all_steered=all_steered,
        consistent=consistent,
    )
