"""Regular polyhedral cones: construction, duality, faces, direct sums.

A cone is regular when it is pointed (contains no line) and generating (spans
its ambient space). Both representations are stored canonically: primitive
integer vectors, sorted, each ray extremal and each facet irredundant, so two
cones are set-equal exactly when the dataclasses are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import dd
from .ratlin import nullspace, primitive, rank, solve_linear, vec_dot

IntVec = tuple[int, ...]


class ConeError(ValueError):
    """Input data does not describe a regular cone; the message names the axiom."""


@dataclass(frozen=True)
class PolyhedralCone:
    ambient_dim: int
    rays: tuple[IntVec, ...]
    facets: tuple[IntVec, ...]

    def contains(self, x: Sequence) -> bool:
        x = tuple(map(Fraction, x))
        return all(vec_dot(f, x) >= 0 for f in self.facets)

    def interior_contains(self, x: Sequence) -> bool:
        x = tuple(map(Fraction, x))
        return all(vec_dot(f, x) > 0 for f in self.facets)

    def is_simplicial(self) -> bool:
        return len(self.rays) == self.ambient_dim


@dataclass(frozen=True)
class Face:
    """A face of a cone: the rays vanishing on every facet that is active."""

    parent: PolyhedralCone
    ray_indices: tuple[int, ...]
    active_facets: tuple[int, ...]

    def rays(self) -> list[IntVec]:
        return [self.parent.rays[i] for i in self.ray_indices]

    def span_dim(self) -> int:
        return rank(self.rays()) if self.ray_indices else 0

    def contains(self, x: Sequence) -> bool:
        x = tuple(map(Fraction, x))
        return self.parent.contains(x) and all(
            vec_dot(self.parent.facets[k], x) == 0 for k in self.active_facets
        )


def dd_convert(rays: Iterable[Sequence], ambient_dim: int) -> list[IntVec]:
    """Facet normals of the cone generated by ``rays`` (requires full span)."""
    rays = [primitive(r) for r in rays]
    if rank(rays) < ambient_dim:
        raise ConeError(
            f"not generating: rays span {rank(rays)} of {ambient_dim} dimensions"
        )
    return dd.extreme_rays(rays, ambient_dim)


def dd_convert_inv(facets: Iterable[Sequence], ambient_dim: int) -> list[IntVec]:
    """Extreme rays of {x : f.x >= 0} (requires a pointed cone)."""
    facets = [primitive(f) for f in facets]
    if rank(facets) < ambient_dim:
        line = nullspace(facets, ncols=ambient_dim)[0]
        raise ConeError(f"not pointed: cone contains the line through {primitive(line)}")
    return dd.extreme_rays(facets, ambient_dim)


def cone_from_rays(rays: Iterable[Sequence], ambient_dim: int) -> PolyhedralCone:
    facets = dd_convert(rays, ambient_dim)
    if rank(facets) < ambient_dim:
        line = nullspace(facets, ncols=ambient_dim)
        hint = primitive(line[0]) if line else "a nonzero vector"
        raise ConeError(f"not pointed: cone contains the line through {hint}")
    canonical_rays = dd.extreme_rays(facets, ambient_dim)
    return PolyhedralCone(ambient_dim, tuple(canonical_rays), tuple(sorted(facets)))


def cone_from_facets(facets: Iterable[Sequence], ambient_dim: int) -> PolyhedralCone:
    rays = dd_convert_inv(facets, ambient_dim)
    if rank(rays) < ambient_dim:
        raise ConeError(
            f"not generating: facet cone spans {rank(rays)} of {ambient_dim} dimensions"
        )
    canonical_facets = dd.extreme_rays(rays, ambient_dim)
    return PolyhedralCone(ambient_dim, tuple(sorted(rays)), tuple(canonical_facets))


def dual_cone(c: PolyhedralCone) -> PolyhedralCone:
    """The dual of a regular cone is regular, with rays and facets exchanged."""
    return PolyhedralCone(c.ambient_dim, c.facets, c.rays)


def contains(c: PolyhedralCone, x: Sequence) -> bool:
    return c.contains(x)


def face_of(c: PolyhedralCone, y: Sequence) -> Face:
    """Smallest face of c containing y (y must belong to the cone)."""
    y = tuple(map(Fraction, y))
    if not c.contains(y):
        raise ValueError("point lies outside the cone")
    active = tuple(k for k, f in enumerate(c.facets) if vec_dot(f, y) == 0)
    ray_idx = tuple(
        i
        for i, r in enumerate(c.rays)
        if all(vec_dot(c.facets[k], r) == 0 for k in active)
    )
    return Face(c, ray_idx, active)


def is_extremal(c: PolyhedralCone, y: Sequence) -> bool:
    """True iff the smallest face containing y is the ray spanned by y."""
    y = tuple(map(Fraction, y))
    if not c.contains(y):
        raise ValueError("point lies outside the cone")
    if all(v == 0 for v in y):
        return False
    face = face_of(c, y)
    return len(face.ray_indices) == 1 and primitive(y) == c.rays[face.ray_indices[0]]


def all_faces(c: PolyhedralCone) -> list[Face]:
    """The full face lattice, via closure of facet intersections."""
    seen: dict[tuple[int, ...], Face] = {}
    top = tuple(range(len(c.rays)))
    queue = [top]
    seen[top] = Face(c, top, _active_for(c, top))
    while queue:
        current = queue.pop()
        for k, f in enumerate(c.facets):
            sub = tuple(i for i in current if vec_dot(f, c.rays[i]) == 0)
            if sub not in seen:
                seen[sub] = Face(c, sub, _active_for(c, sub))
                queue.append(sub)
    return sorted(seen.values(), key=lambda fc: (len(fc.ray_indices), fc.ray_indices))


def _active_for(c: PolyhedralCone, ray_idx: tuple[int, ...]) -> tuple[int, ...]:
    if not ray_idx:
        return tuple(range(len(c.facets)))
    return tuple(
        k
        for k, f in enumerate(c.facets)
        if all(vec_dot(f, c.rays[i]) == 0 for i in ray_idx)
    )


def ordered_direct_sum(a: PolyhedralCone, b: PolyhedralCone) -> PolyhedralCone:
    """Coordinate-wise direct sum: elements are pairs ordered componentwise."""
    da, db = a.ambient_dim, b.ambient_dim
    zeros_a = (0,) * da
    zeros_b = (0,) * db
    rays = [r + zeros_b for r in a.rays] + [zeros_a + s for s in b.rays]
    facets = [f + zeros_b for f in a.facets] + [zeros_a + g for g in b.facets]
    return PolyhedralCone(da + db, tuple(sorted(rays)), tuple(sorted(facets)))


def irreducible_partition(c: PolyhedralCone) -> list[tuple[int, ...]]:
    """Group ray indices into the summands of the finest direct-sum splitting.

    Two rays share a summand exactly when a minimal linear dependence links
    them; those classes are computed from the fundamental circuits of a ray
    basis and their spans are automatically independent.
    """
    k = len(c.rays)
    if k == c.ambient_dim:
        return [(i,) for i in range(k)]
    basis_idx: list[int] = []
    current = 0
    for i in range(k):
        cand = [c.rays[j] for j in basis_idx] + [c.rays[i]]
        if rank(cand) > current:
            basis_idx.append(i)
            current += 1
    parent = list(range(k))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        parent[find(i)] = find(j)

    cols = [[Fraction(c.rays[b][row]) for b in basis_idx] for row in range(c.ambient_dim)]
    for e in range(k):
        if e in basis_idx:
            continue
        coeffs = solve_linear(cols, c.rays[e])
        assert coeffs is not None
        for pos, b in enumerate(basis_idx):
            if coeffs[pos] != 0:
                union(e, b)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(g) for g in groups.values())


def irreducible_components(c: PolyhedralCone) -> list[PolyhedralCone]:
    """The irreducible summands, each written in coordinates of its own span."""
    out = []
    for group in irreducible_partition(c):
        group_rays = [c.rays[i] for i in group]
        sub_basis: list[IntVec] = []
        for r in group_rays:
            if rank(sub_basis + [r]) > len(sub_basis):
                sub_basis.append(r)
        cols = [[Fraction(b[row]) for b in sub_basis] for row in range(c.ambient_dim)]
        coords = []
        for r in group_rays:
            sol = solve_linear(cols, r)
            assert sol is not None
            coords.append(sol)
        out.append(cone_from_rays(coords, len(sub_basis)))
    return out
