"""Built-in library of worked spaces, states, and ensembles.

Every object here is used by the acceptance suite; the library also serves
as a compatibility corpus for the file format (the `fixtures` subcommand
emits it as a theory file).
"""

from __future__ import annotations

from fractions import Fraction

from .composite import BipartiteState
from .cone import cone_from_rays
from .space import StateSpace
from .steering import Ensemble
from .theoryfile import TheoryFile

F = Fraction


def _simplex(n: int) -> StateSpace:
    rays = [tuple(int(j == i) for j in range(n)) for i in range(n)]
    return StateSpace(cone_from_rays(rays, n), (1,) * n)


def fixture_library() -> TheoryFile:
    tf = TheoryFile()

    tf.spaces["simplex_2"] = _simplex(2)
    tf.spaces["simplex_3"] = _simplex(3)
    tf.spaces["simplex_4"] = _simplex(4)
    tf.spaces["square_space"] = StateSpace(
        cone_from_rays([(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)], 3),
        (0, 0, 1),
    )
    tf.spaces["pentagon_space"] = StateSpace(
        cone_from_rays(
            [(2, 0, 1), (3, 5, 4), (-1, 1, 2), (-1, -1, 2), (3, -5, 4)], 3
        ),
        (0, 0, 1),
    )
    tf.spaces["hexagon_space"] = StateSpace(
        cone_from_rays(
            [(1, 0, 1), (0, 1, 1), (-1, 1, 1), (-1, 0, 1), (0, -1, 1), (1, -1, 1)],
            3,
        ),
        (0, 0, 1),
    )
    tf.spaces["cube_space"] = StateSpace(
        cone_from_rays(
            [(x, y, z, 1) for x in (1, -1) for y in (1, -1) for z in (1, -1)], 4
        ),
        (0, 0, 0, 1),
    )
    tf.spaces["octahedron_space"] = StateSpace(
        cone_from_rays(
            [
                (1, 0, 0, 1),
                (-1, 0, 0, 1),
                (0, 1, 0, 1),
                (0, -1, 0, 1),
                (0, 0, 1, 1),
                (0, 0, -1, 1),
            ],
            4,
        ),
        (0, 0, 0, 1),
    )

    bit = tf.spaces["simplex_2"]
    trit = tf.spaces["simplex_3"]
    sq = tf.spaces["square_space"]
    cube = tf.spaces["cube_space"]
    hexagon = tf.spaces["hexagon_space"]

    # Three-outcome measurement on a trit read into a bit; fails to steer
    # because the basis splitting of its bit marginal never lifts.
    tf.states["nonsteering_table"] = BipartiteState(
        trit, bit, ((F(1, 4), 0, F(1, 4)), (0, F(1, 4), F(1, 4)))
    )
    # Uniformly correlated classical pairs.
    tf.states["classical_correlated_2"] = BipartiteState(
        bit, bit, ((F(1, 2), 0), (0, F(1, 2)))
    )
    tf.states["classical_correlated_3"] = BipartiteState(
        trit,
        trit,
        ((F(1, 3), 0, 0), (0, F(1, 3), 0), (0, 0, F(1, 3))),
    )
    # Correlated mixture of two square vertex states sharing an edge; its
    # edge marginal admits exactly one affine section.
    tf.states["two_squares_correlated"] = BipartiteState(
        sq, sq, ((1, 0, 0), (0, 1, 1), (0, 1, 1))
    )
    # Same marginal, but the vertices pair with swapped edge endpoints; the
    # sections form a one-parameter family.
    tf.states["two_squares_twisted"] = BipartiteState(
        sq, sq, ((1, 1, 0), (0, 0, 1), (0, 0, 1))
    )
    # Opposite cube vertex pairs onto opposite hexagon vertex pairs: steers
    # at depth 2 yet admits no affine section.
    tf.states["cube_to_hexagon"] = BipartiteState(
        cube, hexagon, ((1, 0, -1, 0), (0, 1, 1, 0), (0, 0, 0, 1))
    )
    # Order isomorphism from the square's dual onto the square.
    tf.states["square_iso"] = BipartiteState(
        sq, sq, ((1, -1, 0), (1, 1, 0), (0, 0, 1))
    )
    # The doubling map on one classical coordinate: positive and invertible
    # but not extremal among positive maps.
    tf.states["extremality_gap"] = BipartiteState(bit, bit, ((2, 0), (0, 1)))

    # The basis splitting of the table state's bit marginal (1/2, 1/2).
    tf.ensembles["table_basis_split"] = Ensemble(
        bit, ((0, F(1, 2)), (F(1, 2), 0))
    )

    return tf
