"""Standard monomial data used in the examples, tests and CLI fixtures."""

from __future__ import annotations

import random
from fractions import Fraction

from .mirror import AmbientToricData
from .tropical import WeightedPointSet, is_maximal, lower_hull_subdivision

GENUS2_HEIGHTS = (
    (5, 2, 1, 2),
    (2, 0, 0, 2),
    (2, 1, 2, 5),
)

BOX_RAYS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def genus2() -> WeightedPointSet:
    """Bidegree (3, 2) curve in P1 x P1 with a maximal degeneration."""
    pairs = [((a, b), GENUS2_HEIGHTS[b][a]) for b in range(3) for a in range(4)]
    return WeightedPointSet.from_pairs(pairs)


def box_ambient(w: WeightedPointSet, epsilon=Fraction(1, 10), varpi=(0, 0, 0, 0)) -> AmbientToricData:
    """P1 x P1 with its four rays and the support values read off the points."""
    return AmbientToricData.for_points(w, BOX_RAYS, varpi, epsilon)


def pair_of_pants(n: int) -> WeightedPointSet:
    """``1 + x_1 + ... + x_n`` with all heights zero."""
    origin = (0,) * n
    units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return WeightedPointSet.from_pairs([(origin, 0)] + [(u, 0) for u in units], n)


def hyperplane_ambient(n: int, area=1, epsilon=Fraction(1, 10)) -> AmbientToricData:
    """P^n: rays ``e_i`` and ``-(e_1 + ... + e_n)``, the last facet at ``area``."""
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [(-1,) * n]
    return AmbientToricData(rays, (0,) * n + (area,), (0,) * n + (1,), epsilon)


def ale(k: int, maximal: bool = True) -> WeightedPointSet:
    """Points ``0..k+1`` on the line; convex heights give the resolved case."""
    if maximal:
        return WeightedPointSet.from_pairs([((j,), j * j) for j in range(k + 2)], 1)
    return WeightedPointSet.from_pairs([((0,), 0), ((k + 1,), 0)], 1)


def ale_flat(k: int) -> WeightedPointSet:
    """All points ``0..k+1`` at height zero: only the endpoints are vertices."""
    return WeightedPointSet.from_pairs([((j,), 0) for j in range(k + 2)], 1)


def fermat(d: int = 3) -> WeightedPointSet:
    """``1 + x^d + y^d``: a single non-unimodular triangle."""
    return WeightedPointSet.from_pairs([((0, 0), 0), ((d, 0), 0), ((0, d), 0)])


def bidegree(p: int, q: int, heights) -> WeightedPointSet:
    return WeightedPointSet.from_pairs(
        [((a, b), heights(a, b)) for b in range(q + 1) for a in range(p + 1)]
    )


def standard_bidegree(p: int, q: int) -> WeightedPointSet:
    """A deterministic maximal datum of bidegree ``(p, q)``.

    Squares of the grid are cut along anti-diagonals; this height function
    is strictly convex on that triangulation.
    """
    return bidegree(p, q, lambda a, b: (a + b) ** 2 + Fraction(a * a + b * b, 2) + Fraction(b, 7))


def random_maximal_bidegree(p: int, q: int, rng: random.Random, tries: int = 50) -> WeightedPointSet:
    """Random maximal datum of bidegree ``(p, q)``.

    ``a^2 + b^2`` makes every lattice point a vertex with a margin of 1, so
    noise below 1/2 keeps them all and only picks the diagonal of each unit
    square.  A triangulation using every lattice point of a polygon is
    unimodular; the check only guards against exact ties.
    """
    for _ in range(tries):
        w = bidegree(p, q, lambda a, b: a * a + b * b + Fraction(rng.randrange(1000), 2001))
        if is_maximal(lower_hull_subdivision(w))[0]:
            return w
    raise RuntimeError("no maximal datum found")
