"""Named fixture matroids and fans used throughout the tests and the CLI."""

from __future__ import annotations

from itertools import combinations

from .fan import Fan, make_fan
from .matroid import Matroid, make_matroid


def uniform_matroid(rank: int, n: int) -> Matroid:
    """U_{rank,n}: circuits are all (rank+1)-subsets."""
    if not 0 < rank <= n:
        raise ValueError("need 0 < rank <= n")
    circuits = list(combinations(range(n), rank + 1))
    return make_matroid(n, circuits)


def boolean_matroid(n: int) -> Matroid:
    """Free matroid on n elements: no circuits, single basis."""
    return make_matroid(n, [])


def graphic_k4() -> Matroid:
    """Cycle matroid of the complete graph K4.

    Edges 0..5 in vertex-pair order (01,02,03,12,13,23); circuits are the
    four triangles and the three quadrilaterals.
    """
    circuits = [
        (0, 1, 3),
        (0, 2, 4),
        (1, 2, 5),
        (3, 4, 5),
        (0, 2, 3, 5),
        (0, 1, 4, 5),
        (1, 2, 3, 4),
    ]
    return make_matroid(6, circuits)


def tropical_line_fan() -> Fan:
    """Three rays (1,0), (0,1), (-1,-1) in Z^2 — the Bergman fan of U_{2,3}."""
    return make_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0,), (1,), (2,)])


def quadrant_fan() -> Fan:
    return make_fan(2, [(1, 0), (0, 1)], [(0, 1)])


def permutohedral_a2_fan() -> Fan:
    """Six rays and six 2-cones in Z^2 — the Bergman fan of the free matroid
    on three elements, i.e. the complete fan of the A2 permutohedron."""
    rays = [(1, 0), (0, 1), (-1, -1), (1, 1), (0, -1), (-1, 0)]
    # 2-cones pair the class of e_F with the class of e_G for F < G
    maximal = [(0, 3), (0, 4), (1, 3), (1, 5), (2, 4), (2, 5)]
    return make_fan(2, rays, maximal)


MATROIDS: dict[str, Matroid] = {
    "U12": uniform_matroid(1, 2),
    "U13": uniform_matroid(1, 3),
    "U23": uniform_matroid(2, 3),
    "U24": uniform_matroid(2, 4),
    "U34": uniform_matroid(3, 4),
    "B2": boolean_matroid(2),
    "B3": boolean_matroid(3),
    "MK4": graphic_k4(),
}

FANS: dict[str, Fan] = {
    "F1": tropical_line_fan(),
    "F2": quadrant_fan(),
    "F3": permutohedral_a2_fan(),
}


def catalog_names() -> list[str]:
    return sorted(MATROIDS) + sorted(FANS)
