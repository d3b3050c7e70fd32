"""Tropical linear spaces of matroids.

The membership oracle for L_M (every circuit's minimum attained at least
twice), the fine subdivision fan structure indexed by chains of proper flats,
and exact local-cone membership via lexicographic infinitesimals.

The quotient R^E / R*1 is realized as Z^(n-1) by dropping the last coordinate
after subtracting it; quotient inputs are lifted back by appending 0.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .fan import Fan
from .matroid import LoopsPresent, Matroid, has_loops, proper_flats


class PointNotInSpace(Exception):
    """Local-cone query at a point outside the tropical linear space."""


def quotient_coordinates(v) -> tuple:
    """Class of a vector of R^E in the chosen basis of R^E / R*1."""
    vv = [Fraction(x) for x in v]
    return tuple(x - vv[-1] for x in vv[:-1])


def _lift(M: Matroid, w) -> list[Fraction]:
    w = list(w)
    if len(w) == M.n:
        return [Fraction(x) for x in w]
    if len(w) == M.n - 1:
        return [Fraction(x) for x in w] + [Fraction(0)]
    raise ValueError(
        f"point must have {M.n} (ambient) or {M.n - 1} (quotient) coordinates"
    )


def linear_space_contains(M: Matroid, w) -> bool:
    """True iff every circuit attains its minimum coordinate at least twice."""
    wl = _lift(M, w)
    for c in M.circuits:
        vals = [wl[e] for e in c]
        mn = min(vals)
        if vals.count(mn) < 2:
            return False
    return True


def local_cone_contains(M: Matroid, w, v) -> bool:
    """True iff w + eps*v stays in L_M for all small eps > 0.

    Exact: the minimum over each circuit is taken lexicographically on the
    pairs (w_e, v_e), so no numeric epsilon ever appears.
    """
    wl = _lift(M, w)
    vl = _lift(M, v)
    if not linear_space_contains(M, wl):
        raise PointNotInSpace("base point is not in the tropical linear space")
    for c in M.circuits:
        pairs = [(wl[e], vl[e]) for e in c]
        mn = min(pairs)
        if pairs.count(mn) < 2:
            return False
    return True


@lru_cache(maxsize=None)
def fine_subdivision(M: Matroid) -> Fan:
    """The fan on L_M whose cones are chains of proper flats.

    Rays are the classes of the 0/1 indicator vectors of proper flats, in
    lexicographic flat order.  Raises LoopsPresent on matroids with loops.
    """
    if has_loops(M):
        raise LoopsPresent("tropical linear spaces need loop-free matroids")
    flats = proper_flats(M)
    n = M.n
    rays = []
    for flat in flats:
        e = [1 if i in flat else 0 for i in range(n)]
        q = [e[i] - e[n - 1] for i in range(n - 1)]
        g = 0
        for x in q:
            g = gcd(g, abs(x))
        assert g == 1, "flat indicator class must already be primitive"
        rays.append(tuple(q))

    flat_sets = [frozenset(f) for f in flats]
    above = {
        i: [j for j in range(len(flats)) if flat_sets[i] < flat_sets[j]]
        for i in range(len(flats))
    }
    chains: set[frozenset[int]] = {frozenset()}

    def grow(chain: tuple[int, ...]) -> None:
        chains.add(frozenset(chain))
        for j in above[chain[-1]]:
            grow(chain + (j,))

    for i in range(len(flats)):
        grow((i,))
    return Fan(n - 1, tuple(rays), frozenset(chains))
