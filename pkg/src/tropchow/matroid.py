"""Matroids given by circuits.

Circuits are the primary representation (membership tests downstream iterate
them); bases are derived and cached.  Ground sets are 0..n-1.  Everything is
brute force and exhaustive — the catalog lives at n <= 9.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations


class LoopsPresent(Exception):
    """Operation requires a loop-free matroid."""


class InvalidBasepoint(Exception):
    """Basepoint is not an element of the ground set."""


@dataclass(frozen=True)
class Matroid:
    """Ground set 0..n-1 plus the set of circuits, canonically sorted."""

    n: int
    circuits: tuple[tuple[int, ...], ...]


def make_matroid(n: int, circuits) -> Matroid:
    canon = sorted({tuple(sorted(set(int(e) for e in c))) for c in circuits})
    return Matroid(int(n), tuple(canon))


def matroid_from_bases(n: int, base_sets) -> Matroid:
    """Matroid with the given bases; circuits are the minimal dependent sets."""
    bas = {frozenset(int(e) for e in b) for b in base_sets}
    if not bas:
        raise ValueError("a matroid needs at least one basis")
    sizes = {len(b) for b in bas}
    if len(sizes) != 1:
        raise ValueError("bases must share a cardinality")
    r = sizes.pop()

    def independent(S: frozenset) -> bool:
        return any(S <= b for b in bas)

    circuits = []
    ground = range(n)
    for size in range(1, r + 2):
        for c in combinations(ground, size):
            cs = frozenset(c)
            if independent(cs):
                continue
            if all(independent(cs - {e}) for e in c):
                circuits.append(c)
    return make_matroid(n, circuits)


def validate_matroid(M: Matroid) -> str | None:
    """None when the circuit axioms hold; otherwise the first violation."""
    for c in M.circuits:
        if not c:
            return "empty circuit"
        if any(e < 0 or e >= M.n for e in c):
            return f"circuit {list(c)} leaves the ground set 0..{M.n - 1}"
    sets = [frozenset(c) for c in M.circuits]
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if i != j and a < b:
                return f"circuit {sorted(b)} contains circuit {sorted(a)}"
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            for e in a & b:
                target = (a | b) - {e}
                if not any(c <= target for c in sets):
                    return (
                        f"circuit elimination fails for {sorted(a)} and {sorted(b)} "
                        f"at element {e}"
                    )
    return None


def has_loops(M: Matroid) -> bool:
    return any(len(c) == 1 for c in M.circuits)


def is_independent(M: Matroid, S) -> bool:
    s = frozenset(S)
    return not any(s >= frozenset(c) for c in M.circuits)


def rank_of_subset(M: Matroid, S) -> int:
    """Matroid rank of S: size of a maximal independent subset (greedy)."""
    picked: set[int] = set()
    for e in sorted(set(S)):
        if is_independent(M, picked | {e}):
            picked.add(e)
    return len(picked)


def matroid_rank(M: Matroid) -> int:
    return rank_of_subset(M, range(M.n))


@lru_cache(maxsize=None)
def bases(M: Matroid) -> tuple[tuple[int, ...], ...]:
    r = matroid_rank(M)
    return tuple(
        b for b in combinations(range(M.n), r) if is_independent(M, b)
    )


def closure(M: Matroid, S) -> tuple[int, ...]:
    s = set(S)
    r = rank_of_subset(M, s)
    return tuple(sorted(s | {
        e for e in range(M.n) if e not in s and rank_of_subset(M, s | {e}) == r
    }))


def proper_flats(M: Matroid) -> list[tuple[int, ...]]:
    """All flats F with {} != F != E, sorted lexicographically."""
    if has_loops(M):
        raise LoopsPresent("flats of a matroid with loops are not supported")
    ground = range(M.n)
    flats = set()
    for size in range(1, M.n):
        for S in combinations(ground, size):
            if closure(M, S) == S:
                flats.add(S)
    return sorted(flats)


def direct_sum(M1: Matroid, M2: Matroid) -> Matroid:
    shifted = [tuple(e + M1.n for e in c) for c in M2.circuits]
    return make_matroid(M1.n + M2.n, list(M1.circuits) + shifted)


def parallel_connection(M1: Matroid, p1: int, M2: Matroid, p2: int) -> Matroid:
    """Glue M1 and M2 along a basepoint.

    The circuits are exactly: circuits of M1, circuits of M2, and
    (C1 | C2) - {p} for circuits C1 of M1 through p1 and C2 of M2 through p2.
    The three families form an antichain, which is asserted.  Elements of M2
    other than p2 are relabeled to M1.n, M1.n+1, ... keeping relative order.
    """
    if not 0 <= p1 < M1.n:
        raise InvalidBasepoint(f"{p1} not in ground set of the first matroid")
    if not 0 <= p2 < M2.n:
        raise InvalidBasepoint(f"{p2} not in ground set of the second matroid")
    if has_loops(M1) or has_loops(M2):
        raise LoopsPresent("parallel connection needs loop-free matroids")

    relabel = {}
    nxt = M1.n
    for e in range(M2.n):
        if e == p2:
            relabel[e] = p1
        else:
            relabel[e] = nxt
            nxt += 1

    fam1 = [tuple(c) for c in M1.circuits]
    fam2 = [tuple(sorted(relabel[e] for e in c)) for c in M2.circuits]
    fam3 = []
    for c1 in M1.circuits:
        if p1 not in c1:
            continue
        for c2 in M2.circuits:
            if p2 not in c2:
                continue
            merged = (set(c1) | {relabel[e] for e in c2}) - {p1}
            fam3.append(tuple(sorted(merged)))
    all_circuits = fam1 + fam2 + fam3
    sets = [frozenset(c) for c in all_circuits]
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            assert i == j or not a <= b, "parallel-connection circuits must form an antichain"
    return make_matroid(M1.n + M2.n - 1, all_circuits)


def weight_selected_matroid(M: Matroid, w) -> Matroid:
    """The matroid M_w on the same ground set whose bases are the bases of M
    of maximal w-weight.

    The *maximal* convention pairs with the min-attained-twice membership test
    of the tropical linear space: the local cone of L_M at a point with weight
    vector w is L_{M_w}.  (Fixed once, verified by the local-cone oracle test.)
    """
    if has_loops(M):
        raise LoopsPresent("weight selection needs a loop-free matroid")
    wvec = [Fraction(x) for x in w]
    if len(wvec) != M.n:
        raise ValueError("one weight per element required")
    all_bases = bases(M)
    best = max(sum(wvec[e] for e in b) for b in all_bases)
    selected = [b for b in all_bases if sum(wvec[e] for e in b) == best]
    return matroid_from_bases(M.n, selected)
