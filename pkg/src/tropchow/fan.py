"""Smooth rational polyhedral fans and the fan surgeries.

Fans store every cone (subset closure is maintained on construction), cones
are frozensets of ray indices, and all geometry is exact: cone membership via
Fraction elimination, pairwise intersection checks via a small Fourier-Motzkin
feasibility solver on the nullspace parametrization.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .intlinalg import (
    LatticeProjection,
    kernel_basis,
    quotient_lattice,
    rational_nullspace,
    smith_normal_form,
    solve_rational,
    vector_gcd,
)


class ConeNotInFan(Exception):
    pass


class ZeroCone(Exception):
    pass


class DimensionMismatch(Exception):
    pass


class NotARefinement(Exception):
    pass


Cone = frozenset


@dataclass(frozen=True)
class Fan:
    """Rational polyhedral fan: primitive rays plus a subset-closed cone set."""

    lattice_rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: frozenset[frozenset[int]]

    def dim(self) -> int:
        return max((len(c) for c in self.cones), default=0)

    def cones_of_dim(self, k: int) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(c)) for c in self.cones if len(c) == k)

    def maximal_cones(self) -> list[tuple[int, ...]]:
        return sorted(
            tuple(sorted(c))
            for c in self.cones
            if not any(c < d for d in self.cones)
        )

    def generators(self, cone) -> list[list[int]]:
        return [list(self.rays[i]) for i in sorted(cone)]


def subset_closure(cone_sets) -> frozenset[frozenset[int]]:
    closed = {frozenset()}
    for c in cone_sets:
        c = tuple(sorted(set(c)))
        for k in range(1, len(c) + 1):
            closed.update(frozenset(s) for s in combinations(c, k))
    return frozenset(closed)


def make_fan(lattice_rank: int, rays, maximal_cones) -> Fan:
    rays_t = tuple(tuple(int(x) for x in r) for r in rays)
    return Fan(int(lattice_rank), rays_t, subset_closure(maximal_cones))


def canonical_fan(F: Fan) -> Fan:
    """Rays sorted lexicographically, cone indices remapped accordingly."""
    order = sorted(range(len(F.rays)), key=lambda i: F.rays[i])
    remap = {old: new for new, old in enumerate(order)}
    rays = tuple(F.rays[i] for i in order)
    cones = frozenset(frozenset(remap[i] for i in c) for c in F.cones)
    return Fan(F.lattice_rank, rays, cones)


def fan_fingerprint(F: Fan) -> str:
    C = canonical_fan(F)
    text = repr((C.lattice_rank, C.rays, sorted(tuple(sorted(c)) for c in C.cones)))
    return hashlib.sha1(text.encode()).hexdigest()[:12]


def barycenter(F: Fan, cone) -> tuple[int, ...]:
    v = [0] * F.lattice_rank
    for i in cone:
        for k in range(F.lattice_rank):
            v[k] += F.rays[i][k]
    return tuple(v)


# ---------------------------------------------------------------------------
# exact membership


def cone_coordinates(F: Fan, cone, p) -> list[Fraction] | None:
    """Coordinates of p in the generators of the cone, or None if p is not in
    their span.  Signs are the caller's business."""
    idx = sorted(cone)
    if not idx:
        return [] if all(Fraction(x) == 0 for x in p) else None
    A = [[F.rays[j][i] for j in idx] for i in range(F.lattice_rank)]
    return solve_rational(A, list(p))


def support_contains(F: Fan, p) -> bool:
    """Exact test p in |F| for a rational point p."""
    if len(p) != F.lattice_rank:
        raise DimensionMismatch(
            f"point has {len(p)} coordinates, fan lives in rank {F.lattice_rank}"
        )
    for c in F.maximal_cones():
        coords = cone_coordinates(F, c, p)
        if coords is not None and all(x >= 0 for x in coords):
            return True
    return False


def direction_in_support(F: Fan, p, v) -> bool:
    """True iff p + eps*v lies in |F| for all sufficiently small eps > 0."""
    for c in F.maximal_cones():
        a = cone_coordinates(F, c, p)
        if a is None:
            continue
        b = cone_coordinates(F, c, v)
        if b is None:
            continue
        if all(x > 0 or (x == 0 and y >= 0) for x, y in zip(a, b)):
            return True
    return False


# ---------------------------------------------------------------------------
# validation


def _cone_smoothness(F: Fan, cone) -> str | None:
    gens = F.generators(cone)
    if not gens:
        return None
    snf = smith_normal_form(gens)
    if snf.rank < len(gens):
        return f"cone {sorted(cone)} has dependent generators"
    index = 1
    for d in snf.invariant_factors:
        index *= d
    if index != 1:
        return f"cone {sorted(cone)} is not smooth (index {index})"
    return None


def _fm_feasible(constraints: list[tuple[tuple[Fraction, ...], Fraction]], nvars: int) -> bool:
    """Fourier-Motzkin feasibility for a system of c.x + d >= 0 constraints."""

    def norm(c, d):
        for x in (*c, d):
            if x != 0:
                s = abs(x)
                return tuple(y / s for y in c), d / s
        return c, d

    rows = {norm(tuple(c), d) for c, d in constraints}
    for var in range(nvars):
        pos, neg, rest = [], [], set()
        for c, d in rows:
            if c[var] > 0:
                pos.append((c, d))
            elif c[var] < 0:
                neg.append((c, d))
            else:
                rest.add((c, d))
        for cp, dp in pos:
            for cn, dn in neg:
                c = tuple(x * (-cn[var]) + y * cp[var] for x, y in zip(cp, cn))
                d = dp * (-cn[var]) + dn * cp[var]
                rest.add(norm(c, d))
        rows = rest
    return all(d >= 0 for _, d in rows)


def _pair_intersects_properly(F: Fan, sigma, tau) -> bool:
    """pos(sigma) & pos(tau) == pos(sigma & tau), exactly."""
    if sigma <= tau or tau <= sigma:
        return True
    common = sigma & tau
    s = sorted(sigma)
    t = sorted(tau)
    cols = [list(F.rays[i]) for i in s] + [[-x for x in F.rays[j]] for j in t]
    M = [[cols[j][i] for j in range(len(cols))] for i in range(F.lattice_rank)]
    null = rational_nullspace(M, len(cols))
    if not null:
        return True
    nvars = len(null)
    base = [
        (tuple(vec[idx] for vec in null), Fraction(0))
        for idx in range(len(cols))
    ]
    labels = s + t
    for idx, ray in enumerate(labels):
        if ray in common:
            continue
        extra = (tuple(vec[idx] for vec in null), Fraction(-1))
        if _fm_feasible(base + [extra], nvars):
            return False
    return True


def validate_fan(F: Fan) -> str | None:
    """None when all fan invariants hold; otherwise the first violation."""
    for r in F.rays:
        if len(r) != F.lattice_rank:
            return f"ray {list(r)} does not have {F.lattice_rank} coordinates"
        if not any(r):
            return "zero vector listed as a ray"
        g = vector_gcd(r)
        if g != 1:
            return f"ray {list(r)} not primitive (gcd {g})"
    if len(set(F.rays)) != len(F.rays):
        return "duplicate ray vectors"
    if frozenset() not in F.cones:
        return "zero cone missing"
    for c in F.cones:
        for i in c:
            if not 0 <= i < len(F.rays):
                return f"cone {sorted(c)} references a missing ray"
        for i in c:
            if c - {i} not in F.cones:
                return f"cone set not closed under faces at {sorted(c)}"
    for i in range(len(F.rays)):
        if frozenset({i}) not in F.cones:
            return f"ray {i} is not a cone of the fan"
    for c in sorted(F.cones, key=lambda c: (len(c), tuple(sorted(c)))):
        msg = _cone_smoothness(F, c)
        if msg:
            return msg
    maximal = [frozenset(c) for c in F.maximal_cones()]
    for a, b in combinations(maximal, 2):
        if not _pair_intersects_properly(F, a, b):
            return (
                f"cones {sorted(a)} and {sorted(b)} intersect outside their common face"
            )
    return None


@lru_cache(maxsize=None)
def is_smooth(F: Fan) -> bool:
    return all(_cone_smoothness(F, frozenset(c)) is None for c in F.maximal_cones())


# ---------------------------------------------------------------------------
# surgeries


def star(F: Fan, sigma) -> Fan:
    """Fan of images of sigma-containing cones in the quotient lattice."""
    sigma = frozenset(sigma)
    if sigma not in F.cones:
        raise ConeNotInFan(f"cone {sorted(sigma)} not in the fan")
    if not sigma:
        return F
    proj = quotient_lattice(F.generators(sigma), F.lattice_rank)
    images: dict[int, tuple[int, ...]] = {}
    star_rays: set[tuple[int, ...]] = set()
    for c in F.cones:
        if sigma <= c:
            for i in c - sigma:
                if i in images:
                    continue
                v = proj.apply(F.rays[i])
                g = vector_gcd(v)
                assert g > 0, "ray image vanished in the quotient"
                w = tuple(x // g for x in v)
                images[i] = w
                star_rays.add(w)
    rays = tuple(sorted(star_rays))
    index = {v: i for i, v in enumerate(rays)}
    cones = frozenset(
        frozenset(index[images[i]] for i in c - sigma)
        for c in F.cones
        if sigma <= c
    )
    return Fan(proj.target_rank, rays, cones)


def stellar_subdivision(F: Fan, sigma) -> Fan:
    """Insert the ray through the sum of the cone's primitive generators."""
    sigma = frozenset(sigma)
    if sigma not in F.cones:
        raise ConeNotInFan(f"cone {sorted(sigma)} not in the fan")
    if not sigma:
        raise ZeroCone("cannot subdivide at the zero cone")
    if len(sigma) == 1:
        return F
    u = barycenter(F, sigma)
    assert u not in F.rays, "stellar ray already present"
    new_idx = len(F.rays)
    rays = F.rays + (u,)
    kept = {c for c in F.cones if not sigma <= c}
    added = set()
    for c in F.cones:
        if sigma <= c:
            for i in sigma:
                added.add(frozenset(c - {i}) | {new_idx})
    cones = subset_closure(tuple(sorted(c)) for c in kept | added)
    return Fan(F.lattice_rank, rays, cones)


def lineality_space(F: Fan) -> list[list[int]]:
    """Saturated basis of {w : |F| + R*w is contained in |F|}.

    A ray direction belongs to the lineality space iff both of its signs pass
    the infinitesimal membership test at a representative of every cone; the
    span of the passing rays is returned (the cones of every fan built here
    cover their lineality space, so the span is the whole thing).
    """
    reps = [barycenter(F, c) for c in sorted(F.cones, key=sorted)]
    passing = []
    for u in F.rays:
        neg = [-x for x in u]
        if all(
            direction_in_support(F, p, u) and direction_in_support(F, p, neg)
            for p in reps
        ):
            passing.append(list(u))
    if not passing:
        return []
    orth = kernel_basis(passing, F.lattice_rank)
    return kernel_basis(orth, F.lattice_rank)


# ---------------------------------------------------------------------------
# refinements


@dataclass
class RefinementMap:
    """For each fine cone, the minimal coarse cone containing it."""

    fine: Fan
    coarse: Fan
    assignment: dict[frozenset[int], frozenset[int]]


def refinement_map(fine: Fan, coarse: Fan) -> RefinementMap:
    if fine.lattice_rank != coarse.lattice_rank:
        raise NotARefinement("lattice ranks differ")
    coarse_by_dim = sorted(coarse.cones, key=lambda c: (len(c), tuple(sorted(c))))
    assignment: dict[frozenset[int], frozenset[int]] = {}
    for delta in sorted(fine.cones, key=lambda c: (len(c), tuple(sorted(c)))):
        if not delta:
            assignment[delta] = frozenset()
            continue
        bc = barycenter(fine, delta)
        target = None
        for sig in coarse_by_dim:
            coords = cone_coordinates(coarse, sig, bc)
            if coords is not None and all(x > 0 for x in coords):
                target = sig
                break
        if target is None:
            raise NotARefinement(
                f"fine cone {sorted(delta)} is not contained in the coarse support"
            )
        for i in delta:
            coords = cone_coordinates(coarse, target, fine.rays[i])
            if coords is None or any(x < 0 for x in coords):
                raise NotARefinement(
                    f"fine cone {sorted(delta)} is not contained in a single coarse cone"
                )
        assignment[delta] = target
    for sig in coarse.maximal_cones():
        sigf = frozenset(sig)
        if not support_contains(fine, barycenter(coarse, sigf)):
            raise NotARefinement("coarse support is not covered by the fine fan")
        if not any(
            len(d) == len(sigf) and assignment[d] == sigf for d in fine.cones
        ):
            raise NotARefinement(
                f"no fine cone of dimension {len(sigf)} inside coarse cone {list(sig)}"
            )
    return RefinementMap(fine, coarse, assignment)
