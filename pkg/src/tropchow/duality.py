"""Duality certificates, cocycle actions on weights, and refinement transport.

certify_poincare_duality verifies, degree by degree and by exact integer
computation, that the Chow ring of a fan is a Poincare duality ring: all
graded pieces free, the top piece a copy of Z generated dually by the
all-ones weight, and every multiplication pairing into the top piece
unimodular.  On certified fans the cycle <-> cocycle dictionary is the
inverse of the pairing matrices, and cycles pull back along compatible
morphisms through cocycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .chow import (
    ChowClass,
    CourantPolynomial,
    DegreeMismatch,
    FanMismatch,
    MinkowskiWeight,
    chow_group,
    class_as_polynomial,
    evaluate,
    is_balanced,
    minkowski_weight_basis,
    monomial_class,
    multiply,
    unit_class,
    zero_class,
)
from .fan import Fan, RefinementMap, cone_coordinates, fan_fingerprint
from .intlinalg import determinant, dot, solve_prescribed_pairings, solve_rational


class NotBalanced(Exception):
    pass


class NoCertificate(Exception):
    pass


class IncompatibleMorphism(Exception):
    pass


# ---------------------------------------------------------------------------
# fundamental weight and certification


def fundamental_weight(F: Fan) -> MinkowskiWeight:
    """The all-ones weight on the top-dimensional cones; must balance."""
    d = F.dim()
    top = F.cones_of_dim(d)
    if any(len(c) < d for c in F.maximal_cones()):
        raise NotBalanced("maximal cones of mixed dimension carry no fundamental weight")
    c = MinkowskiWeight(F, d, {cone: 1 for cone in top})
    if not is_balanced(c):
        raise NotBalanced("the all-ones top weight is not balanced on this fan")
    return c


@dataclass
class DegreeCertificate:
    k: int
    rank: int
    torsion: tuple[int, ...]
    pairing_det: int | None


@dataclass
class DualityCertificate:
    """Per-degree ranks, torsion and pairing determinants, plus verdicts.

    The pairing matrix stored under degree k has entry (i, j) equal to the
    fundamental weight evaluated on b_i * b'_j for the chosen free bases b of
    R^k and b' of R^(d-k).
    """

    fan: Fan
    fan_id: str
    dimension: int
    degrees: tuple[DegreeCertificate, ...]
    all_free: bool
    top_is_z: bool
    top_generator_all_ones: bool
    pairings_unimodular: bool
    vanishing_above_top: bool
    passed: bool
    failure: str | None
    bases: dict[int, list[ChowClass]] = field(repr=False, default_factory=dict)
    pairings: dict[int, list[list[int]]] = field(repr=False, default_factory=dict)


@lru_cache(maxsize=None)
def certify_poincare_duality(F: Fan) -> DualityCertificate:
    d = F.dim()
    failure: str | None = None

    def note(msg: str) -> None:
        nonlocal failure
        if failure is None:
            failure = msg

    groups = {k: chow_group(F, k) for k in range(d + 1)}
    vanishing = not F.cones_of_dim(d + 1)

    all_free = True
    for k in range(d + 1):
        if groups[k].torsion:
            all_free = False
            note(f"degree {k} group has torsion {list(groups[k].torsion)}")
            break

    top_is_z = groups[d].rank == 1 and not groups[d].torsion
    if failure is None and not top_is_z:
        note(
            f"top-degree group not Z: R^{d} has rank {groups[d].rank}, expected rank 1"
        )

    top_basis = minkowski_weight_basis(F, d)
    top_cones = F.cones_of_dim(d)
    top_all_ones = (
        len(top_basis) == 1
        and set(top_basis[0].weights.values()) in ({1}, {-1})
        and len(top_basis[0].weights) == len(top_cones)
    )
    if failure is None and not top_all_ones:
        note("top Minkowski weights not generated by the all-ones weight")

    if failure is None:
        for k in range(d + 1):
            if groups[k].rank != groups[d - k].rank:
                note(
                    f"rank asymmetry: R^{k} has rank {groups[k].rank}, "
                    f"R^{d - k} has rank {groups[d - k].rank}"
                )
                break

    bases: dict[int, list[ChowClass]] = {}
    pairings: dict[int, list[list[int]]] = {}
    dets: dict[int, int | None] = {k: None for k in range(d + 1)}
    unimodular = False
    if failure is None:
        fund = MinkowskiWeight(F, d, {cone: 1 for cone in top_cones})
        for k in range(d + 1):
            bases[k] = groups[k].basis_classes()
        unimodular = True
        for k in range(d + 1):
            if d - k in pairings and k != d - k:
                pairings[k] = [
                    [pairings[d - k][j][i] for j in range(len(pairings[d - k]))]
                    for i in range(len(bases[k]))
                ]
            else:
                pairings[k] = [
                    [evaluate(fund, multiply(bi, bj)) for bj in bases[d - k]]
                    for bi in bases[k]
                ]
            det = determinant(pairings[k])
            dets[k] = det
            if abs(det) != 1 and unimodular:
                unimodular = False
                note(
                    f"pairing in degrees ({k},{d - k}) has determinant {det}, expected +-1"
                )

    return DualityCertificate(
        fan=F,
        fan_id=fan_fingerprint(F),
        dimension=d,
        degrees=tuple(
            DegreeCertificate(
                k=k,
                rank=groups[k].rank,
                torsion=groups[k].torsion,
                pairing_det=dets.get(k),
            )
            for k in range(d + 1)
        ),
        all_free=all_free,
        top_is_z=top_is_z,
        top_generator_all_ones=top_all_ones,
        pairings_unimodular=unimodular,
        vanishing_above_top=vanishing,
        passed=failure is None,
        failure=failure,
        bases=bases,
        pairings=pairings,
    )


# ---------------------------------------------------------------------------
# actions on Minkowski weights


def divisor_action_direct(F: Fan, phi, c: MinkowskiWeight) -> MinkowskiWeight:
    """Intersection of the PL function with ray values phi against the weight.

    On each facet tau the function is normalized by a covector agreeing with it
    on tau; the output weight sums the normalized values on the normal rays.
    The result does not depend on the covector choice and is balanced.
    """
    vals = [int(x) for x in phi]
    if len(vals) != len(F.rays):
        raise ValueError("one value per ray required")
    k = c.degree
    if k < 1:
        raise DegreeMismatch("divisor action needs a weight of degree >= 1")
    out: dict[tuple[int, ...], int] = {}
    top = F.cones_of_dim(k)
    for tau in F.cones_of_dim(k - 1):
        tau_set = frozenset(tau)
        if tau:
            m = solve_prescribed_pairings(
                [list(F.rays[i]) for i in tau], [vals[i] for i in tau]
            )
        else:
            m = [0] * F.lattice_rank
        total = 0
        for sigma in top:
            sset = frozenset(sigma)
            if tau_set < sset:
                (extra,) = sset - tau_set
                total += (vals[extra] - dot(m, F.rays[extra])) * c(sigma)
        if total:
            out[tau] = total
    result = MinkowskiWeight(F, k - 1, out)
    assert is_balanced(result), "divisor action must produce a balanced weight"
    return result


def class_action(alpha: ChowClass, c: MinkowskiWeight) -> MinkowskiWeight:
    """Action of a Chow class on a weight via precomposition with multiplication."""
    F = alpha.fan
    j, k = alpha.degree, c.degree
    if j > k:
        raise DegreeMismatch(f"class of degree {j} cannot act on weight of degree {k}")
    out: dict[tuple[int, ...], int] = {}
    for tau in F.cones_of_dim(k - j):
        val = evaluate(c, multiply(alpha, monomial_class(F, tau)))
        if val:
            out[tau] = val
    return MinkowskiWeight(F, k - j, out)


def cocycle_action(F: Fan, P: CourantPolynomial, c: MinkowskiWeight) -> MinkowskiWeight:
    """Action of a homogeneous piecewise polynomial on a Minkowski weight.

    Computed twice — through the ring action of the class of P, and through
    iterated divisor actions of the Courant factors — and asserted equal.
    """
    if P.fan != F or c.fan != F:
        raise ValueError("polynomial, weight and fan must match")
    j = P.degree()
    k = c.degree
    if j > k:
        raise DegreeMismatch(f"degree {j} polynomial cannot act on degree {k} weight")
    ring_path = class_action(P.to_class(), c)
    iterated = MinkowskiWeight(F, k - j, {})
    for mono, a in P.terms.items():
        w = c
        for ray in mono:
            ray_values = [1 if i == ray else 0 for i in range(len(F.rays))]
            w = divisor_action_direct(F, ray_values, w)
        iterated = iterated + a * w
    if not P.terms:
        iterated = MinkowskiWeight(F, k, {})
    assert ring_path.weights == iterated.weights, (
        "ring action and iterated divisor action disagree"
    )
    assert is_balanced(ring_path)
    return ring_path


# ---------------------------------------------------------------------------
# cycle <-> cocycle dictionary


def cycle_to_cocycle(F: Fan, B: MinkowskiWeight) -> ChowClass:
    """The unique class alpha with alpha . [F] = B, from the pairing matrices."""
    cert = certify_poincare_duality(F)
    if not cert.passed:
        raise NoCertificate(f"duality not certified: {cert.failure}")
    d = cert.dimension
    k = B.degree
    if not 0 <= k <= d:
        raise DegreeMismatch(f"no weights of degree {k} on a {d}-dimensional fan")
    cod = cert.bases[d - k]
    dom = cert.bases[k]
    v = [evaluate(B, bj) for bj in dom]
    # pairing[d-k][i][j] = [F](b_i * b'_j); solve sum_i a_i pairing[i][j] = v_j
    M = cert.pairings[d - k]
    MT = [[M[i][j] for i in range(len(cod))] for j in range(len(dom))]
    sol = solve_rational(MT, v)
    assert sol is not None, "certified pairing failed to invert"
    coeffs = []
    for x in sol:
        assert x.denominator == 1, "certified pairing produced a non-integral solution"
        coeffs.append(int(x))
    alpha = zero_class(F, d - k)
    for a, b in zip(coeffs, cod):
        alpha = alpha + a * b
    fund = fundamental_weight(F)
    assert class_action(alpha, fund).weights == B.weights, (
        "cycle_to_cocycle contract violated"
    )
    return alpha


def intersect_cycles(F: Fan, A: MinkowskiWeight, B: MinkowskiWeight) -> MinkowskiWeight:
    """Stable intersection through cocycles; [F] is the unit."""
    cert = certify_poincare_duality(F)
    if not cert.passed:
        raise NoCertificate(f"duality not certified: {cert.failure}")
    d = cert.dimension
    out_degree = A.degree + B.degree - d
    if out_degree < 0:
        return MinkowskiWeight(F, out_degree, {})
    alpha = cycle_to_cocycle(F, A)
    return cocycle_action(F, class_as_polynomial(alpha), B)


# ---------------------------------------------------------------------------
# refinement transport


def pushforward_class(r: RefinementMap, alpha: ChowClass) -> ChowClass:
    """Monomial rule: x_delta goes to x_sigma when the minimal coarse cone
    sigma containing delta has the same dimension, else to zero."""
    if alpha.fan != r.fine:
        raise FanMismatch("class does not live on the fine fan")
    out: dict[tuple[int, ...], int] = {}
    for cone, a in alpha.coeffs.items():
        target = r.assignment[frozenset(cone)]
        if len(target) == len(cone):
            key = tuple(sorted(target))
            out[key] = out.get(key, 0) + a
    return ChowClass(r.coarse, alpha.degree, out)


def _coarse_courant_on_fine(r: RefinementMap) -> list[list[int]]:
    """values[coarse_ray][fine_ray] of each coarse Courant function."""
    values = [[0] * len(r.fine.rays) for _ in r.coarse.rays]
    for j, u in enumerate(r.fine.rays):
        sigma = r.assignment[frozenset({j})]
        coords = cone_coordinates(r.coarse, sigma, u)
        assert coords is not None
        for pos, i in enumerate(sorted(sigma)):
            assert coords[pos].denominator == 1
            values[i][j] = int(coords[pos])
    return values


def pullback_class(r: RefinementMap, alpha: ChowClass) -> ChowClass:
    """Ring map re-expressing each coarse Courant generator by its values on
    the fine rays; products of generators pull back multiplicatively."""
    if alpha.fan != r.coarse:
        raise FanMismatch("class does not live on the coarse fan")
    values = _coarse_courant_on_fine(r)
    out = zero_class(r.fine, alpha.degree)
    for cone, a in alpha.coeffs.items():
        prod = a * unit_class(r.fine)
        for i in cone:
            linear = ChowClass(
                r.fine, 1, {(j,): values[i][j] for j in range(len(r.fine.rays))}
            )
            prod = multiply(prod, linear)
        out = out + prod
    return out


def refine_weight(r: RefinementMap, c: MinkowskiWeight) -> MinkowskiWeight:
    """Fine k-cones inherit the weight of their minimal coarse cone when the
    dimensions agree; dual to pushforward_class under evaluation."""
    if c.fan != r.coarse:
        raise FanMismatch("weight does not live on the coarse fan")
    k = c.degree
    out: dict[tuple[int, ...], int] = {}
    for delta in r.fine.cones_of_dim(k):
        sigma = r.assignment[frozenset(delta)]
        if len(sigma) == k:
            w = c(sigma)
            if w:
                out[delta] = w
    result = MinkowskiWeight(r.fine, k, out)
    assert is_balanced(result), "refined weight must stay balanced"
    return result


# ---------------------------------------------------------------------------
# pull-back of cycles along fan morphisms


@dataclass
class FanMorphism:
    """Integer-linear map of lattices with a cone compatibility table: every
    source cone maps into its assigned target cone."""

    source: Fan
    target: Fan
    matrix: tuple[tuple[int, ...], ...]
    cone_map: dict[frozenset[int], frozenset[int]]

    def apply(self, v) -> list[int]:
        return [dot(row, v) for row in self.matrix]


def validate_morphism(f: FanMorphism) -> str | None:
    if len(f.matrix) != f.target.lattice_rank or any(
        len(row) != f.source.lattice_rank for row in f.matrix
    ):
        return "matrix shape does not match the lattice ranks"
    for cone in f.source.cones:
        target = f.cone_map.get(cone)
        if target is None:
            return f"source cone {sorted(cone)} has no assigned target cone"
        if target not in f.target.cones:
            return f"assigned cone {sorted(target)} is not in the target fan"
        for i in cone:
            image = f.apply(f.source.rays[i])
            coords = cone_coordinates(f.target, target, image)
            if coords is None or any(x < 0 for x in coords):
                return (
                    f"image of source cone {sorted(cone)} leaves its assigned "
                    f"target cone {sorted(target)}"
                )
    return None


def pullback_cycle(
    f: FanMorphism, A: MinkowskiWeight, B: MinkowskiWeight
) -> MinkowskiWeight:
    """Pull back B along f, normalized so that the target fundamental weight
    pulls back to A: substitute the target cocycle of B through f, then act on A."""
    problem = validate_morphism(f)
    if problem:
        raise IncompatibleMorphism(problem)
    if A.fan != f.source or B.fan != f.target:
        raise FanMismatch("weights must live on the morphism's fans")
    alpha = cycle_to_cocycle(f.target, B)
    if alpha.degree > A.degree:
        return MinkowskiWeight(f.source, A.degree - alpha.degree, {})
    # target Courant values at the images of the source rays
    n_src = len(f.source.rays)
    values = [[0] * n_src for _ in f.target.rays]
    for j in range(n_src):
        image = f.apply(f.source.rays[j])
        sigma = f.cone_map[frozenset({j})]
        coords = cone_coordinates(f.target, sigma, image)
        assert coords is not None
        for pos, i in enumerate(sorted(sigma)):
            assert coords[pos].denominator == 1
            values[i][j] = int(coords[pos])
    pulled = CourantPolynomial(f.source, {(): 0})
    for mono, a in class_as_polynomial(alpha).terms.items():
        term = CourantPolynomial(f.source, {(): a})
        for i in mono:
            linear = CourantPolynomial(
                f.source, {(j,): values[i][j] for j in range(n_src)}
            )
            term = term * linear
        pulled = pulled + term
    if not pulled.terms:
        pulled = CourantPolynomial(f.source, {})
        if alpha.degree:
            return MinkowskiWeight(f.source, A.degree - alpha.degree, {})
    return cocycle_action(f.source, pulled, A)
