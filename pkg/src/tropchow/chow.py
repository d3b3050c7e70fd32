"""Integral Chow rings of smooth fans.

R^k is presented by the square-free monomials x_sigma over the k-cones modulo
one relation row per (facet tau, basis covector of the tau-perp lattice);
ranks, torsion and canonical normal forms come from a cached Smith form of the
presentation.  Products reduce repeated rays through smooth-cone covectors.
Minkowski weights are the integer kernel of the relation matrix, i.e. the
balanced weightings, and pair with classes by plain evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .fan import Fan, cone_coordinates, is_smooth
from .intlinalg import (
    dot,
    invert_unimodular,
    kernel_basis,
    mat_vec,
    smith_normal_form,
    solve_prescribed_pairings,
)


class NotSmooth(Exception):
    pass


class FanMismatch(Exception):
    pass


class DegreeMismatch(Exception):
    pass


# ---------------------------------------------------------------------------
# graded pieces


@dataclass
class ChowGroupPresentation:
    """Finitely presented abelian group R^k with a frozen normal form.

    ``transform`` is the unimodular U of the Smith form of the transposed
    relation matrix: in the coordinates y = U x the relation lattice becomes
    diag(invariant factors), so free and torsion coordinates split cleanly.
    """

    fan: Fan
    degree: int
    generators: tuple[tuple[int, ...], ...]
    relations: tuple[tuple[int, ...], ...]
    invariant_factors: tuple[int, ...]
    rank: int
    torsion: tuple[int, ...]
    transform: tuple[tuple[int, ...], ...]
    basis_vectors: tuple[tuple[int, ...], ...] = field(repr=False)

    def index_of(self, cone) -> int:
        return self.generators.index(tuple(sorted(cone)))

    def vector_of(self, coeffs: dict) -> list[int]:
        vec = [0] * len(self.generators)
        for cone, a in coeffs.items():
            vec[self.index_of(cone)] = a
        return vec

    def normal_form_of_vector(self, vec) -> tuple[tuple[int, ...], tuple[int, ...]]:
        y = mat_vec([list(r) for r in self.transform], list(vec))
        r = len(self.invariant_factors)
        free = tuple(y[r:])
        tors = tuple(
            y[i] % d for i, d in enumerate(self.invariant_factors) if d > 1
        )
        return free, tors

    def basis_classes(self) -> list["ChowClass"]:
        out = []
        for vec in self.basis_vectors:
            coeffs = {g: a for g, a in zip(self.generators, vec) if a}
            out.append(ChowClass(self.fan, self.degree, coeffs))
        return out


@lru_cache(maxsize=None)
def chow_group(F: Fan, k: int) -> ChowGroupPresentation:
    if not is_smooth(F):
        raise NotSmooth("Chow groups are only computed for smooth fans")
    gens = tuple(F.cones_of_dim(k)) if 0 <= k <= F.dim() else ()
    rows: list[tuple[int, ...]] = []
    if k >= 1 and gens:
        for tau in F.cones_of_dim(k - 1):
            tau_set = frozenset(tau)
            perp = kernel_basis(F.generators(tau_set), F.lattice_rank)
            incident = []
            for idx, sigma in enumerate(gens):
                sset = frozenset(sigma)
                if tau_set < sset:
                    (extra,) = sset - tau_set
                    incident.append((idx, F.rays[extra]))
            for m in perp:
                row = [0] * len(gens)
                for idx, u in incident:
                    row[idx] = dot(m, u)
                rows.append(tuple(row))
    g = len(gens)
    if rows:
        B = [[rows[j][i] for j in range(len(rows))] for i in range(g)]
        snf = smith_normal_form(B)
        inv = tuple(snf.invariant_factors)
        U = snf.U
    else:
        inv = ()
        U = [[1 if i == j else 0 for j in range(g)] for i in range(g)]
    r = len(inv)
    Uinv = invert_unimodular(U) if g else []
    basis = tuple(
        tuple(Uinv[i][j] for i in range(g)) for j in range(r, g)
    )
    return ChowGroupPresentation(
        fan=F,
        degree=k,
        generators=gens,
        relations=tuple(rows),
        invariant_factors=inv,
        rank=g - r,
        torsion=tuple(d for d in inv if d > 1),
        transform=tuple(tuple(row) for row in U),
        basis_vectors=basis,
    )


# ---------------------------------------------------------------------------
# classes


@dataclass(eq=False)
class ChowClass:
    """Integer combination of square-free monomials x_sigma of one degree.

    Equality is equality of normal forms in R^k, not of coefficient vectors.
    """

    fan: Fan
    degree: int
    coeffs: dict[tuple[int, ...], int]

    def __post_init__(self):
        clean = {}
        for cone, a in self.coeffs.items():
            key = tuple(sorted(cone))
            if len(key) != self.degree:
                raise DegreeMismatch(f"monomial {key} is not of degree {self.degree}")
            if frozenset(key) not in self.fan.cones:
                raise ValueError(f"{key} does not span a cone of the fan")
            if a:
                clean[key] = clean.get(key, 0) + a
        self.coeffs = {k: v for k, v in clean.items() if v}

    def __add__(self, other: "ChowClass") -> "ChowClass":
        if self.fan != other.fan or self.degree != other.degree:
            raise FanMismatch("can only add classes of one degree on one fan")
        out = dict(self.coeffs)
        for cone, a in other.coeffs.items():
            out[cone] = out.get(cone, 0) + a
        return ChowClass(self.fan, self.degree, out)

    def __sub__(self, other: "ChowClass") -> "ChowClass":
        return self + (-1) * other

    def __rmul__(self, scalar: int) -> "ChowClass":
        return ChowClass(
            self.fan, self.degree, {c: scalar * a for c, a in self.coeffs.items()}
        )

    def __mul__(self, other: "ChowClass") -> "ChowClass":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChowClass):
            return NotImplemented
        if self.fan != other.fan or self.degree != other.degree:
            return False
        return normal_form(self) == normal_form(other)

    def is_zero(self) -> bool:
        nf = normal_form(self)
        return not any(nf[0]) and not any(nf[1])


def monomial_class(F: Fan, cone) -> ChowClass:
    key = tuple(sorted(cone))
    return ChowClass(F, len(key), {key: 1})


def unit_class(F: Fan) -> ChowClass:
    return monomial_class(F, ())


def zero_class(F: Fan, degree: int) -> ChowClass:
    return ChowClass(F, degree, {})


def normal_form(alpha: ChowClass) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Canonical (free, torsion) coordinates; equal iff equal in R^k."""
    pres = chow_group(alpha.fan, alpha.degree)
    return pres.normal_form_of_vector(pres.vector_of(alpha.coeffs))


# ---------------------------------------------------------------------------
# multiplication


@lru_cache(maxsize=None)
def _reduce_cached(F: Fan, rays: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    distinct = tuple(sorted(set(rays)))
    if frozenset(distinct) not in F.cones:
        return ()
    if len(distinct) == len(rays):
        return ((distinct, 1),)
    counts: dict[int, int] = {}
    for r in rays:
        counts[r] = counts.get(r, 0) + 1
    rho = min(r for r, c in counts.items() if c > 1)
    tau = distinct
    m = solve_prescribed_pairings(
        [list(F.rays[i]) for i in tau],
        [1 if i == rho else 0 for i in tau],
    )
    rest = list(rays)
    rest.remove(rho)
    out: dict[tuple[int, ...], int] = {}
    tau_set = set(tau)
    for other in range(len(F.rays)):
        if other in tau_set:
            continue
        coeff = dot(m, F.rays[other])
        if not coeff:
            continue
        child = _reduce_cached(F, tuple(sorted(rest + [other])))
        for cone, a in child:
            out[cone] = out.get(cone, 0) - coeff * a
    return tuple(sorted((c, a) for c, a in out.items() if a))


def reduce_monomial(F: Fan, rays) -> ChowClass:
    """Class of the (possibly non-square-free) monomial prod x_rho.

    Rays spanning no cone give zero; a repeated ray is rewritten through a
    covector that is 1 on it and 0 on the other rays of its cone, pushing the
    monomial onto rays outside that cone.  The result is independent of the
    covector choice; recursion picks the smallest repeated ray first.
    """
    if not is_smooth(F):
        raise NotSmooth("monomial reduction needs a smooth fan")
    key = tuple(sorted(int(r) for r in rays))
    return ChowClass(F, len(key), dict(_reduce_cached(F, key)))


def multiply(alpha: ChowClass, beta: ChowClass) -> ChowClass:
    if alpha.fan != beta.fan:
        raise FanMismatch("classes live on different fans")
    F = alpha.fan
    out: dict[tuple[int, ...], int] = {}
    for c1, a in alpha.coeffs.items():
        for c2, b in beta.coeffs.items():
            for cone, x in _reduce_cached(F, tuple(sorted(c1 + c2))):
                out[cone] = out.get(cone, 0) + a * b * x
    return ChowClass(F, alpha.degree + beta.degree, out)


# ---------------------------------------------------------------------------
# Minkowski weights


@dataclass
class MinkowskiWeight:
    """Integer weight per k-cone satisfying the balancing condition."""

    fan: Fan
    degree: int
    weights: dict[tuple[int, ...], int]

    def __post_init__(self):
        clean = {}
        for cone, w in self.weights.items():
            key = tuple(sorted(cone))
            if len(key) != self.degree:
                raise DegreeMismatch(f"cone {key} is not of dimension {self.degree}")
            if frozenset(key) not in self.fan.cones:
                raise ValueError(f"{key} is not a cone of the fan")
            if w:
                clean[key] = int(w)
        self.weights = clean

    def __call__(self, cone) -> int:
        return self.weights.get(tuple(sorted(cone)), 0)

    def __add__(self, other: "MinkowskiWeight") -> "MinkowskiWeight":
        if self.fan != other.fan or self.degree != other.degree:
            raise FanMismatch("weight addition needs matching fan and degree")
        out = dict(self.weights)
        for cone, w in other.weights.items():
            out[cone] = out.get(cone, 0) + w
        return MinkowskiWeight(self.fan, self.degree, out)

    def __rmul__(self, scalar: int) -> "MinkowskiWeight":
        return MinkowskiWeight(
            self.fan, self.degree, {c: scalar * w for c, w in self.weights.items()}
        )

    def is_zero(self) -> bool:
        return not self.weights


def minkowski_weight_basis(F: Fan, k: int) -> list[MinkowskiWeight]:
    """Z-basis of Mink_k = Hom(R^k, Z): the kernel of the relation matrix."""
    pres = chow_group(F, k)
    if not pres.generators:
        return []
    vectors = kernel_basis([list(r) for r in pres.relations], len(pres.generators))
    return [
        MinkowskiWeight(F, k, {g: a for g, a in zip(pres.generators, v) if a})
        for v in vectors
    ]


def is_balanced(c: MinkowskiWeight) -> bool:
    pres = chow_group(c.fan, c.degree)
    vec = pres.vector_of(c.weights)
    return all(dot(row, vec) == 0 for row in pres.relations)


def evaluate(c: MinkowskiWeight, alpha: ChowClass) -> int:
    """Pairing Mink_k x R^k -> Z; balanced weights kill the relations."""
    if c.fan != alpha.fan:
        raise FanMismatch("weight and class live on different fans")
    if c.degree != alpha.degree:
        raise DegreeMismatch(
            f"weight degree {c.degree} cannot evaluate degree {alpha.degree}"
        )
    return sum(c(cone) * a for cone, a in alpha.coeffs.items())


# ---------------------------------------------------------------------------
# Courant functions and piecewise polynomials


def courant_value(F: Fan, ray: int, p) -> Fraction:
    """Value at p of the piecewise linear function that is 1 on the given ray
    generator and 0 on all others.  p must lie in the support."""
    for c in F.maximal_cones():
        coords = cone_coordinates(F, c, p)
        if coords is not None and all(x >= 0 for x in coords):
            cs = list(c)
            return coords[cs.index(ray)] if ray in cs else Fraction(0)
    raise ValueError("point lies outside the support of the fan")


@dataclass
class CourantPolynomial:
    """Integer polynomial in the Courant generators x_rho.

    Terms map sorted ray multisets to coefficients; the empty multiset is the
    constant term.  Substituting Courant values gives a continuous piecewise
    polynomial on the support.
    """

    fan: Fan
    terms: dict[tuple[int, ...], int]

    def __post_init__(self):
        clean = {}
        for mono, a in self.terms.items():
            key = tuple(sorted(int(r) for r in mono))
            if a:
                clean[key] = clean.get(key, 0) + a
        self.terms = {k: v for k, v in clean.items() if v}

    def degree(self) -> int:
        if not self.terms:
            return 0
        degs = {len(m) for m in self.terms}
        if len(degs) != 1:
            raise DegreeMismatch("polynomial is not homogeneous")
        return degs.pop()

    def __add__(self, other: "CourantPolynomial") -> "CourantPolynomial":
        if self.fan != other.fan:
            raise FanMismatch("polynomials live on different fans")
        out = dict(self.terms)
        for m, a in other.terms.items():
            out[m] = out.get(m, 0) + a
        return CourantPolynomial(self.fan, out)

    def __mul__(self, other: "CourantPolynomial") -> "CourantPolynomial":
        if self.fan != other.fan:
            raise FanMismatch("polynomials live on different fans")
        out: dict[tuple[int, ...], int] = {}
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                key = tuple(sorted(m1 + m2))
                out[key] = out.get(key, 0) + a * b
        return CourantPolynomial(self.fan, out)

    def __rmul__(self, scalar: int) -> "CourantPolynomial":
        return CourantPolynomial(
            self.fan, {m: scalar * a for m, a in self.terms.items()}
        )

    def to_class(self) -> ChowClass:
        """Image in the Chow ring (requires a homogeneous polynomial)."""
        k = self.degree()
        out = zero_class(self.fan, k)
        for mono, a in self.terms.items():
            out = out + a * reduce_monomial(self.fan, mono)
        return out

    def value_at(self, p) -> Fraction:
        total = Fraction(0)
        for mono, a in self.terms.items():
            prod = Fraction(a)
            for r in mono:
                prod *= courant_value(self.fan, r, p)
            total += prod
        return total


def class_as_polynomial(alpha: ChowClass) -> CourantPolynomial:
    """A square-free Courant-monomial representative of a class."""
    return CourantPolynomial(alpha.fan, dict(alpha.coeffs))


def pl_to_class(F: Fan, values) -> tuple[ChowClass, CourantPolynomial]:
    """Degree-1 class and Courant polynomial of the PL function with the given
    ray values.  Globally linear value vectors land on zero classes."""
    vals = [int(v) for v in values]
    if len(vals) != len(F.rays):
        raise ValueError("one value per ray required")
    coeffs = {(i,): v for i, v in enumerate(vals) if v}
    return ChowClass(F, 1, coeffs), CourantPolynomial(F, dict(coeffs))
