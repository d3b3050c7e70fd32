"""Fan validation, smoothness, star, stellar subdivision, refinements."""

from fractions import Fraction
from random import Random

import pytest

from tropchow.catalog import FANS, MATROIDS
from tropchow.bergman import fine_subdivision
from tropchow.fan import (
    ConeNotInFan,
    DimensionMismatch,
    Fan,
    NotARefinement,
    ZeroCone,
    barycenter,
    canonical_fan,
    direction_in_support,
    is_smooth,
    lineality_space,
    make_fan,
    refinement_map,
    star,
    stellar_subdivision,
    support_contains,
    validate_fan,
)

from oracles import random_unimodular


def transform_fan(F: Fan, W) -> Fan:
    rays = tuple(tuple(sum(W[i][k] * r[k] for k in range(len(r))) for i in range(len(W))) for r in F.rays)
    return Fan(F.lattice_rank, rays, F.cones)


class TestValidation:
    def test_fixtures_valid(self):
        for name, F in FANS.items():
            assert validate_fan(F) is None, name

    def test_non_smooth_cone_index(self):
        F = make_fan(2, [(1, 0), (1, 2)], [(0, 1)])
        msg = validate_fan(F)
        assert msg is not None and "index 2" in msg

    def test_subset_closure_violation(self):
        F = FANS["F2"]
        broken = Fan(2, F.rays, frozenset({frozenset({0, 1}), frozenset()}))
        assert "closed" in validate_fan(broken) or "not a cone" in validate_fan(broken)

    def test_nonprimitive_ray(self):
        F = Fan(2, ((2, 0),), frozenset({frozenset(), frozenset({0})}))
        assert "primitive" in validate_fan(F)

    def test_overlapping_cones_detected(self):
        # both cones smooth, but the second sits inside the first quadrant
        bad = make_fan(2, [(1, 0), (0, 1), (1, 1), (2, 1)], [(0, 1), (2, 3)])
        msg = validate_fan(bad)
        assert msg is not None and "intersect" in msg


class TestSmoothness:
    def test_quadrant(self):
        assert is_smooth(FANS["F2"])

    def test_index_two(self):
        F = make_fan(2, [(1, 0), (1, 2)], [(0, 1)])
        assert not is_smooth(F)

    def test_zero_fan(self):
        assert is_smooth(make_fan(2, [], []))


class TestStar:
    def test_quadrant_at_ray(self):
        st = star(FANS["F2"], (0,))
        assert st.lattice_rank == 1
        assert st.rays == ((1,),)
        assert sorted(map(sorted, st.cones)) == [[], [0]]

    def test_zero_cone_is_identity(self):
        assert star(FANS["F1"], ()) == FANS["F1"]

    def test_permutohedral_at_diagonal(self):
        st = star(FANS["F3"], (3,))
        assert st.lattice_rank == 1
        assert sorted(st.rays) == [(-1,), (1,)]
        assert len(st.cones_of_dim(1)) == 2

    def test_missing_cone(self):
        with pytest.raises(ConeNotInFan):
            star(FANS["F1"], (0, 1))

    def test_star_of_smooth_is_smooth(self):
        rng = Random(2)
        for name in ("U34", "B3", "MK4"):
            F = fine_subdivision(MATROIDS[name])
            cones = sorted(F.cones, key=sorted)
            for _ in range(5):
                sigma = rng.choice(cones)
                st = star(F, sigma)
                assert is_smooth(st)
                assert validate_fan(st) is None


class TestStellar:
    def test_quadrant(self):
        sub = stellar_subdivision(FANS["F2"], (0, 1))
        assert sub.rays == ((1, 0), (0, 1), (1, 1))
        assert sorted(map(sorted, sub.maximal_cones())) == [[0, 2], [1, 2]]
        assert validate_fan(sub) is None

    def test_at_ray_is_identity(self):
        assert stellar_subdivision(FANS["F3"], (0,)) == FANS["F3"]

    def test_permutohedral(self):
        sub = stellar_subdivision(FANS["F3"], (0, 3))
        assert len(sub.rays) == 7
        assert (2, 1) in sub.rays
        assert validate_fan(sub) is None

    def test_zero_cone_rejected(self):
        with pytest.raises(ZeroCone):
            stellar_subdivision(FANS["F2"], ())

    def test_missing_cone_rejected(self):
        with pytest.raises(ConeNotInFan):
            stellar_subdivision(FANS["F1"], (0, 1))

    def test_invariants_random(self):
        rng = Random(8)
        for name in ("U34", "B3", "MK4"):
            F = fine_subdivision(MATROIDS[name])
            for _ in range(4):
                candidates = [c for c in sorted(F.cones, key=sorted) if len(c) >= 2]
                if not candidates:
                    continue
                sigma = rng.choice(candidates)
                sub = stellar_subdivision(F, sigma)
                assert len(sub.rays) == len(F.rays) + 1
                assert is_smooth(sub)
                assert validate_fan(sub) is None
                # support preserved: all rays and barycenters stay inside
                for c in sub.maximal_cones():
                    assert support_contains(F, barycenter(sub, frozenset(c)))
                for c in F.maximal_cones():
                    assert support_contains(sub, barycenter(F, frozenset(c)))
                F = sub


class TestSupport:
    def test_on_ray(self):
        assert support_contains(FANS["F1"], (2, 0))

    def test_outside(self):
        assert not support_contains(FANS["F1"], (1, 1))

    def test_origin(self):
        for F in FANS.values():
            assert support_contains(F, (0,) * F.lattice_rank)

    def test_rational_points(self):
        assert support_contains(FANS["F2"], (Fraction(1, 2), Fraction(7, 3)))
        assert not support_contains(FANS["F2"], (Fraction(-1, 2), Fraction(1)))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            support_contains(FANS["F1"], (1, 2, 3))

    def test_direction_in_support(self):
        F = FANS["F1"]
        # at a ray interior point, both directions along the ray work
        assert direction_in_support(F, (1, 0), (1, 0))
        assert direction_in_support(F, (1, 0), (-1, 0))
        assert not direction_in_support(F, (1, 0), (0, 1))
        # at the origin only ray directions are available
        assert direction_in_support(F, (0, 0), (-1, -1))
        assert not direction_in_support(F, (0, 0), (1, 1))


class TestLineality:
    def test_trivial_cases(self):
        assert lineality_space(FANS["F1"]) == []
        assert lineality_space(FANS["F2"]) == []

    def test_line_fan(self):
        F = make_fan(1, [(1,), (-1,)], [(0,), (1,)])
        basis = lineality_space(F)
        assert len(basis) == 1 and basis[0] in ([1], [-1])

    def test_plane_with_line(self):
        # rays +-e1 and e2, cones {e1,e2}, {-e1,e2}: lineality is the e1-axis
        F = make_fan(2, [(1, 0), (-1, 0), (0, 1)], [(0, 2), (1, 2)])
        assert validate_fan(F) is None
        basis = lineality_space(F)
        assert len(basis) == 1
        assert basis[0][1] == 0

    def test_axes_without_two_cones(self):
        # +-e1, +-e2 rays only: support is the two axes, lineality trivial
        F = make_fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0,), (1,), (2,), (3,)])
        assert lineality_space(F) == []


class TestRefinement:
    def test_stellar_refines(self):
        F = FANS["F2"]
        sub = stellar_subdivision(F, (0, 1))
        r = refinement_map(sub, F)
        assert r.assignment[frozenset({2})] == frozenset({0, 1})
        assert r.assignment[frozenset({0, 2})] == frozenset({0, 1})
        assert r.assignment[frozenset({0})] == frozenset({0})

    def test_identity(self):
        F = FANS["F3"]
        r = refinement_map(F, F)
        for cone, target in r.assignment.items():
            assert cone == target

    def test_not_a_refinement(self):
        with pytest.raises(NotARefinement):
            refinement_map(FANS["F1"], FANS["F2"])
        with pytest.raises(NotARefinement):
            refinement_map(FANS["F2"], FANS["F1"])

    def test_stellar_always_refines(self):
        rng = Random(6)
        F = fine_subdivision(MATROIDS["B3"])
        for _ in range(5):
            candidates = [c for c in sorted(F.cones, key=sorted) if len(c) >= 1]
            sigma = rng.choice(candidates)
            sub = stellar_subdivision(F, sigma)
            r = refinement_map(sub, F)
            for fine_cone, coarse_cone in r.assignment.items():
                for i in fine_cone:
                    assert support_contains(F, sub.rays[i])
                assert len(coarse_cone) >= len(fine_cone) or coarse_cone == fine_cone
            F = sub


def test_canonical_fan_roundtrip():
    for F in FANS.values():
        C = canonical_fan(F)
        assert canonical_fan(C) == C
        assert len(C.cones) == len(F.cones)
        assert sorted(C.rays) == list(C.rays)


def test_unimodular_invariance_of_validation():
    rng = Random(42)
    for name, F in FANS.items():
        W = random_unimodular(rng, F.lattice_rank)
        G = transform_fan(F, W)
        assert validate_fan(G) is None, name
        assert is_smooth(G)
