"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the verdict lines.
All randomness is seeded; expected values come from independent oracles
(naive Hermite reduction, minor-gcd invariant factors, descent counting) or
are frozen hand-derived integers.
"""

import time
from contextlib import contextmanager
from functools import lru_cache
from random import Random

from tropchow.bergman import fine_subdivision, linear_space_contains
from tropchow.catalog import FANS, MATROIDS, boolean_matroid
from tropchow.chow import (
    ChowClass,
    MinkowskiWeight,
    chow_group,
    evaluate,
    is_balanced,
    minkowski_weight_basis,
    multiply,
)
from tropchow.duality import (
    certify_poincare_duality,
    class_action,
    cycle_to_cocycle,
    divisor_action_direct,
    fundamental_weight,
    pullback_class,
    pushforward_class,
    refine_weight,
)
from tropchow.fan import (
    make_fan,
    refinement_map,
    star,
    stellar_subdivision,
    validate_fan,
)
from tropchow.intlinalg import (
    hermite_normal_form,
    kernel_basis,
    mat_mul,
    smith_normal_form,
)
from tropchow.matroid import parallel_connection
from tropchow.report import batch_certify

from oracles import (
    det_naive,
    eulerian_numbers,
    hermite_naive,
    minor_gcd_invariants,
    random_matrix,
    random_rational_vector,
    rank_fraction_gauss,
)
from test_chow import random_class, random_weight

CATALOG_ORDER = ("U12", "U13", "U23", "U24", "U34", "B2", "B3", "MK4")


@contextmanager
def verdict(number: int, label: str):
    try:
        yield
    except BaseException:
        print(f"criterion {number:2d} ({label}): FAIL")
        raise
    print(f"criterion {number:2d} ({label}): PASS")


@lru_cache(maxsize=None)
def criterion3_subdivisions() -> tuple:
    """The 20 seeded stellar subdivisions shared by criteria 3 and 6."""
    rng = Random(3003)
    fans = []
    for name in ("U24", "B3"):
        base = fine_subdivision(MATROIDS[name])
        for run in range(10):
            depth = rng.randint(1, 3)
            F = base
            for _ in range(depth):
                candidates = [c for c in sorted(F.cones, key=sorted) if len(c) >= 1]
                F = stellar_subdivision(F, rng.choice(candidates))
            fans.append((f"{name}/run{run}", F))
    return tuple(fans)


def test_criterion_01_batch_certification():
    with verdict(1, "duality certification for the catalog"):
        start = time.perf_counter()
        report = batch_certify(
            [(name, MATROIDS[name]) for name in CATALOG_ORDER], depth=0, seed=1001
        )
        elapsed = time.perf_counter() - start
        assert report.all_passed(), [
            (r.item, r.variant, r.failure) for r in report.results if not r.passed
        ]
        for r in report.results:
            assert r.torsion_free, (r.item, r.variant)
            assert all(abs(d) == 1 for d in r.pairing_dets), (r.item, r.variant)
        assert elapsed < 60, f"batch took {elapsed:.1f}s"


def test_criterion_02_rank_anchors():
    with verdict(2, "rank anchors vs the Eulerian oracle"):
        u23 = [d.rank for d in certify_poincare_duality(fine_subdivision(MATROIDS["U23"])).degrees]
        assert u23 == [1, 1]
        b3 = [d.rank for d in certify_poincare_duality(fine_subdivision(MATROIDS["B3"])).degrees]
        assert b3 == eulerian_numbers(3) == [1, 4, 1]
        b4 = [d.rank for d in certify_poincare_duality(fine_subdivision(boolean_matroid(4))).degrees]
        assert b4 == eulerian_numbers(4) == [1, 11, 11, 1]


def test_criterion_03_stellar_and_star_transfer():
    with verdict(3, "stellar subdivisions and stars stay certified"):
        for label, F in criterion3_subdivisions():
            cert = certify_poincare_duality(F)
            assert cert.passed, (label, cert.failure)
        rng = Random(3103)
        for name in ("U24", "B3"):
            base = fine_subdivision(MATROIDS[name])
            d = base.dim()
            cones = sorted(base.cones, key=sorted)
            for _ in range(5):
                sigma = rng.choice(cones)
                cert = certify_poincare_duality(star(base, sigma))
                assert cert.passed, (name, sorted(sigma), cert.failure)
                assert cert.dimension == d - len(sigma)


def test_criterion_04_divisor_action_oracle_equivalence():
    with verdict(4, "divisor action equals the ring action"):
        rng = Random(4004)
        for name, F in FANS.items():
            pairs = 0
            while pairs < 100:
                k = rng.randint(1, max(F.dim(), 1))
                values = [rng.randint(-5, 5) for _ in F.rays]
                basis = minkowski_weight_basis(F, k)
                if basis:
                    c = basis[rng.randrange(len(basis))]
                else:
                    c = MinkowskiWeight(F, k, {})
                direct = divisor_action_direct(F, values, c)
                cls = ChowClass(F, 1, {(i,): v for i, v in enumerate(values) if v})
                ring = class_action(cls, c)
                assert direct.weights == ring.weights, (name, values)
                assert is_balanced(direct) and is_balanced(ring)
                pairs += 1


def test_criterion_05_duality_round_trips():
    with verdict(5, "cycle <-> cocycle round trips"):
        rng = Random(5005)
        for name in CATALOG_ORDER:
            F = fine_subdivision(MATROIDS[name])
            fund = fundamental_weight(F)
            d = F.dim()
            for k in range(d + 1):
                for _ in range(20):
                    alpha = random_class(rng, F, d - k)
                    assert cycle_to_cocycle(F, class_action(alpha, fund)) == alpha
                    B = random_weight(rng, F, k)
                    assert class_action(cycle_to_cocycle(F, B), fund).weights == B.weights


def test_criterion_06_top_weights():
    with verdict(6, "top Minkowski weights are generated by all-ones"):
        fixtures = [(name, fine_subdivision(MATROIDS[name])) for name in CATALOG_ORDER]
        for label, F in list(fixtures) + list(criterion3_subdivisions()):
            d = F.dim()
            basis = minkowski_weight_basis(F, d)
            assert len(basis) == 1, label
            top = F.cones_of_dim(d)
            assert len(basis[0].weights) == len(top), label
            assert set(basis[0].weights.values()) in ({1}, {-1}), label


def test_criterion_07_parallel_connection():
    with verdict(7, "parallel connection circuits and support product"):
        P12 = parallel_connection(MATROIDS["U12"], 0, MATROIDS["U12"], 0)
        assert P12 == MATROIDS["U13"]
        rng = Random(7007)
        M = MATROIDS["U23"]
        P = parallel_connection(M, 0, M, 0)
        agreements = 0
        for _ in range(500):
            w = random_rational_vector(rng, P.n)
            glued = linear_space_contains(P, w)
            split = linear_space_contains(M, w[:3]) and linear_space_contains(
                M, [w[0], w[3], w[4]]
            )
            if glued == split:
                agreements += 1
        assert agreements == 500


def test_criterion_08_refinement_functoriality():
    with verdict(8, "refinement push/pull functoriality"):
        rng = Random(8008)
        coarse = fine_subdivision(MATROIDS["B3"])
        fine = stellar_subdivision(coarse, next(
            c for c in sorted(coarse.cones, key=sorted) if len(c) == 2
        ))
        r = refinement_map(fine, coarse)
        d = coarse.dim()
        for _ in range(50):
            k = rng.randint(0, d)
            alpha = random_class(rng, coarse, k)
            assert pushforward_class(r, pullback_class(r, alpha)) == alpha
            j = rng.randint(0, d - k) if d > k else 0
            beta = random_class(rng, fine, j)
            lhs = pushforward_class(r, multiply(pullback_class(r, alpha), beta))
            rhs = multiply(alpha, pushforward_class(r, beta))
            assert lhs == rhs
        for k in range(d + 1):
            for _ in range(5):
                c = random_weight(rng, coarse, k)
                rc = refine_weight(r, c)
                assert is_balanced(rc)
                gamma = random_class(rng, fine, k)
                assert evaluate(rc, gamma) == evaluate(c, pushforward_class(r, gamma))


def test_criterion_09_negative_controls():
    with verdict(9, "negative controls fail for the stated reasons"):
        two_ray = make_fan(2, [(1, 0), (0, 1)], [(0,), (1,)])
        cert = certify_poincare_duality(two_ray)
        assert not cert.passed
        assert "top-degree group not Z" in cert.failure
        bad = make_fan(2, [(1, 0), (1, 2)], [(0, 1)])
        msg = validate_fan(bad)
        assert msg is not None and "index 2" in msg


def test_criterion_10_exact_linear_algebra_oracle():
    with verdict(10, "Hermite/Smith forms match the naive oracles"):
        rng = Random(1010)
        for _ in range(200):
            m = rng.randint(1, 6)
            n = rng.randint(1, 6)
            A = random_matrix(rng, m, n, bound=9)
            H, U = hermite_normal_form(A)
            assert H == hermite_naive(A)
            assert mat_mul(U, A) == H
            assert abs(det_naive(U)) == 1
            snf = smith_normal_form(A)
            assert mat_mul(mat_mul(snf.U, A), snf.V) == snf.D
            assert snf.invariant_factors == minor_gcd_invariants(A)
            assert abs(det_naive(snf.U)) == 1
            assert abs(det_naive(snf.V)) == 1
            kernel = kernel_basis(A, n)
            assert len(kernel) == n - rank_fraction_gauss(A)
            for v in kernel:
                assert all(
                    sum(A[i][j] * v[j] for j in range(n)) == 0 for i in range(m)
                )
            if kernel:
                assert smith_normal_form(kernel).invariant_factors == [1] * len(kernel)
