"""Command-line surface.

Exit codes: 0 success, 1 mathematical verdict failure (axiom violation,
failed certificate, failed batch item), 2 input/usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import catalog, report, serialize
from .bergman import PointNotInSpace, fine_subdivision, linear_space_contains
from .chow import DegreeMismatch, FanMismatch, NotSmooth, chow_group, minkowski_weight_basis
from .duality import (
    IncompatibleMorphism,
    NoCertificate,
    NotBalanced,
    certify_poincare_duality,
    cycle_to_cocycle,
    divisor_action_direct,
    intersect_cycles,
    pullback_cycle,
)
from .fan import (
    ConeNotInFan,
    DimensionMismatch,
    NotARefinement,
    ZeroCone,
    refinement_map,
    star,
    stellar_subdivision,
    validate_fan,
)
from .matroid import (
    InvalidBasepoint,
    LoopsPresent,
    parallel_connection,
    proper_flats,
    validate_matroid,
)
from .intlinalg import NoSolution
from .serialize import InputError

USAGE_ERRORS = (
    InputError,
    LoopsPresent,
    InvalidBasepoint,
    ConeNotInFan,
    ZeroCone,
    DimensionMismatch,
    NotARefinement,
    NotBalanced,
    NoCertificate,
    IncompatibleMorphism,
    NotSmooth,
    FanMismatch,
    DegreeMismatch,
    PointNotInSpace,
    NoSolution,
    ValueError,
)


def _parse_point(text: str) -> list[Fraction]:
    try:
        return [Fraction(part) for part in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse point {text!r}; expected e.g. 1,-2,1/3")


def _parse_cone(text: str) -> tuple[int, ...]:
    if text.strip() in ("", "-"):
        return ()
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse cone {text!r}; expected ray indices like 0,2")


def _parse_values(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse ray values {text!r}; expected e.g. 1,0,-2")


def _emit(args, obj) -> None:
    print(serialize.dumps(obj), end="")


# ---------------------------------------------------------------------------
# handlers


def _cmd_matroid_validate(args) -> int:
    M = serialize.matroid_from_obj(serialize.load_file(args.matroid))
    problem = validate_matroid(M)
    if problem:
        print(f"violation: {problem}")
        return 1
    print("ok")
    return 0


def _cmd_matroid_flats(args) -> int:
    M = serialize.matroid_from_obj(serialize.load_file(args.matroid))
    _emit(args, {"flats": [list(f) for f in proper_flats(M)]})
    return 0


def _cmd_matroid_parallel(args) -> int:
    M1 = serialize.matroid_from_obj(serialize.load_file(args.m1))
    M2 = serialize.matroid_from_obj(serialize.load_file(args.m2))
    P = parallel_connection(M1, args.p1, M2, args.p2)
    _emit(args, serialize.matroid_to_obj(P))
    return 0


def _cmd_bergman_build(args) -> int:
    M = serialize.matroid_from_obj(serialize.load_file(args.matroid))
    _emit(args, serialize.fan_to_obj(fine_subdivision(M)))
    return 0


def _cmd_bergman_contains(args) -> int:
    M = serialize.matroid_from_obj(serialize.load_file(args.matroid))
    point = _parse_point(args.point)
    print("true" if linear_space_contains(M, point) else "false")
    return 0


def _cmd_fan_validate(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    problem = validate_fan(F)
    if problem:
        print(f"violation: {problem}")
        return 1
    print("ok")
    return 0


def _cmd_fan_star(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    _emit(args, serialize.fan_to_obj(star(F, _parse_cone(args.cone))))
    return 0


def _cmd_fan_stellar(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    _emit(args, serialize.fan_to_obj(stellar_subdivision(F, _parse_cone(args.cone))))
    return 0


def _cmd_fan_refine(args) -> int:
    fine = serialize.fan_from_obj(serialize.load_file(args.fine))
    coarse = serialize.fan_from_obj(serialize.load_file(args.coarse))
    r = refinement_map(fine, coarse)
    _emit(
        args,
        {
            "assignment": [
                {"fine": sorted(d), "coarse": sorted(s)}
                for d, s in sorted(r.assignment.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
            ]
        },
    )
    return 0


def _cmd_chow_ranks(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    d = F.dim()
    _emit(
        args,
        {
            "dimension": d,
            "degrees": [
                {
                    "k": k,
                    "rank": chow_group(F, k).rank,
                    "torsion": list(chow_group(F, k).torsion),
                }
                for k in range(d + 1)
            ],
        },
    )
    return 0


def _cmd_chow_weights(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    basis = minkowski_weight_basis(F, args.degree)
    _emit(args, {"degree": args.degree, "basis": [serialize.weight_to_obj(c) for c in basis]})
    return 0


def _cmd_duality_certify(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    cert = certify_poincare_duality(F)
    _emit(args, serialize.certificate_to_obj(cert))
    return 0 if cert.passed else 1


def _cmd_duality_act(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    values = _parse_values(args.values)
    c = serialize.weight_from_obj(F, serialize.load_file(args.weight))
    _emit(args, serialize.weight_to_obj(divisor_action_direct(F, values, c)))
    return 0


def _cmd_duality_invert(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    B = serialize.weight_from_obj(F, serialize.load_file(args.weight))
    _emit(args, serialize.class_to_obj(cycle_to_cocycle(F, B)))
    return 0


def _cmd_duality_intersect(args) -> int:
    F = serialize.fan_from_obj(serialize.load_file(args.fan))
    A = serialize.weight_from_obj(F, serialize.load_file(args.a))
    B = serialize.weight_from_obj(F, serialize.load_file(args.b))
    _emit(args, serialize.weight_to_obj(intersect_cycles(F, A, B)))
    return 0


def _cmd_duality_pullback(args) -> int:
    f = serialize.morphism_from_obj(serialize.load_file(args.morphism))
    A = serialize.weight_from_obj(f.source, serialize.load_file(args.a))
    B = serialize.weight_from_obj(f.target, serialize.load_file(args.b))
    _emit(args, serialize.weight_to_obj(pullback_cycle(f, A, B)))
    return 0


def _cmd_catalog_list(args) -> int:
    for name in sorted(catalog.MATROIDS):
        M = catalog.MATROIDS[name]
        print(f"{name}  matroid  n={M.n} circuits={len(M.circuits)}")
    for name in sorted(catalog.FANS):
        F = catalog.FANS[name]
        print(f"{name}  fan      rank={F.lattice_rank} rays={len(F.rays)}")
    return 0


def _cmd_catalog_emit(args) -> int:
    name = args.name
    if name in catalog.FANS:
        _emit(args, serialize.fan_to_obj(catalog.FANS[name]))
        return 0
    if name in catalog.MATROIDS:
        M = catalog.MATROIDS[name]
        if args.matroid:
            _emit(args, serialize.matroid_to_obj(M))
        else:
            _emit(args, serialize.fan_to_obj(fine_subdivision(M)))
        return 0
    raise InputError(f"unknown catalog name {name!r}; see `tropchow catalog list`")


def _cmd_batch(args) -> int:
    items: list[tuple[str, object]] = []
    for entry in args.matroids:
        if entry in catalog.MATROIDS:
            items.append((entry, catalog.MATROIDS[entry]))
        else:
            M = serialize.matroid_from_obj(serialize.load_file(entry))
            items.append((entry, M))
    rep = report.batch_certify(
        items, depth=args.depth, seed=args.seed, jobs=args.jobs
    )
    if args.output == "json":
        _emit(args, rep.to_obj())
    else:
        print(rep.to_table(), end="")
    if args.report_dir:
        import os

        os.makedirs(args.report_dir, exist_ok=True)
        rep.write_csv(os.path.join(args.report_dir, "report.csv"))
        figures = rep.write_figures(args.report_dir)
        print(
            f"wrote {args.report_dir}/report.csv and "
            + ", ".join(figures),
            file=sys.stderr,
        )
    return 0 if rep.all_passed() else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropchow",
        description=(
            "Integral Chow rings, Minkowski weights and Poincare duality "
            "certificates for smooth fans on tropical linear spaces."
        ),
    )
    sub = parser.add_subparsers(dest="group", required=True)

    m = sub.add_parser("matroid", help="matroid axioms, flats, parallel connection")
    msub = m.add_subparsers(dest="cmd", required=True)
    p = msub.add_parser("validate", help="check the circuit axioms")
    p.add_argument("matroid")
    p.set_defaults(func=_cmd_matroid_validate)
    p = msub.add_parser("flats", help="proper nonempty flats")
    p.add_argument("matroid")
    p.set_defaults(func=_cmd_matroid_flats)
    p = msub.add_parser("parallel", help="parallel connection at basepoints")
    p.add_argument("m1")
    p.add_argument("p1", type=int)
    p.add_argument("m2")
    p.add_argument("p2", type=int)
    p.set_defaults(func=_cmd_matroid_parallel)

    b = sub.add_parser("bergman", help="tropical linear spaces of matroids")
    bsub = b.add_subparsers(dest="cmd", required=True)
    p = bsub.add_parser("build", help="fine subdivision fan of the matroid")
    p.add_argument("matroid")
    p.set_defaults(func=_cmd_bergman_build)
    p = bsub.add_parser("contains", help="membership of a point in L_M")
    p.add_argument("matroid")
    p.add_argument("point", help="comma-separated rationals, ambient or quotient")
    p.set_defaults(func=_cmd_bergman_contains)

    f = sub.add_parser("fan", help="fan validation and surgeries")
    fsub = f.add_subparsers(dest="cmd", required=True)
    p = fsub.add_parser("validate", help="check the fan invariants")
    p.add_argument("fan")
    p.set_defaults(func=_cmd_fan_validate)
    p = fsub.add_parser("star", help="star of the fan at a cone")
    p.add_argument("fan")
    p.add_argument("cone", help="ray indices like 0,2 (use - for the zero cone)")
    p.set_defaults(func=_cmd_fan_star)
    p = fsub.add_parser("stellar", help="stellar subdivision at a cone")
    p.add_argument("fan")
    p.add_argument("cone")
    p.set_defaults(func=_cmd_fan_stellar)
    p = fsub.add_parser("refine", help="refinement assignment fine -> coarse")
    p.add_argument("fine")
    p.add_argument("coarse")
    p.set_defaults(func=_cmd_fan_refine)

    c = sub.add_parser("chow", help="Chow group ranks and Minkowski weights")
    csub = c.add_subparsers(dest="cmd", required=True)
    p = csub.add_parser("ranks", help="rank and torsion per degree")
    p.add_argument("fan")
    p.set_defaults(func=_cmd_chow_ranks)
    p = csub.add_parser("weights", help="basis of the Minkowski weights")
    p.add_argument("fan")
    p.add_argument("degree", type=int)
    p.set_defaults(func=_cmd_chow_weights)

    d = sub.add_parser("duality", help="certificates, actions, intersections")
    dsub = d.add_subparsers(dest="cmd", required=True)
    p = dsub.add_parser("certify", help="Poincare duality certificate")
    p.add_argument("fan")
    p.set_defaults(func=_cmd_duality_certify)
    p = dsub.add_parser("act", help="divisor action of ray values on a weight")
    p.add_argument("fan")
    p.add_argument("values", help="comma-separated integer per ray")
    p.add_argument("weight")
    p.set_defaults(func=_cmd_duality_act)
    p = dsub.add_parser("invert", help="cycle -> cocycle on a certified fan")
    p.add_argument("fan")
    p.add_argument("weight")
    p.set_defaults(func=_cmd_duality_invert)
    p = dsub.add_parser("intersect", help="stable intersection of two weights")
    p.add_argument("fan")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_duality_intersect)
    p = dsub.add_parser("pullback", help="pull a cycle back along a morphism")
    p.add_argument("morphism")
    p.add_argument("a", help="weight on the source normalizing the pull-back")
    p.add_argument("b", help="weight on the target to pull back")
    p.set_defaults(func=_cmd_duality_pullback)

    cat = sub.add_parser("catalog", help="named fixture matroids and fans")
    catsub = cat.add_subparsers(dest="cmd", required=True)
    p = catsub.add_parser("list", help="list the catalog")
    p.set_defaults(func=_cmd_catalog_list)
    p = catsub.add_parser("emit", help="emit a catalog object as JSON")
    p.add_argument("name")
    p.add_argument(
        "--matroid",
        action="store_true",
        help="emit the matroid JSON instead of its Bergman fan",
    )
    p.set_defaults(func=_cmd_catalog_emit)

    p = sub.add_parser("batch", help="batch duality certification")
    p.add_argument("matroids", nargs="*", help="matroid JSON files or catalog names")
    p.add_argument("--depth", type=int, default=0, help="random stellar subdivisions per item")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", choices=("json", "table"), default="table")
    p.add_argument("--report-dir", default=None, help="write report.csv and figures here")
    p.set_defaults(func=_cmd_batch)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help; pass both through
        return int(e.code or 0)
    try:
        return args.func(args)
    except USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
