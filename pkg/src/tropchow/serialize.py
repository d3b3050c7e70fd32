"""Canonical JSON for matroids, fans, weights, classes and certificates.

Emission is byte-stable: rays sorted lexicographically (with cone indices
remapped), dictionary keys sorted, fixed separators, trailing newline.
Parsing reports malformed JSON with line/column and semantic problems with
the violated invariant named.
"""

from __future__ import annotations

import json
from typing import Any

from .chow import ChowClass, MinkowskiWeight
from .duality import DualityCertificate, FanMorphism
from .fan import Fan, canonical_fan, make_fan
from .matroid import Matroid, make_matroid, matroid_from_bases


class InputError(Exception):
    """Malformed or semantically invalid input file (CLI exit code 2)."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}")


def load_file(path: str) -> Any:
    try:
        with open(path) as fh:
            return loads(fh.read())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")


# ---------------------------------------------------------------------------
# matroids


def matroid_to_obj(M: Matroid) -> dict:
    return {"n": M.n, "circuits": [list(c) for c in M.circuits]}


def matroid_from_obj(obj: Any) -> Matroid:
    if not isinstance(obj, dict):
        raise InputError("matroid JSON must be an object")
    if "n" not in obj or not isinstance(obj["n"], int) or obj["n"] < 0:
        raise InputError('matroid JSON needs a nonnegative integer "n"')
    has_circuits = "circuits" in obj
    has_bases = "bases" in obj
    if has_circuits == has_bases:
        raise InputError('matroid JSON needs exactly one of "circuits" or "bases"')
    key = "circuits" if has_circuits else "bases"
    fam = obj[key]
    if not isinstance(fam, list) or not all(
        isinstance(s, list) and all(isinstance(e, int) for e in s) for s in fam
    ):
        raise InputError(f'"{key}" must be a list of integer lists')
    for s in fam:
        if any(e < 0 or e >= obj["n"] for e in s):
            raise InputError(f'"{key}" entry {s} leaves the ground set')
    try:
        if has_circuits:
            return make_matroid(obj["n"], fam)
        return matroid_from_bases(obj["n"], fam)
    except ValueError as e:
        raise InputError(str(e))


# ---------------------------------------------------------------------------
# fans


def fan_to_obj(F: Fan) -> dict:
    C = canonical_fan(F)
    return {
        "lattice_rank": C.lattice_rank,
        "rays": [list(r) for r in C.rays],
        "maximal_cones": sorted(list(c) for c in C.maximal_cones()),
    }


def fan_from_obj(obj: Any) -> Fan:
    if not isinstance(obj, dict):
        raise InputError("fan JSON must be an object")
    for key in ("lattice_rank", "rays", "maximal_cones"):
        if key not in obj:
            raise InputError(f'fan JSON needs "{key}"')
    rank = obj["lattice_rank"]
    if not isinstance(rank, int) or rank < 0:
        raise InputError('"lattice_rank" must be a nonnegative integer')
    rays = obj["rays"]
    if not isinstance(rays, list) or not all(
        isinstance(r, list) and len(r) == rank and all(isinstance(x, int) for x in r)
        for r in rays
    ):
        raise InputError(f'"rays" must be integer vectors of length {rank}')
    cones = obj["maximal_cones"]
    if not isinstance(cones, list) or not all(
        isinstance(c, list) and all(isinstance(i, int) for i in c) for c in cones
    ):
        raise InputError('"maximal_cones" must be lists of ray indices')
    for c in cones:
        if any(i < 0 or i >= len(rays) for i in c):
            raise InputError(f"maximal cone {c} references a missing ray")
    return make_fan(rank, rays, [tuple(c) for c in cones] + [(i,) for i in range(len(rays))])


# ---------------------------------------------------------------------------
# weights and classes


def weight_to_obj(c: MinkowskiWeight) -> dict:
    return {
        "degree": c.degree,
        "weights": [
            {"cone": list(cone), "weight": w}
            for cone, w in sorted(c.weights.items())
        ],
    }


def weight_from_obj(F: Fan, obj: Any) -> MinkowskiWeight:
    if not isinstance(obj, dict) or "degree" not in obj or "weights" not in obj:
        raise InputError('weight JSON needs "degree" and "weights"')
    weights = {}
    for item in obj["weights"]:
        if not isinstance(item, dict) or "cone" not in item or "weight" not in item:
            raise InputError('weight entries need "cone" and "weight"')
        weights[tuple(item["cone"])] = item["weight"]
    try:
        return MinkowskiWeight(F, obj["degree"], weights)
    except Exception as e:
        raise InputError(f"invalid weight: {e}")


def class_to_obj(alpha: ChowClass) -> dict:
    return {
        "degree": alpha.degree,
        "coeffs": [
            {"cone": list(cone), "coeff": a}
            for cone, a in sorted(alpha.coeffs.items())
        ],
    }


def class_from_obj(F: Fan, obj: Any) -> ChowClass:
    if not isinstance(obj, dict) or "degree" not in obj or "coeffs" not in obj:
        raise InputError('class JSON needs "degree" and "coeffs"')
    coeffs = {}
    for item in obj["coeffs"]:
        if not isinstance(item, dict) or "cone" not in item or "coeff" not in item:
            raise InputError('class entries need "cone" and "coeff"')
        coeffs[tuple(item["cone"])] = item["coeff"]
    try:
        return ChowClass(F, obj["degree"], coeffs)
    except Exception as e:
        raise InputError(f"invalid class: {e}")


# ---------------------------------------------------------------------------
# certificates and morphisms


def certificate_to_obj(cert: DualityCertificate) -> dict:
    return {
        "fan": fan_to_obj(cert.fan),
        "fan_id": cert.fan_id,
        "dimension": cert.dimension,
        "degrees": [
            {
                "k": d.k,
                "rank": d.rank,
                "torsion": list(d.torsion),
                "pairing_det": d.pairing_det,
            }
            for d in cert.degrees
        ],
        "pass": cert.passed,
        "failure": cert.failure,
    }


def morphism_from_obj(obj: Any) -> FanMorphism:
    if not isinstance(obj, dict):
        raise InputError("morphism JSON must be an object")
    for key in ("source", "target", "matrix", "cone_map"):
        if key not in obj:
            raise InputError(f'morphism JSON needs "{key}"')
    source = fan_from_obj(obj["source"])
    target = fan_from_obj(obj["target"])
    matrix = obj["matrix"]
    if not isinstance(matrix, list) or not all(
        isinstance(row, list) and all(isinstance(x, int) for x in row) for row in matrix
    ):
        raise InputError('"matrix" must be a list of integer rows')
    cone_map = {}
    for item in obj["cone_map"]:
        if not isinstance(item, dict) or "source" not in item or "target" not in item:
            raise InputError('cone_map entries need "source" and "target"')
        cone_map[frozenset(item["source"])] = frozenset(item["target"])
    # faces inherit assignments from any listed cone when absent
    for cone in source.cones:
        if cone in cone_map:
            continue
        parent = next(
            (c for c in cone_map if cone <= c),
            None,
        )
        if parent is not None:
            cone_map[cone] = cone_map[parent]
    return FanMorphism(
        source=source,
        target=target,
        matrix=tuple(tuple(row) for row in matrix),
        cone_map=cone_map,
    )
