"""CLI surface: exit codes, JSON round trips, byte stability."""

import json
import os

import pytest

from tropchow.catalog import FANS, MATROIDS
from tropchow.cli import main
from tropchow.serialize import (
    InputError,
    class_from_obj,
    class_to_obj,
    dumps,
    fan_from_obj,
    fan_to_obj,
    loads,
    matroid_from_obj,
    matroid_to_obj,
    weight_from_obj,
    weight_to_obj,
)
from tropchow.chow import MinkowskiWeight, monomial_class
from tropchow.fan import canonical_fan


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(dumps(obj))
        return str(p)

    return write, tmp_path


class TestSerialization:
    def test_matroid_roundtrip(self):
        for M in MATROIDS.values():
            assert matroid_from_obj(loads(dumps(matroid_to_obj(M)))) == M

    def test_matroid_from_bases(self):
        M = matroid_from_obj({"n": 3, "bases": [[0, 1], [0, 2], [1, 2]]})
        assert M == MATROIDS["U23"]

    def test_matroid_rejects_both_keys(self):
        with pytest.raises(InputError):
            matroid_from_obj({"n": 2, "bases": [[0]], "circuits": [[0, 1]]})

    def test_fan_roundtrip_is_identity_on_canonical(self):
        for F in FANS.values():
            obj = fan_to_obj(F)
            again = fan_to_obj(fan_from_obj(loads(dumps(obj))))
            assert obj == again
            assert fan_from_obj(obj) == canonical_fan(F)

    def test_fan_bad_cone_index(self):
        with pytest.raises(InputError):
            fan_from_obj({"lattice_rank": 1, "rays": [[1]], "maximal_cones": [[2]]})

    def test_weight_roundtrip(self):
        F = FANS["F1"]
        c = MinkowskiWeight(F, 1, {(0,): 1, (1,): 1, (2,): 1})
        back = weight_from_obj(F, loads(dumps(weight_to_obj(c))))
        assert back.weights == c.weights

    def test_class_roundtrip(self):
        F = FANS["F3"]
        alpha = monomial_class(F, (0, 3))
        back = class_from_obj(F, loads(dumps(class_to_obj(alpha))))
        assert back.coeffs == alpha.coeffs

    def test_malformed_json_reports_position(self):
        with pytest.raises(InputError) as err:
            loads("{\n  broken\n}")
        assert "line 2" in str(err.value)


class TestCli:
    def test_catalog_list(self, capsys):
        assert main(["catalog", "list"]) == 0
        out = capsys.readouterr().out
        assert "U23" in out and "F3" in out

    def test_catalog_emit_byte_stable(self, capsys):
        assert main(["catalog", "emit", "B3"]) == 0
        first = capsys.readouterr().out
        assert main(["catalog", "emit", "B3"]) == 0
        second = capsys.readouterr().out
        assert first == second
        # B3's Bergman fan is the permutohedral fixture
        assert loads(first) == fan_to_obj(FANS["F3"])

    def test_catalog_emit_matroid_flag(self, capsys):
        assert main(["catalog", "emit", "U23", "--matroid"]) == 0
        out = capsys.readouterr().out
        assert loads(out) == matroid_to_obj(MATROIDS["U23"])

    def test_catalog_emit_unknown(self, capsys):
        assert main(["catalog", "emit", "nope"]) == 2

    def test_matroid_validate_ok(self, files, capsys):
        write, _ = files
        path = write("m.json", matroid_to_obj(MATROIDS["U23"]))
        assert main(["matroid", "validate", path]) == 0
        assert "ok" in capsys.readouterr().out

    def test_matroid_validate_violation(self, files, capsys):
        write, _ = files
        path = write("bad.json", {"n": 2, "circuits": [[0], [0, 1]]})
        assert main(["matroid", "validate", path]) == 1
        assert "contains" in capsys.readouterr().out

    def test_matroid_flats_and_parallel(self, files, capsys):
        write, _ = files
        m = write("u12.json", matroid_to_obj(MATROIDS["U12"]))
        assert main(["matroid", "flats", m]) == 0
        assert json.loads(capsys.readouterr().out) == {"flats": []}
        assert main(["matroid", "parallel", m, "0", m, "0"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out == matroid_to_obj(MATROIDS["U13"])

    def test_bergman_build_and_contains(self, files, capsys):
        write, _ = files
        m = write("u23.json", matroid_to_obj(MATROIDS["U23"]))
        assert main(["bergman", "build", m]) == 0
        fan_obj = json.loads(capsys.readouterr().out)
        assert fan_obj == fan_to_obj(FANS["F1"])
        assert main(["bergman", "contains", m, "5,5,7"]) == 0
        assert capsys.readouterr().out.strip() == "true"
        assert main(["bergman", "contains", m, "0,1,2"]) == 0
        assert capsys.readouterr().out.strip() == "false"
        # quotient point (-1/2,-1/2) lifts to (-1/2,-1/2,0): min attained twice
        assert main(["bergman", "contains", m, "--", "-1/2,-1/2"]) == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_fan_validate_exit_codes(self, files, capsys):
        write, _ = files
        good = write("f1.json", fan_to_obj(FANS["F1"]))
        assert main(["fan", "validate", good]) == 0
        bad = write(
            "bad.json",
            {"lattice_rank": 2, "rays": [[1, 0], [1, 2]], "maximal_cones": [[0, 1]]},
        )
        assert main(["fan", "validate", bad]) == 1
        assert "index 2" in capsys.readouterr().out

    def test_fan_star_stellar_refine(self, files, capsys):
        write, _ = files
        f2 = write("f2.json", fan_to_obj(FANS["F2"]))
        assert main(["fan", "stellar", f2, "0,1"]) == 0
        sub_obj = json.loads(capsys.readouterr().out)
        sub = write("sub.json", sub_obj)
        assert main(["fan", "star", f2, "0"]) == 0
        st = json.loads(capsys.readouterr().out)
        assert st["lattice_rank"] == 1
        assert main(["fan", "refine", sub, f2]) == 0
        ref = json.loads(capsys.readouterr().out)
        assert {"fine": [], "coarse": []} in ref["assignment"]

    def test_chow_ranks_and_weights(self, files, capsys):
        write, _ = files
        f3 = write("f3.json", fan_to_obj(FANS["F3"]))
        assert main(["chow", "ranks", f3]) == 0
        ranks = json.loads(capsys.readouterr().out)
        assert [d["rank"] for d in ranks["degrees"]] == [1, 4, 1]
        assert main(["chow", "weights", f3, "2"]) == 0
        weights = json.loads(capsys.readouterr().out)
        assert len(weights["basis"]) == 1

    def test_duality_certify_exit_codes(self, files, capsys):
        write, _ = files
        f1 = write("f1.json", fan_to_obj(FANS["F1"]))
        assert main(["duality", "certify", f1]) == 0
        cert = json.loads(capsys.readouterr().out)
        assert cert["pass"] is True
        assert [d["rank"] for d in cert["degrees"]] == [1, 1]
        tworay = write(
            "tworay.json",
            {"lattice_rank": 2, "rays": [[0, 1], [1, 0]], "maximal_cones": [[0], [1]]},
        )
        assert main(["duality", "certify", tworay]) == 1
        cert = json.loads(capsys.readouterr().out)
        assert cert["pass"] is False
        assert "top-degree group not Z" in cert["failure"]

    def test_duality_act_invert_intersect(self, files, capsys):
        write, _ = files
        f1 = write("f1.json", fan_to_obj(FANS["F1"]))
        fund = write(
            "fund.json",
            weight_to_obj(MinkowskiWeight(FANS["F1"], 1, {(0,): 1, (1,): 1, (2,): 1})),
        )
        # the canonical fan reorders rays: recompute the values order
        canon = canonical_fan(FANS["F1"])
        values = ",".join("1" if r == (1, 0) else "0" for r in canon.rays)
        assert main(["duality", "act", f1, values, fund]) == 0
        acted = json.loads(capsys.readouterr().out)
        assert acted["weights"] == [{"cone": [], "weight": 1}]
        point = write("point.json", dumps_obj({"degree": 0, "weights": [{"cone": [], "weight": 1}]}))
        assert main(["duality", "invert", f1, point]) == 0
        cls = json.loads(capsys.readouterr().out)
        assert cls["degree"] == 1
        assert main(["duality", "intersect", f1, fund, point]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["weights"] == [{"cone": [], "weight": 1}]

    def test_batch_table_and_json(self, capsys, tmp_path):
        assert main(["batch", "U12", "U23", "--seed", "7"]) == 0
        table = capsys.readouterr().out
        assert "seed: 7" in table and "all passed: yes" in table
        assert main(["batch", "U23", "--seed", "7", "--output", "json"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["all_passed"] is True

    def test_batch_empty_list(self, capsys):
        assert main(["batch"]) == 0

    def test_batch_json_byte_stable(self, capsys):
        args = ["batch", "U23", "B3", "--depth", "2", "--seed", "42", "--output", "json"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        assert capsys.readouterr().out == first
        obj = json.loads(first)
        assert obj["seed"] == 42 and obj["all_passed"] is True
        assert any(r["variant"] == "stellar2" for r in obj["results"])

    def test_batch_report_dir(self, capsys, tmp_path):
        out = tmp_path / "rep"
        assert main(["batch", "U23", "B2", "--report-dir", str(out)]) == 0
        assert (out / "report.csv").exists()
        assert (out / "chow_ranks.png").exists()
        assert (out / "timings.png").exists()
        header = (out / "report.csv").read_text().splitlines()[0]
        assert header.startswith("item,variant,dimension")

    def test_missing_file_is_usage_error(self, capsys):
        assert main(["fan", "validate", "/nonexistent/f.json"]) == 2
        assert "error" in capsys.readouterr().err

    def test_malformed_json_is_usage_error(self, files, capsys):
        write, _ = files
        p = write("broken.json", None)
        with open(p, "w") as fh:
            fh.write("{broken")
        assert main(["fan", "validate", p]) == 2
        err = capsys.readouterr().err
        assert "line" in err


def dumps_obj(obj):
    return obj
