from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from heckesym.cli import CHECKS, run

DATA = Path(__file__).parent / "data"


def cli(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def cli_json(capsys, *argv):
    code, out, err = cli(capsys, *argv, "--output", "json")
    return code, (json.loads(out) if out else None), err


def golden(name):
    return json.loads((DATA / name).read_text())


def test_verify_matches_golden(capsys):
    code, doc, _ = cli_json(capsys, "verify", "--field", "Q", "--input", DATA / "type1_q2.json")
    assert code == 0
    assert doc == golden("golden_verify_type1_q2.json")
    assert doc["checks"] == {"braid": True, "hecke": True, "relations_dim": True}


def test_verify_detects_perturbation(capsys):
    code, doc, _ = cli_json(capsys, "verify", "--input", DATA / "type1_q2_perturbed.json")
    assert code == 1
    assert doc["checks"]["braid"] is False


def test_verify_with_wrong_twist(capsys):
    code, doc, _ = cli_json(capsys, "verify", "--input", DATA / "flip.json", "--zeta", DATA / "diag_1_2_4.json")
    assert code == 1
    assert doc["checks"]["commutes"] is True and doc["checks"]["twisted_relations"] is False


@pytest.mark.parametrize("field,p", [("Fp:7", "2 2 2"), ("Fp:7", "eps eps eps")])
def test_count_classes_cube_root_row(capsys, field, p):
    p1, p2, p3 = p.split()
    code, out, _ = cli(capsys, "count-classes", "--field", field, "--p1", p1, "--p2", p2, "--p3", p3, "--q", 3)
    assert code == 0 and out.strip() == "4"


@pytest.mark.parametrize(
    "p,q,count", [(("2", "3", "1/6"), 2, 6), (("-1", "-1", "1"), 1, 5), (("1", "1", "1"), 1, 6), (("2", "1/2", "1"), 5, 3)]
)
def test_count_classes_over_q(capsys, p, q, count):
    code, doc, _ = cli_json(capsys, "count-classes", "--field", "Q", "--p1", p[0], "--p2", p[1], "--p3", p[2], "--q", q)
    assert code == 0 and doc["result"]["count"] == count


@pytest.mark.parametrize("field", ["Q", "Fp:5"])
def test_count_classes_without_cube_root(capsys, field):
    code, _, err = cli(capsys, "count-classes", "--field", field, "--p1", "eps", "--p2", "eps", "--p3", "eps", "--q", 1)
    assert code == 2 and "FieldLacksRoot" in err


def test_twist_flip_gives_golden(capsys):
    code, doc, _ = cli_json(capsys, "twist", "--field", "Q", "--input", DATA / "flip.json", "--zeta", DATA / "diag_1_2_4.json")
    assert code == 0
    assert doc["result"]["operator"] == golden("flip_twisted_1_2_4.json")
    assert all(doc["checks"].values())


def test_twist_inline_zeta(capsys):
    code, doc, _ = cli_json(capsys, "twist", "--field", "Q", "--input", DATA / "flip.json", "--zeta", "diag:1,2,4")
    assert code == 0 and doc["result"]["operator"] == golden("flip_twisted_1_2_4.json")


def test_twist_requires_commuting(capsys):
    code, doc, _ = cli_json(capsys, "twist", "--input", DATA / "type1_q2.json", "--zeta", DATA / "diag_1_2_4.json")
    assert code == 1 and doc["checks"] == {"commutes": False}


def test_construct_round_trip(capsys, tmp_path):
    out = tmp_path / "op.json"
    code, _, _ = cli(capsys, "construct", "--field", "Q", "--type", 1, "--q", 2, "--output", "json", "--out", out)
    assert code == 0
    op = json.loads(out.read_text())["result"]["operator"]
    assert op == golden("type1_q2.json")
    path = tmp_path / "r.json"
    path.write_text(json.dumps(op))
    code, doc, _ = cli_json(capsys, "verify", "--input", path)
    assert code == 0 and all(doc["checks"].values())


def test_command_output_chains_into_input(capsys, tmp_path):
    built = tmp_path / "built.json"
    twisted = tmp_path / "twisted.json"
    cli(capsys, "construct", "--field", "Q", "--type", 1, "--q", 2, "--output", "json", "--out", built)
    code, _, _ = cli(capsys, "twist", "--field", "Q", "--input", built, "--zeta", "diag:1,1,-1",
                     "--output", "json", "--out", twisted)
    assert code == 0
    code, doc, _ = cli_json(capsys, "relations", "--input", twisted, "--zeta", "diag:1,1,-1", "--field", "Q")
    assert code == 0 and doc["checks"] == {"relations_dim": True, "twisted_relations": True}


def test_construct_from_triple(capsys):
    code, doc, _ = cli_json(capsys, "construct", "--input", DATA / "triple_type2_q3.json")
    assert code == 0 and doc["checks"] == {"braid": True, "hecke": True}
    rows = doc["result"]["operator"]["R"]["rows"]
    assert rows[8][8] == "3"


def test_construct_rejects_bad_delta(capsys):
    code, _, err = cli(capsys, "construct", "--input", DATA / "triple_bad_delta.json")
    assert code == 2 and "DeltaRelationViolated" in err


def test_relations(capsys):
    code, doc, _ = cli_json(capsys, "relations", "--input", DATA / "flip_twisted_1_2_4.json", "--zeta", DATA / "diag_1_2_4.json")
    assert code == 0 and doc["result"]["dim"] == 3 and doc["checks"]["twisted_relations"]


def test_hilbert_golden(capsys):
    code, doc, _ = cli_json(capsys, "hilbert", "--field", "Q", "--zeta", DATA / "diag_1_2_4.json")
    assert code == 0 and doc == golden("golden_hilbert_1_2_4.json")


def test_hilbert_degree_four(capsys):
    code, doc, _ = cli_json(capsys, "hilbert", "--input", DATA / "type1_q2.json", "--max-degree", 4)
    assert code == 0 and doc["result"]["dims"] == [1, 3, 6, 10, 15]


def test_forms_check(capsys):
    code, doc, _ = cli_json(capsys, "forms-check", "--input", DATA / "type1_q2.json")
    assert code == 0
    assert doc["result"]["diagonal_rank"] == 1
    assert set(doc["checks"]) <= set(CHECKS)


def test_forms_check_on_flip(capsys):
    code, doc, _ = cli_json(capsys, "forms-check", "--input", DATA / "flip.json")
    assert code == 1 and doc["checks"]["diagonal_rank_one"] is False
    code, doc, _ = cli_json(capsys, "forms-check", "--input", DATA / "flip.json", "--no-diagonal-rank")
    assert code == 0


def test_classify_golden(capsys):
    code, doc, _ = cli_json(capsys, "classify", "--field", "Fp:7", "--zeta", "diag:1,2,4", "--q", 2)
    assert code == 0 and doc == golden("golden_classify_f7_1_2_4_q2.json")
    assert doc["result"]["gzeta_index"] == 3 and doc["result"]["class_counts"]["q!=1"] == 4


def test_enumerate(capsys):
    code, doc, _ = cli_json(capsys, "enumerate", "--field", "Fp:5", "--zeta", "diag:1,2,4", "--q", 2)
    assert code == 0
    (rep,) = doc["result"]["reports"]
    assert (rep["total_triples"], rep["gzeta_orbits"], rep["theorem_failures"]) == (56, 8, 0)


@pytest.mark.parametrize(
    "argv,err",
    [
        (["enumerate", "--field", "Fp:17", "--zeta", "diag:1,2,4"], "FieldTooLarge"),
        (["enumerate", "--field", "Fp:7", "--zeta", "diag:1,2,4", "--max-prime", "5"], "FieldTooLarge"),
        (["enumerate", "--field", "Q", "--zeta", "diag:1,2,4"], "InvalidParameter"),
        (["verify", "--input", "/nonexistent/file.json"], "cannot read"),
        (["verify", "--field", "Fp:5", "--input", str(DATA / "type1_q2.json")], "FieldMismatch"),
        (["classify", "--field", "Fp:9", "--zeta", "diag:1,2,4", "--q", "2"], "NotPrime"),
        (["twist", "--input", str(DATA / "flip.json"), "--zeta", "diag:1,2"], "MalformedSpec"),
    ],
)
def test_input_errors_exit_2(capsys, argv, err):
    code, _, stderr = cli(capsys, *argv)
    assert code == 2 and err in stderr


def test_malformed_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = cli(capsys, "verify", "--input", bad)
    assert code == 2 and "not valid JSON" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["construct", "--type", "12"])
    assert exc.value.code == 2


def test_text_output(capsys):
    code, out, _ = cli(capsys, "verify", "--input", DATA / "type1_q2.json")
    assert code == 0 and "[ok] braid" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "heckesym", "count-classes", "--field", "Fp:7", "--p1", "2", "--p2", "2", "--p3", "2", "--q", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "4"
