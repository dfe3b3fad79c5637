import json
from pathlib import Path

import pytest

from cat2alg.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_check_2group_valid(capsys):
    code, rep = run_json(capsys, "check-2group", SAMPLES / "z2_nontrivial.json")
    assert code == 0 and rep["ok"]
    assert rep["values"]["i_x"] == [[0], [1]]


def test_check_2group_invalid(capsys):
    code, rep = run_json(capsys, "check-2group", SAMPLES / "z3_bad_alpha.json")
    assert code == 1
    assert [1, 1, 1, 1] in rep["checks"][0]["witness"]


def test_hochschild_m2(capsys):
    code, rep = run_json(capsys, "hochschild", SAMPLES / "m2.json")
    assert code == 0
    assert rep["values"]["hh0"] == 1 and rep["values"]["hh1"] == 0


def test_broken_l2_has_witness(capsys):
    code, rep = run_json(capsys, "check-l2", SAMPLES / "broken.json")
    assert code == 1
    failed = {c["name"]: c for c in rep["checks"] if not c["ok"]}
    assert "I1" in failed and failed["I1"]["witness"]


def test_unknown_subcommand(capsys):
    assert main(["bogus"]) == 2
    assert "invalid choice" in capsys.readouterr().err


def test_missing_file(capsys):
    code, rep = run_json(capsys, "check-2group", SAMPLES / "does_not_exist.json")
    assert code == 2 and rep["error"] == "InputError"


def test_unsupported_ring(capsys):
    f = SAMPLES / "complex_z4.json"
    code, rep = run_json(capsys, "tensor-flat", f, f)
    assert code == 2 and rep["error"] == "UnsupportedError"


def test_reports_are_deterministic(capsys):
    a = run(capsys, "perturb", SAMPLES / "b2_ideal.json", "--seed", 3)
    b = run(capsys, "perturb", SAMPLES / "b2_ideal.json", "--seed", 3)
    assert a == b and a[0] == 0


def test_pretty_matches_json(capsys):
    _, rep = run_json(capsys, "hochschild", SAMPLES / "trunc3.json")
    _, text = run(capsys, "hochschild", SAMPLES / "trunc3.json", "--pretty")
    assert "verdict: PASS" in text
    for k, v in rep["values"].items():
        assert f"{k} = {json.dumps(v)}" in text


@pytest.mark.parametrize("argv", [
    ["tricomm", "s3_twisted.json", "--triple", "1", "3", "4"],
    ["kernel-2group", "kernel_z4.json"],
    ["pi", "complex_z4.json"],
    ["hom-flat", "complex_q_K.json", "complex_q_L.json"],
    ["tensor-flat", "complex_q_K.json", "complex_q_L.json"],
    ["check-l2", "sl2_string.json"],
    ["skewsym", "pseudo_b2.json"],
    ["perturb", "perturb_b2.json"],
    ["pi-map", "pi_map_dual.json"],
    ["baer", "baer_dual.json"],
    ["goodness", "goodness_dual.json", "--cases", "3"],
    ["dual-comm", "dual_comm_trunc3.json"],
])
def test_samples_pass(capsys, argv):
    args = [a if not a.endswith(".json") else SAMPLES / a for a in argv]
    code, rep = run_json(capsys, *args)
    assert code == 0 and rep["ok"], rep


def test_pi_values(capsys):
    _, rep = run_json(capsys, "pi", SAMPLES / "complex_z4.json")
    assert rep["values"]["pi0"]["invariant_factors"] == [2]
    assert rep["values"]["pi1"]["invariant_factors"] == [2]


def test_baer_values(capsys):
    _, rep = run_json(capsys, "baer", SAMPLES / "baer_dual.json")
    assert rep["values"]["class_sum"] == [3]
