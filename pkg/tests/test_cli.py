"""Command-line interface: exit codes, the text/JSON split, and file inputs."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from symcone.cli import SENTINEL, main
from symcone.documents import certificate_from_doc, parse_class
from symcone.models import build_kk_model, builtin_model
from symcone.moves import verify_certificate

OMEGA0_22 = ",".join(["1"] + ["0"] * 21)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def trailer(out):
    lines = out.splitlines()
    cut = len(lines) - 1 - lines[::-1].index(SENTINEL)
    return json.loads("\n".join(lines[cut + 1 :]))


def test_classify_corner(capsys):
    code, out = run(capsys, "classify", "--model", "kk-extended", "--class", OMEGA0_22)
    assert code == 0
    payload = trailer(out)
    assert payload["membership"] == "corner"
    assert len(payload["vanishing"]) == 21
    assert payload["admissible"] is False
    assert payload["pairings"]["C1"] == "0"


def test_classify_rejects_floats_and_short_classes(capsys):
    code, out = run(capsys, "classify", "--model", "e6",
                    "--class", "1.5,0,0,0,0,0,0")
    assert code == 2
    assert "error" in trailer(out)
    code, out = run(capsys, "classify", "--model", "e6", "--class", "1,0")
    assert code == 2
    code, out = run(capsys, "classify", "--model", "e6",
                    "--class", ",".join(["0"] * 7))
    assert code == 2


def test_classify_unknown_model(capsys):
    code, out = run(capsys, "classify", "--model", "kk-gamma7", "--class", "1")
    assert code == 2
    assert "unknown model" in trailer(out)["error"]


def test_plan_emits_replayable_certificate(capsys):
    code, out = run(capsys, "plan", "--model", "kk-gamma0", "--class", OMEGA0_22)
    assert code == 0
    assert "certificate verified: PASS" in out
    doc = trailer(out)
    assert doc["model"] == "kk-gamma0"
    cert = certificate_from_doc(doc)
    assert verify_certificate(cert).passed
    assert len(cert.moves) == 7


def test_plan_unsupported_emits_witness(capsys):
    code, out = run(capsys, "plan", "--model", "kk-extended", "--class", OMEGA0_22)
    assert code == 3
    doc = trailer(out)
    assert doc["witness"]["coefficients"] == [1] * 21
    assert doc["witness"]["square"] == "33"
    assert "witness" in out.splitlines()[1]


def test_verify_round_trip_and_tamper(capsys, tmp_path):
    code, out = run(capsys, "example", "kk-gamma0", "--certificate")
    assert code == 0
    captured = tmp_path / "cert.txt"
    captured.write_text(out, encoding="utf-8")
    # captured report: everything after the last sentinel is the document
    code, out = run(capsys, "verify", str(captured))
    assert code == 0
    assert trailer(out)["passed"] is True

    doc = trailer(captured.read_text(encoding="utf-8"))
    doc["moves"][5]["t"] = "100"
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(doc), encoding="utf-8")
    code, out = run(capsys, "verify", str(tampered))
    assert code == 1
    payload = trailer(out)
    assert payload["passed"] is False
    assert "bound 2A/h violated" in payload["first_failure"]

    truncated = tmp_path / "broken.json"
    truncated.write_text(json.dumps(doc)[:80], encoding="utf-8")
    code, out = run(capsys, "verify", str(truncated))
    assert code == 2


def test_pair_sums(capsys):
    ones_c = ",".join(["1"] * 9 + ["0"] * 12)
    ones_d = ",".join(["0"] * 9 + ["1"] * 12)
    code, out = run(capsys, "pair", "--model", "kk",
                    "--left", ones_c, "--right", ones_d)
    assert code == 0
    payload = trailer(out)
    assert payload["pairing"] == "36"
    assert payload["left_square"] == "-27"
    assert payload["right_square"] == "-12"


def test_reflect_along_curve(capsys):
    code, out = run(capsys, "reflect", "--model", "e6",
                    "--class", "1,1,0,0,0,0,0", "--curve", "e1")
    assert code == 0
    payload = trailer(out)
    assert payload["reflected"] == ["1", "-1", "0", "0", "0", "0", "0"]
    assert payload["square"] == "98"


def test_reflect_zero_square_axis(capsys, tmp_path):
    code, out = run(capsys, "example", "ruled",
                    "--genus", "0", "--k", "1", "--parity", "nontrivial")
    assert code == 0
    model_file = tmp_path / "ruled.txt"
    model_file.write_text(out, encoding="utf-8")
    code, out = run(capsys, "reflect", "--model", str(model_file),
                    "--class", "3,-1", "--axis", "1,1")
    assert code == 2
    assert "error" in trailer(out)


def test_corner_with_chamber(capsys):
    alpha = ",".join(["1"] + ["7/3"] * 9 + ["4"] * 12)
    code, out = run(capsys, "corner", "--model", "kk-extended",
                    "--class", alpha, "--curves", "C1,D123", "--epsilon", "1/7")
    assert code == 0
    payload = trailer(out)
    model = builtin_model("kk-extended")
    lat = model.lattice
    corner = parse_class(payload["corner"], 22, "corner")
    chamber = parse_class(payload["chamber"], 22, "chamber")
    for label in ("C1", "D123"):
        assert lat.pair(corner, model.curve(label).vector) == 0
        assert lat.pair(chamber, model.curve(label).vector) == -Fraction(1, 7)


def test_dynkin_components(capsys):
    code, out = run(capsys, "dynkin", "--model", "e6")
    assert code == 0
    payload = trailer(out)
    assert payload["overall"] == "E6"
    assert len(payload["components"]) == 1
    code, out = run(capsys, "dynkin", "--model", "e6", "--curves", "e1,e2")
    assert trailer(out)["overall"] == "A2"


def test_example_ruled_needs_flags(capsys):
    code, out = run(capsys, "example", "ruled")
    assert code == 2
    assert "needs --genus" in trailer(out)["error"]


def test_example_certificate_scale_out_of_range(capsys):
    code, out = run(capsys, "example", "kk-gamma0", "--certificate",
                    "--t-scale", "10")
    assert code == 2


def test_example_output_is_deterministic(capsys):
    _, first = run(capsys, "example", "kk")
    _, second = run(capsys, "example", "kk")
    assert first == second


def test_perturb_tables_and_study(capsys):
    code, out = run(capsys, "perturb", "--model-spec", "1,2,0.1",
                    "--eps", "0.1", "--eps", "0.05")
    assert code == 0
    payload = trailer(out)
    assert "slopes" not in payload
    assert len(payload["records"][repr(0.1)]) == 2

    code, out = run(capsys, "perturb", "--model-spec", "1,1,0.01",
                    "--eps", "0.1", "--eps", "0.05", "--eps", "0.02",
                    "--eps", "0.01")
    assert code == 0
    slopes = trailer(out)["slopes"]
    assert len(slopes) == 1
    assert abs(slopes[0]["slope"] - 4.0) < 0.3


def test_perturb_out_of_range_eps(capsys):
    code, out = run(capsys, "perturb", "--model-spec", "1,1,0.01", "--eps", "10")
    assert code == 2
    assert "not inside" in trailer(out)["error"]


def test_perturb_needs_models(capsys):
    code, out = run(capsys, "perturb", "--eps", "0.1")
    assert code == 2


def test_help_and_bad_subcommand(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()
    assert main(["example", "nonsense"]) == 2
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "symcone", "example", "kk"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert SENTINEL in proc.stdout
