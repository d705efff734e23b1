import json
import subprocess
import sys

import pytest

from hermcurve.cli import CHECK_ANCHORS, SCHEMA_VERSION, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_json_report(capsys):
    code, out, _ = run(capsys, "verify", "--family", "ex53", "--q", "3", "--checks", "lemma45,lemma41,containment")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema_version"] == SCHEMA_VERSION
    assert rep["instance"]["family"] == "ex53" and rep["instance"]["q"] == 3 and rep["instance"]["i"] == 1
    assert rep["instance"]["field_modulus"] == "3 2 1 0 1"
    assert [c["name"] for c in rep["checks"]] == ["lemma45", "lemma41", "containment"]
    for c in rep["checks"]:
        assert c["status"] == "pass"
        assert c["anchor"] == CHECK_ANCHORS[c["name"]]
    assert rep["seed"] == 0 and rep["truncation"]["initial"] == 10
    assert "timings" not in rep


def test_reports_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify", "--family", "ex54", "--q", "4", "--checks", "lemma45,osculating", "--seed", "7",
                     "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_seed_changes_the_sample(capsys):
    outs = []
    for seed in ("1", "2"):
        _, out, _ = run(capsys, "verify", "--family", "ex53", "--q", "3", "--checks", "lemma45", "--seed", seed)
        outs.append(json.loads(out)["checks"][0]["payload"]["branches"])
    assert outs[0] != outs[1]


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify", "--family", "ex55", "--q", "3", "--i", "2", "--checks", "rationality",
                       "--format", "text")
    assert code == 0
    assert out.startswith("verify ex55 q=3 i=2")
    assert "pass" in out and "rationality" in out


def test_failed_check_exits_1(capsys):
    code, out, _ = run(capsys, "verify", "--family", "ex52", "--q", "5", "--checks", "maximality")
    assert code == 1
    assert json.loads(out)["checks"][0]["status"] == "fail"


def test_inconclusive_check_exits_1(capsys):
    code, out, _ = run(capsys, "verify", "--family", "ex54", "--q", "2", "--checks", "lemma42")
    assert code == 1
    assert json.loads(out)["checks"][0]["status"] == "inconclusive"


@pytest.mark.parametrize("argv", [
    ["verify", "--family", "ex53", "--q", "4"],
    ["verify", "--family", "ex54", "--q", "3"],
    ["verify", "--family", "ex53", "--q", "3", "--i", "0"],
    ["verify", "--family", "ex53", "--q", "3", "--checks", "nonsense"],
    ["verify", "--family", "ex77", "--q", "3"],
    ["verify", "--q", "3"],
    ["frobnicate"],
    ["verify", "--family", "ex53", "--q", "3", "--sample", "0"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == "" and "usage error" in err


def test_cap_exits_3(capsys, monkeypatch):
    monkeypatch.setenv("HERMCURVE_CAP", "10")
    code, _, err = run(capsys, "verify", "--family", "ex53", "--q", "3", "--checks", "rationality")
    assert code == 3
    assert "cap" in err


def test_dualform_command(capsys):
    code, out, _ = run(capsys, "dualform", "--family", "ex53", "--q", "3")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["hermitian"] and res["rank"] == 4 and res["dimension"] == 1
    assert res["diagonalizes_to_identity"] and res["canonical_containment"]
    assert res["proportional_to_family_form"]
    assert len(res["C"]) == 4 and len(res["A"]) == 4


def test_dualform_reports_non_hermitian_solution(capsys):
    code, out, _ = run(capsys, "dualform", "--family", "ex52", "--q", "5", "--format", "text")
    assert code == 1
    assert "hermitian: False" in out


def test_truncation_flag_and_retry(capsys):
    # T = 2 is too short for v = q + 1 at rational points; retries double it
    code, out, _ = run(capsys, "verify", "--family", "ex53", "--q", "3", "--checks", "lemma41", "--truncation", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["truncation"]["initial"] == 2
    assert rep["truncation"]["max_used"] >= 5


def test_timings_are_opt_in(capsys):
    _, out, _ = run(capsys, "verify", "--family", "ex53", "--q", "3", "--checks", "containment", "--timings")
    assert "containment" in json.loads(out)["timings"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hermcurve.cli", "verify", "--family", "ex53", "--q", "3",
                           "--checks", "containment", "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "containment" in proc.stdout
