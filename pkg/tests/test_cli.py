import json
import subprocess
import sys

import pytest

from recurcommon.cli import main

from conftest import pow2, trib_backward, trib_forward, tribonacci, x2p4


@pytest.fixture
def specs(tmp_path):
    out = {}
    for name, spec in [("pow2", pow2()), ("x2p4", x2p4()), ("fwd", trib_forward()),
                       ("back", trib_backward()), ("trib", tribonacci())]:
        path = tmp_path / f"{name}.json"
        path.write_text(spec.to_json())
        out[name] = str(path)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze(capsys, specs):
    code, out, _ = run(capsys, "analyze", specs["trib"])
    report = json.loads(out)
    assert code == 0 and report["classification"] == "RealDominant"
    assert report["binet"]["dominant_coefficient_nonzero"]
    code, out, _ = run(capsys, "analyze", specs["x2p4"])
    assert json.loads(out)["classification"] == "ComplexPairDominant"


def test_malformed_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out, err = run(capsys, "analyze", str(bad))
    assert code == 2 and out == "" and "bad.json" in err


def test_invalid_spec(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"coeffs_p0_first": ["0"], "initial_terms": ["1"]}))
    assert run(capsys, "analyze", str(bad))[0] == 2


def test_certify_exit_codes(capsys, specs, tmp_path):
    out_path = tmp_path / "cert.json"
    assert run(capsys, "certify", specs["fwd"], specs["back"], "--out", str(out_path))[0] == 0
    assert json.loads(out_path.read_text())["dependence_witness"]["delta"] == "2"

    code, out, err = run(capsys, "certify", specs["pow2"], specs["x2p4"])
    assert code == 1 and json.loads(out)["hypothesis"] == "beta2_over_beta1_not_root_of_unity"

    other = tmp_path / "x2mxp3.json"
    other.write_text(json.dumps({"coeffs_p0_first": ["-3", "1"], "initial_terms": ["2", "1"]}))
    code, out, err = run(capsys, "certify", specs["pow2"], str(other))
    assert code == 3 and "dependence not found up to bound" in err


def test_certify_is_byte_identical(capsys, specs, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        run(capsys, "certify", specs["fwd"], specs["back"], "--out", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_search(capsys, specs):
    code, out, _ = run(capsys, "search", specs["pow2"], specs["x2p4"], "--rangeA", "20", "--rangeB", "20")
    report = json.loads(out)
    assert code == 0 and report["count"] == 5
    assert [(h["n"], h["m"]) for h in report["hits"]] == [(4 * k + 1, 4 * k) for k in range(5)]


def test_search_negative_needs_unit_constant(capsys, specs):
    code, _, err = run(capsys, "search", specs["pow2"], specs["x2p4"], "--rangeA", "5",
                       "--rangeB", "5", "--negative")
    assert code == 2


def test_self(capsys, specs):
    code, out, _ = run(capsys, "self", specs["trib"], "--N", "8")
    groups = {g["value"]: g["indices"] for g in json.loads(out)["value_groups"]}
    assert groups == {"0": [-4, -1, 0], "1": [-7, -2, 1, 2], "2": [-5, 3], "4": [-8, 4]}


def test_family(capsys, tmp_path):
    stem = tmp_path / "pair"
    code, out, _ = run(capsys, "family", "case-ii", "--a", "1", "--b", "-1", "--out", str(stem))
    assert code == 0
    assert (tmp_path / "pair_A.json").exists() and (tmp_path / "pair_B.json").exists()
    code, out, _ = run(capsys, "family", "case-i", "--a", "0", "--b", "2", "--q", "2")
    assert code == 1 and "root of unity" in json.loads(out)["clause"]
    code, out, _ = run(capsys, "family", "bravo", "--a", "1", "--b", "1")
    assert code == 0 and json.loads(out)["B"]["coeffs_p0_first"] == ["1", "-1", "-1"]


def test_verify(capsys, specs, tmp_path):
    cert = tmp_path / "cert.json"
    run(capsys, "certify", specs["fwd"], specs["back"], "--out", str(cert))
    code, out, _ = run(capsys, "verify", str(cert), "--rangeA", "30", "--rangeB", "30", "--audit", "60")
    report = json.loads(out)
    assert code == 0 and report["failures_explained"]
    assert report["ledger_audit"]["growth_A"]["violations"] == []


def test_bad_flags(capsys, specs):
    assert run(capsys, "self", specs["trib"], "--N", "-1")[0] == 2
    assert run(capsys, "analyze", specs["trib"], "--precision-bits", "8")[0] == 2
    assert run(capsys, "analyze", specs["trib"], "--precision-bits", "100000")[0] == 2


def test_precision_ceiling_env(tmp_path):
    # roots 10^30 +- 1 cannot be separated within a 64-bit ceiling
    spec = tmp_path / "close.json"
    spec.write_text(json.dumps({"coeffs_p0_first": [str(1 - 10 ** 60), str(2 * 10 ** 30)],
                                "initial_terms": ["0", "1"]}))
    cmd = [sys.executable, "-m", "recurcommon.cli", "analyze", str(spec), "--precision-bits", "64"]
    low = subprocess.run(cmd, capture_output=True, text=True,
                         env={"RECUR_COMMON_PRECISION_CEILING": "64"})
    assert low.returncode == 3 and "undecided" in low.stderr
    assert subprocess.run(cmd, capture_output=True, text=True).returncode == 0


def test_console_entry_point_help():
    proc = subprocess.run([sys.executable, "-m", "recurcommon.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("analyze", "certify", "family", "search", "self", "verify"):
        assert sub in proc.stdout
