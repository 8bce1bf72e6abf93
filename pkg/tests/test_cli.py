import json
import subprocess
import sys

import pytest

from zassenhaus.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_ppow_d0(capsys):
    code, out = run_cli(capsys, "ppow", "1*x^(1)*D", "1", "--p", "5", "--n", "2")
    assert code == EXIT_OK
    report = json.loads(out.out)
    assert report["schema"] == 1
    assert report["result"]["result"]["text"] == "1*x^(1)*D"
    assert report["config"] == {"p": 5, "n": 2, "m": 2, "seed": 0}


def test_bracket_text(capsys):
    code, out = run_cli(capsys, "bracket", "1*D^p^0", "1*x^(3)*D", "--report", "text")
    assert code == EXIT_OK and out.out.strip() == "result: 1*x^(2)*D"


def test_jacobson(capsys):
    code, out = run_cli(capsys, "jacobson", "1*x^(3)*D + 2*D^p^1", "1*D^p^0 + 3*x^(7)*D")
    assert code == EXIT_OK and json.loads(out.out)["result"]["holds"] is True


def test_reduce_and_classify(capsys):
    code, out = run_cli(capsys, "reduce", "1*D^p^1 + 1*x^(1)*D", "--m", "1")
    cert = json.loads(out.out)["result"]["certificate"]
    assert code == EXIT_OK and cert["steps"][0]["degree"] == 1
    code, out = run_cli(capsys, "classify", "1*D^p^0", "--report", "text")
    assert "verdict: Regular" in out.out
    code, out = run_cli(capsys, "reduce", "1*D^p^1 + 1*D^p^0 + 1*x^(23)*D", "--m", "1")
    result = json.loads(out.out)["result"]
    assert result["tail_form"]["text"].startswith("1*x^(0)*D")
    assert "x^(23)" not in result["tail_form"]["text"]


def test_centralizer(capsys):
    code, out = run_cli(capsys, "centralizer", "1*D^p^1", "--ambient", "lp")
    assert json.loads(out.out)["result"]["dimension"] == 6
    code, out = run_cli(capsys, "centralizer", "1*D^p^0 + 2*D^p^1", "--ambient", "l")
    assert json.loads(out.out)["result"]["dimension"] == 1


def test_spectral_commands(capsys):
    code, out = run_cli(capsys, "sigma")
    res = json.loads(out.out)["result"]
    assert code == EXIT_OK and res["multiplicities"]["23"] == 2 and res["automorphism"]
    code, out = run_cli(capsys, "ebasis")
    assert json.loads(out.out)["result"]["valid"] is True
    code, out = run_cli(capsys, "lieg")
    res = json.loads(out.out)["result"]
    assert res["size"] == 23 and 4 not in res["indices"] and res["tangent"]


def test_usage_errors(capsys):
    assert run_cli(capsys, "ppow", "nonsense", "1")[0] == EXIT_USAGE
    assert run_cli(capsys, "ppow", "1*x^(1)*D", "1", "--p", "3")[0] == EXIT_USAGE
    assert run_cli(capsys, "ebasis", "--m", "1")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["verify", "no-such-suite"])
    assert exc.value.code == 2


def test_verify_exit_codes(capsys):
    code, out = run_cli(capsys, "verify", "lieg-basis", "tangent")
    assert code == EXIT_OK and json.loads(out.out)["status"] == "pass"
    code, out = run_cli(capsys, "verify", "eq21", "--report", "text")
    assert code == EXIT_VIOLATION and "eq21: FAIL" in out.out


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("ZASSENHAUS_P", "7")
    code, out = run_cli(capsys, "lieg")
    assert json.loads(out.out)["result"]["size"] == 47


def test_reports_are_byte_identical():
    cmd = [sys.executable, "-m", "zassenhaus", "verify", "jacobson", "centralizer",
           "--samples", "5", "--seed", "3"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and b'"seed": 3' in first


def test_parallel_matches_serial(capsys):
    argv = ["verify", "lieg-basis", "centralizer", "tangent", "--samples", "3"]
    _, serial = run_cli(capsys, *argv)
    _, parallel = run_cli(capsys, *argv, "--jobs", "2")
    assert serial.out == parallel.out
