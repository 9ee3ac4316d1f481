import json
import subprocess
import sys

import pytest

from pizza.cli import UsageError, parse_method, parse_number, run
from pizza.field import make_field


def _run(*argv):
    code, report = run(list(argv))
    return code, report


def test_verify_a1_squared_reports_closed_form():
    code, rep = _run("--no-timings", "verify", "--type", "A1^2", "--a", "0.2,0.1", "--shape", "box:c=1",
                     "--method", "exact")
    assert code == 0
    assert rep["results"]["value"]["exact"] == "2/25"
    assert rep["schema"] == 1 and set(rep) == {"schema", "config_echo", "results", "verdicts"}


def test_verify_mc_ball():
    code, rep = _run("verify", "--type", "I2(8)", "--a", "0.3,0.1", "--shape", "ball:r=1", "--method",
                     "mc:n=1e6,seed=1")
    assert code == 0 and rep["verdicts"]["identity"]
    assert "timings" in rep


def test_twostruct_lists_three():
    code, rep = _run("twostruct", "--type", "B3", "--epsilon")
    assert code == 0 and rep["results"]["count"] == 3
    assert sorted(r["epsilon"] for r in rep["results"]["structures"])[-1] == 1


def test_group_stats():
    code, rep = _run("group", "--type", "B3", "--stats", "--chambers")
    res = rep["results"]
    assert code == 0 and res["order"] == 48 and res["reflections"] == 9 and res["has_minus_id"]
    assert len(res["chambers"]) == 48


@pytest.mark.parametrize("argv", [
    ["verify", "--type", "Q7", "--a", "0.1", "--shape", "ball:r=1"],
    ["verify", "--type", "B2", "--a", "0.1", "--shape", "ball:r=1"],
    ["verify", "--type", "B2", "--a", "0.1,0.1", "--shape", "ball:r=1", "--method", "mc:n=100"],
    ["verify", "--type", "B2", "--a", "0.1,0.1", "--shape", "ball:r=1", "--method", "exact"],
    ["verify", "--type", "B2", "--a", "5,5", "--shape", "orbit:p=2,1/2"],
    ["verify", "--type", "B2", "--a", "0.1,0.1", "--shape", "blob:3"],
    ["verify", "--type", "B2", "--a", "sqrt7,0", "--shape", "ball:r=1"],
    ["shares", "--m", "3", "--r", "0", "--a", "0.2,0.1", "--method", "mc:n=1000,seed=1"],
    ["nonsense"],
])
def test_usage_errors_exit_2(argv):
    code, _ = _run(*argv)
    assert code == 2


def test_resource_cap_exit_3():
    code, rep = _run("group", "--type", "A1^17")
    assert code == 3 and "error" in rep["results"]


def test_violation_exit_1(tmp_path):
    # the stated Q-chain law fails at even steps, which the checks report as a violation
    code, rep = _run("dissect", "dihedral", "--m", "3", "--a", "0.3,0.2", "--checks")
    assert code == 1
    assert rep["verdicts"]["outer"] and rep["verdicts"]["frederickson"] and rep["verdicts"]["implied_sum"]
    assert rep["verdicts"]["angles"] and not rep["verdicts"]["q_chain"]


def test_dissect_then_cert_verify(tmp_path):
    out, svg = tmp_path / "c.json", tmp_path / "c.svg"
    code, rep = _run("dissect", "dihedral", "--m", "2", "--a", "0.3,0.2", "--out", str(out), "--svg", str(svg))
    assert code == 0
    assert svg.read_text().startswith("<?xml") and "<polygon" in svg.read_text()
    code, rep = _run("cert", "verify", str(out))
    assert code == 0 and len(rep["results"]["certificates"]) == 2
    # tamper with one coordinate: the verifier must notice
    data = json.loads(out.read_text())
    q = data["certificates"][0]["pairings"][0]["isometry"]
    q["translation"][0]["coeffs"][0] = "1/3"
    out.write_text(json.dumps(data))
    code, rep = _run("cert", "verify", str(out))
    assert code == 1


def test_bg_commands(tmp_path):
    code, rep = _run("bg", "rect", "--from", "8x3", "--to-width", "6")
    assert code == 0 and rep["results"]["pieces"] == 3 and rep["verdicts"]["translation_only"]
    v = tmp_path / "v.json"
    v.write_text("[[0,0],[4,0],[5,2],[2,4],[-1,2]]")
    code, rep = _run("bg", "polygon", "--vertices", str(v))
    assert code == 0 and rep["results"]["area"]["exact"] == "16"
    k = tmp_path / "k.json"
    k.write_text(json.dumps({"dim": 2, "x": [{"lows": [0, 0], "highs": [1, 6], "closed": False}],
                             "y": [{"lows": [0, 0], "highs": [2, 3], "closed": False}]}))
    code, rep = _run("bg", "kz", "--items", str(k))
    assert code == 0 and rep["results"]["x==y"] is True


def test_determinism(tmp_path):
    argv = ["verify", "--type", "B2", "--a", "0.3,0.1", "--shape", "ball:r=1", "--method", "mc:n=2e5,seed=9"]
    reports = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        run(["--no-timings", "--report", str(path)] + argv)
        reports.append(path.read_bytes())
    assert reports[0] == reports[1]


def test_number_parsing():
    F = make_field(12)
    assert parse_number("sqrt2/2", F) * parse_number("sqrt2/2", F) == F(1) / 2
    assert parse_number("3*sqrt3/4", F) ** 2 == F(27) / 16
    assert parse_number("-1/4", F) == F(-1) / 4
    with pytest.raises(UsageError):
        parse_number("sqrt5", F)
    with pytest.raises(UsageError):
        parse_number("abc", F)
    assert parse_method("mc:n=1e7,seed=42") == {"method": "mc", "n": 10**7, "seed": 42}


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "pizza.cli", "--no-timings", "bg", "rect", "--from", "9x1",
                          "--to-width", "3"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["verdicts"]["certificate"]
