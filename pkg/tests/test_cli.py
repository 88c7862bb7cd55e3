import io
import json
import random
from pathlib import Path

import pytest

from helpers import random_form
from relulrich.cli import run

GOLDEN = Path(__file__).parent / "golden"
P2 = '{"kind":"P","N":2}'


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_ulrich_example_writes_rank4_certificate(tmp_path):
    path = tmp_path / "cert.json"
    code, text, _ = call("ulrich", "--base", P2, "--n", "1", "--d", "2",
                         "--branch", "x0^2 + x1*x2", "--out", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["format_version"] == "1" and data["rank"] == 4
    assert data["root"]["size"] == 8
    assert "VERIFIED: rank 4" in text


def test_golden_reports(tmp_path):
    path = tmp_path / "cert.json"
    code, text, _ = call("ulrich", "--base", P2, "--n", "1", "--d", "2",
                         "--branch", "x0^2 + x1*x2", "--out", str(path))
    assert text == (GOLDEN / "ulrich_quadric.txt").read_text()
    assert path.read_text() == (GOLDEN / "ulrich_quadric.json").read_text()
    _, text, _ = call("feasibility", "--genus-base", "1", "--d", "2", "--m-deg", "1")
    assert text == (GOLDEN / "feasibility_nonexistence.txt").read_text()


@pytest.mark.parametrize("argv", [
    ("ulrich", "--base", P2, "--n", "1", "--d", "3", "--branch", "x0^3 + x1^2*x2"),
    ("verify-root", str(GOLDEN / "ulrich_quadric.json"), "--det-samples", "7"),
    ("cover-info", "--spec", '{"stages":[{"d":2,"m_deg":1},{"d":3,"m_deg":2}]}', "--terms", "2,1"),
    ("elliptic-demo", "--A", "-2", "--B", "3"),
])
def test_byte_identical_reruns(argv):
    assert call(*argv) == call(*argv)
    assert call("--seed", "4", *argv) == call("--seed", "4", *argv)


def test_feasibility_exit_codes():
    assert call("feasibility", "--genus-base", "1", "--d", "2", "--m-deg", "1")[0] == 3
    assert call("feasibility", "--genus-base", "2", "--d", "3", "--etale")[0] == 3
    code, text, _ = call("feasibility", "--genus-base", "0", "--d", "2", "--m-deg", "2")
    assert code == 0 and text.startswith("Feasible")


def test_feasibility_json(tmp_path):
    path = tmp_path / "f.json"
    call("feasibility", "--genus-base", "2", "--d", "3", "--etale", "--out", str(path))
    assert json.loads(path.read_text())["verdict"] == "InfeasibleEtale"


@pytest.mark.parametrize("argv", [
    (),
    ("bogus",),
    ("feasibility", "--d", "2"),
    ("feasibility", "--genus-base", "1", "--d", "2", "--m-deg", "1", "--etale"),
    ("ulrich", "--base", P2, "--n", "1", "--d", "2", "--branch", "x0^2 +"),
    ("ulrich", "--base", P2, "--n", "1", "--d", "2", "--branch", "x0^3"),
    ("verify-root", "/nonexistent/root.json"),
    ("cover-info", "--spec", '{"stages":[]}'),
])
def test_usage_errors_exit_1(argv):
    assert call(*argv)[0] == 1


def test_elliptic_branch_not_in_image():
    base = '{"kind":"elliptic","A":-1,"B":1}'
    code, text, _ = call("ulrich", "--base", base, "--n", "2", "--d", "2", "--branch", "y")
    assert code == 3
    assert "NotInImage" in text
    code, _, _ = call("decompose", "--base", base, "--n", "2", "--d", "2", "--branch", "x^2 - 3")
    assert code == 0


def test_decompose_then_build_root(tmp_path):
    dec = tmp_path / "dec.json"
    root = tmp_path / "root.json"
    assert call("decompose", "--base", P2, "--n", "1", "--d", "2", "--branch",
                "x0^2 - x1*x2 + 3*x2^2", "--out", str(dec))[0] == 0
    assert call("build-root", "--cert", str(dec), "--out", str(root))[0] == 0
    code, text, _ = call("verify-root", str(root))
    assert code == 0 and text.startswith("PASS")


def test_round_trip_random_branches(tmp_path):
    rng = random.Random(99)
    for k in range(20):
        s = random_form(rng, 3, 2, lo=-9, hi=9, nonzero=rng.random() < 0.7)
        if not s:
            continue
        path = tmp_path / f"c{k}.json"
        code, _, _ = call("ulrich", "--base", P2, "--n", "1", "--d", "2", "--branch", str(s),
                          "--out", str(path))
        assert code == 0, str(s)
        assert call("verify-root", str(path))[0] == 0


def test_corrupted_root_reports_position(tmp_path):
    path = tmp_path / "cert.json"
    call("ulrich", "--base", P2, "--n", "1", "--d", "2", "--branch", "x0^2 + x1*x2 - x2^2",
         "--out", str(path))
    data = json.loads(path.read_text())
    entries = data["root"]["entries"]
    entries[5][2] = entries[5][2] + " + x1" if entries[5][2] != "0" else "x1"
    path.write_text(json.dumps(data))
    code, text, _ = call("verify-root", str(path))
    assert code == 2
    assert "(5, 2)" in text


def test_shape_and_identity_violations_exit_2(tmp_path):
    weird = {"format_version": "1", "d": 1, "size": 1, "n": 1, "field_order": 1, "num_vars": 2,
             "construction": "external", "term_count": 0, "entries": [["x0*T"]],
             "target": "x0*T"}
    path = tmp_path / "w.json"
    path.write_text(json.dumps(weird))
    code, text, _ = call("verify-root", str(path))
    assert code == 2 and "not alpha*T + g" in text
    weird["target"] = "x1*T"
    path.write_text(json.dumps(weird))
    assert call("verify-root", str(path))[0] == 2
