import json
import subprocess
import sys

import pytest

from lattes_fsr import cli, fsr


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-degree", "2")
    assert code == 0
    assert out.strip().splitlines()[-1] == "3 matrices"


def test_enumerate_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--max-degree", "3", "--json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 8
    assert rows[0]["matrix"] == [0, -2, 1, 0]


def test_classes(capsys):
    code, out, _ = run(capsys, "classes", "--max-degree", "2", "--json")
    assert code == 0
    # one class each for sqrt(-2) and 1+i, two for (1+sqrt(-7))/2
    assert len(out.strip().splitlines()) == 4


def test_build_then_check(capsys, tmp_path):
    rule_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "build", "--matrix", "5,-3,2,4", "--beta", "0,0",
                       "--out", str(rule_path))
    assert code == 0 and "26 subtiles" in out
    code, out, _ = run(capsys, "check", str(rule_path))
    assert code == 0
    assert "mesh: true, valence: 3" in out


def test_build_quadratic_fails(capsys):
    code, _, err = run(capsys, "build", "--matrix", "0,-2,1,1", "--beta", "0,0")
    assert code == 2
    assert "c2" in err and "isotopy" in err


def test_exceptional_needs_template(capsys):
    code, _, err = run(capsys, "build", "--matrix", "2,-3,1,2")
    assert code == 2 and "template" in err


def test_bad_matrix(capsys):
    code, _, _ = run(capsys, "build", "--matrix", "5,-3,2")
    assert code == 3
    code, _, _ = run(capsys, "build", "--matrix", "1,0,1,1")
    assert code == 3


def test_check_cyclic_rule(capsys, tmp_path, strip_rule):
    path = tmp_path / "strip.json"
    path.write_text(strip_rule.to_json())
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1
    assert "mesh: false" in out and "cycle:" in out


def test_check_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "absent.json"))
    assert code == 3 and "cannot read" in err


def test_subdivide_and_prune(capsys, tmp_path):
    rule_path = tmp_path / "r.json"
    cx_path = tmp_path / "c.json"
    run(capsys, "build", "--template", "gosper_2m312", "--out", str(rule_path),
        "--complex-out", str(cx_path))
    code, out, _ = run(capsys, "subdivide", str(rule_path), "--level", "2")
    assert code == 0 and "F=49" in out and "euler=2" in out
    code, out, _ = run(capsys, "prune", str(cx_path))
    assert code == 0 and "tree type: 5" in out


def test_prune_not_a_tree(capsys, tmp_path, quadratic_rule):
    cx_path = tmp_path / "q.json"
    cx_path.write_text(fsr.sphere_complex(quadratic_rule).to_json())
    code, _, err = run(capsys, "prune", str(cx_path))
    assert code == 1 and "cycle" in err


def test_render(capsys, tmp_path):
    svg = tmp_path / "g.svg"
    code, _, _ = run(capsys, "render", "--template", "gosper_2m312", "--svg", str(svg))
    assert code == 0 and svg.read_text().count('class="tile"') == 7


def test_verify_quadratic(capsys):
    code, out, _ = run(capsys, "verify-quadratic")
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["enumerate"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lattes_fsr", "enumerate", "--max-degree", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "3 matrices" in proc.stdout
