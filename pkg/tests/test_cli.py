import os
import subprocess
import sys
from pathlib import Path

import pytest

from hilbertmf.cli import run

GOLDEN = Path(__file__).parent / "golden"

# name -> argv; outputs are stored verbatim under tests/golden/<name>.txt
CASES = {
    "classgroup-5": ["classgroup", "5"],
    "classgroup-10": ["classgroup", "10"],
    "field-info-13": ["field", "info", "13"],
    "cusps-5-level2": ["cusps", "classify", "5", "--level", "4.2", "--cusps", "0,1,inf,w,1-w"],
    "efg-11-q5": ["galois", "efg", "11", "--quadratic", "5"],
    "frob-2-5": ["galois", "frob", "2", "5"],
    "localfactor-3-mod4": ["galois", "localfactor", "3", "--character", "4:3=1/2"],
    "eisenstein-5": ["--precision", "53", "--radius", "4", "eisenstein", "eval", "5", "--point", "0.1+1i,0.2+0.9i"],
}


def capture(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    code, out, _ = capture(CASES[name], capsys)
    assert code == 0
    assert out == (GOLDEN / f"{name}.txt").read_text()


def test_classgroup(capsys):
    _, out, _ = capture(["classgroup", "5"], capsys)
    assert "h = 1" in out.splitlines()


def test_cusps_classify(capsys):
    _, out, _ = capture(CASES["cusps-5-level2"], capsys)
    assert out.splitlines()[-1] == "5 classes"


def test_cusps_from_file(tmp_path, capsys):
    f = tmp_path / "cusps.txt"
    f.write_text("0\n1\ninf\nw\n1-w\n1/2\n")
    _, out, _ = capture(["cusps", "classify", "5", "--level", "4.2", "--cusps", str(f)], capsys)
    assert out.splitlines()[-1] == "5 classes"


def test_compat_identical_files(tmp_path, capsys):
    exp = tmp_path / "f.exp"
    assert run(["hecke", "expand", "11", "2", "--upto", "100", "-o", str(exp)]) == 0
    a, b = tmp_path / "a.sys", tmp_path / "b.sys"
    assert run(["galois", "system", "--ell", "3", "--expansion", str(exp), "-o", str(a)]) == 0
    b.write_text(a.read_text())
    capsys.readouterr()
    _, out, _ = capture(["galois", "compat", str(a), str(b)], capsys)
    assert "compatible through bound" in out


def test_compat_detects_perturbation(tmp_path, capsys):
    exp = tmp_path / "f.exp"
    run(["hecke", "expand", "11", "2", "--upto", "100", "-o", str(exp)])
    a, b = tmp_path / "a.sys", tmp_path / "b.sys"
    run(["galois", "system", "--ell", "3", "--expansion", str(exp), "-o", str(a)])
    run(["galois", "system", "--ell", "5", "--expansion", str(exp), "-o", str(b)])
    b.write_text(b.read_text().replace("\n13 -4 13\n", "\n13 -3 13\n"))
    capsys.readouterr()
    _, out, _ = capture(["galois", "compat", str(a), str(b)], capsys)
    assert out.splitlines()[-1] == "mismatch at 13"


def test_lfun_eval(tmp_path, capsys):
    exp = tmp_path / "f.exp"
    run(["hecke", "expand", "11", "2", "--upto", "1000", "-o", str(exp)])
    capsys.readouterr()
    _, out, _ = capture(["lfun", "eval", str(exp), "--s", "3", "--s", "4"], capsys)
    rows = [line.split("\t") for line in out.splitlines() if not line.startswith("#")]
    assert rows[0] == ["s", "value", "tail_bound"] and len(rows) == 3


def test_hecke_eigencheck(tmp_path, capsys):
    exp = tmp_path / "d.exp"
    run(["hecke", "expand", "1", "12", "--upto", "60", "-o", str(exp)])
    capsys.readouterr()
    code, out, _ = capture(["hecke", "eigencheck", str(exp), "--prime", "2", "--eigenvalue", "-24"], capsys)
    assert code == 0 and out.splitlines()[-1] == "T_2 f == -24 f mod 1 through 30"
    _, out, _ = capture(["hecke", "eigencheck", str(exp), "--prime", "2", "--eigenvalue", "0", "--alpha", "5"], capsys)
    assert " != " in out.splitlines()[-1]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("precision = 53\nseed = 7\n")
    _, out, _ = capture(["classgroup", "5", "--config", str(cfg)], capsys)
    assert out.startswith("# config precision=53 ") and "seed=7" in out.splitlines()[0]
    _, out, _ = capture(["--config", str(cfg), "--seed", "9", "classgroup", "5"], capsys)
    assert "seed=9" in out.splitlines()[0]


def test_usage_errors(capsys):
    assert run(["bogus"]) == 2
    assert run([]) == 2
    assert run(["classgroup"]) == 2
    assert run(["galois", "efg", "7"]) == 2


def test_domain_errors(capsys):
    code, _, err = capture(["galois", "frob", "5", "5"], capsys)
    assert code == 1 and err.startswith("error:") and "ramifies" in err
    code, _, err = capture(["classgroup", "4"], capsys)
    assert code == 1
    code, _, err = capture(["lfun", "eval", "/nonexistent/file", "--s", "3"], capsys)
    assert code == 1


def test_deterministic(capsys):
    argv = ["--seed", "3", "--precision", "53", "--radius", "3", "eisenstein", "eval", "5", "--samples", "2"]
    _, first, _ = capture(argv, capsys)
    _, second, _ = capture(argv, capsys)
    assert first == second


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "hilbertmf.cli", "classgroup", "5"], capture_output=True, text=True)
    assert r.returncode == 0 and "h = 1" in r.stdout
