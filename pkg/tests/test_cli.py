import pytest

from halfguard.cli import INPUT_ERROR, OK, main
from halfguard.polygon import read_polygon


@pytest.fixture
def poly_file(tmp_path):
    p = tmp_path / "p.poly"
    assert main(["generate", "random", "8", "--seed", "3", "--out", str(p)]) == OK
    return p


def test_check_and_guard(poly_file, tmp_path, capsys):
    assert main(["check", str(poly_file)]) == OK
    assert capsys.readouterr().out.startswith("ok n=8")
    g = tmp_path / "g.txt"
    assert main(["guard", str(poly_file), "--out", str(g)]) == OK
    assert "covered=true" in capsys.readouterr().out
    assert g.read_text().strip()


def test_oracle_budget_line(poly_file, capsys):
    assert main(["oracle", str(poly_file), "--budget", "100"]) == OK
    assert "<= 100: yes" in capsys.readouterr().out


def test_ratio_reports_no_violation(capsys):
    assert main(["ratio", "--trials", "3", "--max-n", "7"]) == OK
    assert "violations=0" in capsys.readouterr().out


def test_render_svg(poly_file, tmp_path):
    out = tmp_path / "p.svg"
    assert main(["render", str(poly_file), "--pockets", "--out", str(out)]) == OK
    assert out.read_text().startswith("<svg")


def test_reduce_writes_polygon_and_sidecar(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 1 1\n1 1 1 0\n")
    out = tmp_path / "r.poly"
    assert main(["reduce", str(cnf), "--out", str(out)]) == OK
    assert "verdict: PASS" in capsys.readouterr().out
    assert read_polygon(str(out)).n == 32
    side = (tmp_path / "r.poly.txt").read_text().splitlines()
    assert side[0] == "K 4"
    assert any(line.startswith("truth start var 1") for line in side)


@pytest.mark.parametrize("text", ["p cnf 1 1\n1 2 0\n", "p cnf 1 1\n1 2 1 0\n", "garbage\n"])
def test_reduce_rejects_bad_cnf(tmp_path, text, capsys):
    cnf = tmp_path / "bad.cnf"
    cnf.write_text(text)
    assert main(["reduce", str(cnf), "--out", str(tmp_path / "r.poly")]) == INPUT_ERROR
    assert "CnfError" in capsys.readouterr().err


def test_missing_file_and_same_path(tmp_path, poly_file):
    assert main(["check", str(tmp_path / "nope.poly")]) == INPUT_ERROR
    assert main(["guard", str(poly_file), "--out", str(poly_file)]) == INPUT_ERROR


def test_bad_cap():
    assert main(["ratio", "--cap", "0"]) == INPUT_ERROR
