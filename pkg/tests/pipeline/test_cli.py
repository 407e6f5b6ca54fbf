import json

from app.cli import EXIT_DECIDED, EXIT_INPUT, EXIT_UNDECIDED, main, parse_primes, read_ells
from app.engine.algorithm import run_algorithm1
from app.etale.element import EtaleElement


def test_parse_primes():
    assert parse_primes("3, 7,11") == [3, 7, 11]
    assert parse_primes(None) == []


def test_read_ells(tmp_path):
    path = tmp_path / "ells.txt"
    path.write_text("# theta\n0 1\n\n1/2 0 3  # comment\n", encoding="utf-8")
    assert read_ells(path) == [["0", "1"], ["1/2", "0", "3"]]


def test_bounds(capsys):
    assert main(["bounds", "--max-genus", "3"]) == EXIT_DECIDED
    out = capsys.readouterr().out
    assert "1153" in out
    assert "34" in out


def test_classify_decided(tmp_path, capsys):
    out_path = tmp_path / "result.json"
    code = main(["classify", "--coeffs", "1 0 0 0 0 0 1", "--no-check", "--height", "5", "--json", str(out_path)])
    assert code == EXIT_DECIDED
    assert "HasRationalPoint" in capsys.readouterr().out
    assert json.loads(out_path.read_text(encoding="utf-8"))["category"] == "HasRationalPoint"


def test_classify_not_locally_soluble(capsys):
    assert main(["classify", "--coeffs", "-1 0 0 0 0 0 -1"]) == EXIT_DECIDED
    assert "Q_inf" in capsys.readouterr().out


def test_classify_bad_curve():
    assert main(["classify", "--coeffs", "1 0 1"]) == EXIT_INPUT
    assert main(["classify", "--coeffs", "1 two 3"]) == EXIT_INPUT


def test_classify_bad_ell(tmp_path):
    path = tmp_path / "ells.txt"
    path.write_text("1 -1\n", encoding="utf-8")
    code = main(["classify", "--coeffs", "1 0 0 0 0 0 1", "--height", "5", "--ells", str(path)])
    assert code == EXIT_INPUT


def test_verify(tmp_path, sextic):
    report = run_algorithm1(sextic, [EtaleElement.theta(sextic)])
    good = tmp_path / "good.json"
    good.write_text(report.model_dump_json(), encoding="utf-8")
    assert main(["verify", "--report", str(good)]) == EXIT_DECIDED

    forged = report.model_copy(update={"verdict": "obstructed", "survivors": []})
    bad = tmp_path / "bad.json"
    bad.write_text(forged.model_dump_json(), encoding="utf-8")
    assert main(["verify", "--report", str(bad)]) == EXIT_UNDECIDED


def test_verify_missing_file(tmp_path):
    assert main(["verify", "--report", str(tmp_path / "nope.json")]) == EXIT_INPUT
