import json
from fractions import Fraction
import subprocess
import sys

import pytest

from hopfwick.algebra import LinComb, Multiset, parse_helem
from hopfwick.cli import main, run
from hopfwick.cumulants import MomentSpec
from hopfwick.trees import TreeCharacter, parse_tree, random_character, trees_up_to

from oracles import seeded


def ok(*argv):
    code, out, err = run(list(argv))
    assert code == 0, err
    return out


def test_wick_latex_example():
    assert ok("wick", "--dist", "a=gaussian(0,1)", "--expr", "a^4", "--format", "latex") == "a^{4} - 6a^{2} + 3\n"


def test_poisson_cumulants_json_example():
    data = json.loads(ok("cumulants", "--dist", "a=poisson(1)", "--max-degree", "4", "--format", "json"))
    assert data == {"max_degree": 4, "values": {"a": "1", "a^2": "1", "a^3": "1", "a^4": "1"}}


def test_wick_json_matches_text():
    argv = ["wick", "--dist", "a=gaussian(0,1); b=poisson(1)", "--expr", "a^2 b"]
    data = json.loads(ok(*argv, "--format", "json"))
    poly = LinComb((Multiset.parse(k), Fraction(v)) for k, v in data["terms"].items())
    # independent letters: (a^2 - 1)(b - 1)
    assert parse_helem(ok(*argv).strip()) == poly == parse_helem("a^2 b - a^2 - b + 1")


def test_wick_inverse_and_deform_mul():
    assert ok("wick-inverse", "--dist", "a=gaussian(0,1)", "--expr", "a^2").strip() == "a^2 + 1"
    out = ok("deform-mul", "--dist", "a=gaussian(0,1)", "--expr", "a", "--expr", "a", "--expr", "a")
    assert out.strip() == "a^3 - 3 a"


def test_spec_file_and_samples(tmp_path):
    spec = MomentSpec(("a",), 2, {"a": 0, "a^2": 1})
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec.to_json()))
    assert ok("wick", "--spec", str(path), "--expr", "a^2").strip() == "a^2 - 1"
    csv = tmp_path / "s.csv"
    csv.write_text("a\n1\n3\n")
    out = ok("moments", "--samples", str(csv), "--max-degree", "2")
    assert out == "mu(1) = 1\nmu(a) = 2\nmu(a^2) = 5\n"


def test_moments_from_kappa_file(tmp_path):
    path = tmp_path / "kappa.json"
    path.write_text(json.dumps({"max_degree": 4, "values": {"a": "1", "a^2": "1", "a^3": "1", "a^4": "1"}}))
    data = json.loads(ok("moments", "--kappa", str(path), "--format", "json"))
    assert data["values"] == {"1": "1", "a": "1", "a^2": "2", "a^3": "5", "a^4": "15"}


def test_tree_coprod_text_example():
    lines = ok("tree", "coprod", "--tree", "(1:(2:()),3:())", "--format", "text").splitlines()
    assert len(lines) == 8
    assert "(2:()) * (3:()) ⊗ (1:())" in lines


def test_tree_prod_and_center(tmp_path):
    assert ok("tree", "prod", "--tree", "(1:())", "--tree", "(2:())").strip() == "(1:(),2:())"
    mu = random_character(trees_up_to(2, 2), seeded(1), max_edges=2)
    path = tmp_path / "mu.json"
    path.write_text(json.dumps(mu.to_json(2)))
    lam, d = TreeCharacter.from_json(json.loads(ok("tree", "center", "--character", str(path), "--format", "json")))
    assert d == 2 and lam(parse_tree("(1:())")) == -mu(parse_tree("(1:())"))
    out = ok("tree", "prod", "--tree", "(1:())", "--tree", "()", "--character", str(path))
    assert out.strip() == "(1:())"


def test_check_commands():
    assert "FAIL" not in ok("hopf-check", "--alphabet", "a,b", "--max-degree", "3", "--forest-degree", "3")
    assert "FAIL" not in ok("tree", "check", "--max-edges", "2", "--corolla-degree", "3")


@pytest.mark.parametrize("argv,code", [
    ([], 1),
    (["bogus"], 1),
    (["wick", "--expr", "a"], 1),
    (["wick", "--dist", "a=gaussian(0,1)", "--spec", "x.json", "--expr", "a"], 1),
    (["wick", "--dist", "a=gaussian(0,1)", "--expr", "a^"], 2),
    (["wick", "--dist", "a=gaussian(0,1)", "--expr", "a^4", "--max-degree", "2"], 2),
    (["cumulants", "--dist", "a=gaussian(0,-1)"], 2),
    (["cumulants", "--spec", "/nonexistent/spec.json"], 2),
    (["tree", "coprod", "--tree", "(1:()"], 2),
    (["tree", "coprod", "--tree", "(" + "1:(" * 21 + ")" * 22], 3),
])
def test_exit_codes(argv, code):
    assert run(argv)[0] == code


def test_deterministic_output():
    argv = ["cumulants", "--dist", "a=gaussian(1/2,2); b=poisson(1/3)", "--max-degree", "4", "--format", "json"]
    assert run(argv) == run(argv)


def test_main_writes_streams(capsys):
    assert main(["tree", "coprod", "--tree", "(1:())"]) == 0
    assert "⊗" in capsys.readouterr().out
    assert main(["wick"]) == 1
    assert "usage" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hopfwick", "wick", "--dist", "a=gaussian(0,1)", "--expr", "a^2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "a^2 - 1\n"
