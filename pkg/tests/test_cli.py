import json
import subprocess
import sys

import pytest

from cli_cases import invocations, write_inputs
from exteria.cli import COMMANDS, SCHEMA, run


def call(capsys, argv):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_every_subcommand_has_a_case(tmp_path):
    assert set(invocations(tmp_path)) == set(COMMANDS)


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_subcommand_emits_one_json_line(name, tmp_path, capsys):
    argv = invocations(tmp_path)[name]
    code, out, _ = call(capsys, argv)
    assert code == 0
    assert out.count("\n") == 1
    report = json.loads(out)
    assert report["schema"] == SCHEMA and "meta" in report


def test_normal_form_report(capsys):
    code, out, _ = call(capsys, ["normal-form", "--m", "4", "--n", "4", "--t", "2", "--u", "2", "--k", "1"])
    assert code == 0
    assert json.loads(out)["orbit"] == {"sr": 2, "rank": 2, "k": 1, "dim": 14, "prime": "p0+q4"}


def test_classify_normal_form(capsys):
    code, out, _ = call(capsys, ["classify", "--m", "4", "--n", "4", "--t", "2", "--point", "normal:u=2,k=1"])
    assert json.loads(out)["dim"] == 14


def test_classify_random_point_not_in_variety(capsys):
    code, out, _ = call(capsys, ["classify", "--m", "4", "--n", "4", "--t", "2", "--point", "random", "--seed", "5"])
    assert code == 0
    assert json.loads(out)["verdict"] == "not in X_t"


def test_transposed_input_is_recorded(capsys):
    code, out, _ = call(capsys, ["small-rank", "--m", "5", "--n", "4", "--t", "2", "--point", "rank1"])
    report = json.loads(out)
    assert report["meta"]["transposed"] is True and report["meta"]["m"] == 4
    assert report["sr"] == 1


def test_compound_of_tall_matrix_is_transposed(tmp_path, capsys):
    p = tmp_path / "tall.txt"
    p.write_text("3 2\n1 0\n0 1\n1 1\n")
    code, out, _ = call(capsys, ["compound", "--matrix", str(p), "--t", "2"])
    report = json.loads(out)
    assert report["meta"]["transposed"] is True
    assert report["point"]["m"] == 2 and report["point"]["n"] == 3


def test_point_file_roundtrip(tmp_path, capsys):
    code, out, _ = call(capsys, ["normal-form", "--m", "4", "--n", "4", "--t", "2", "--u", "3", "--k", "2"])
    p = tmp_path / "pt.json"
    p.write_text(json.dumps(json.loads(out)["point"]))
    code, out, _ = call(capsys, ["classify", "--point", f"file:{p}"])
    assert json.loads(out)["dim"] == 16


def test_relations_gen_and_verify_file(tmp_path, capsys):
    code, out, _ = call(capsys, ["relations", "gen", "--family", "twelve-term"])
    terms = json.loads(out)["relations"][0]["terms"]
    assert len(terms) == 12
    p = tmp_path / "rel.json"
    p.write_text(json.dumps(terms))
    code, out, _ = call(capsys, ["relations", "verify", "--family", "file", "--input", str(p), "--mode", "exact"])
    assert code == 0 and json.loads(out)["status"] == "zero"
    terms[0]["coeff"] = str(-int(terms[0]["coeff"]))
    p.write_text(json.dumps(terms))
    code, out, _ = call(capsys, ["relations", "verify", "--family", "file", "--input", str(p)])
    assert code == 1 and json.loads(out)["status"] == "nonzero"


@pytest.mark.parametrize("family", ["plucker", "genplu2", "twelve-term", "twelve-term-appended", "degree3", "pushforward"])
def test_relation_families_verify(family, capsys):
    code, out, _ = call(capsys, ["relations", "verify", "--family", family, "--threads", "2"])
    assert code == 0 and json.loads(out)["status"] == "zero"


def test_tangent_report(capsys):
    code, out, _ = call(capsys, ["tangent", "--m", "3", "--n", "4", "--t", "2", "--point", "smooth"])
    report = json.loads(out)
    assert report["tangent_dim"] == report["mn"] == 12 and report["verdict"] == "smooth"


def test_fibers_report(tmp_path, capsys):
    a, b = write_inputs(tmp_path)
    code, out, _ = call(capsys, ["fibers", "--f", a, "--g", b, "--t", "2"])
    report = json.loads(out)
    # b = -a and t = 2 is even
    assert report["case"] == "rank>t" and report["same_compound"] is True


def test_tsv_output(capsys):
    code, out, _ = call(capsys, ["shapes", "--t", "2", "--max-boxes", "3", "--format", "tsv"])
    lines = out.splitlines()
    assert lines[0].split("\t")[0] == "shape" and len(lines) == 1 + 1 + 2 + 3


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "out.json"
    code, out, _ = call(capsys, ["primes", "--m", "4", "--t", "2", "--output", str(dest)])
    assert out == "" and json.loads(dest.read_text())["count"] == 6


@pytest.mark.parametrize(
    "argv",
    [
        ["normal-form", "--m", "4", "--n", "4", "--t", "2", "--u", "2", "--k", "5"],
        ["small-rank", "--point", "zero"],
        ["classify", "--m", "4", "--n", "4", "--t", "2", "--point", "bogus"],
        ["compound", "--matrix", "/nonexistent", "--t", "1"],
        ["tangent", "--m", "5", "--n", "5", "--t", "2", "--point", "zero"],
        ["normal-form", "--format", "tsv", "--m", "4", "--n", "4", "--t", "2", "--u", "0"],
        ["no-such-command"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = call(capsys, argv)
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "exteria", "primes", "--m", "4", "--t", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 6
