import json

import pytest

from eqres.cli import main

from conftest import fixture_path

BUSE = fixture_path("buse5.json")
DISC = fixture_path("disc4.json")
BROKEN = fixture_path("broken5.json")
SUMSQ = fixture_path("sumsq4.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


@pytest.mark.parametrize("argv,code", [
    (("check", BUSE), 0),
    (("check", DISC), 0),
    (("check", SUMSQ), 0),
    (("check", BROKEN), 1),
    (("decompose", DISC), 1),
    (("check", "/nonexistent/file.json"), 3),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_malformed_inputs(capsys, tmp_path):
    assert run(capsys, "check", write(tmp_path, "a.json", "{not json"))[0] == 3
    doc = {"n": 2, "p": 1, "degree": 1, "variables": ["x1", "x2"], "system": ["x1 x2", "x2"]}
    code, _, err = run(capsys, "check", write(tmp_path, "b.json", doc))
    assert code == 3 and "offset 3" in err
    doc = {"n": 3, "p": 1, "degree": 1, "variables": ["x1", "x2"], "system": ["x1", "x2"]}
    assert run(capsys, "check", write(tmp_path, "c.json", doc))[0] == 3
    doc = {"n": 2, "p": 1, "degree": 2, "variables": ["x1", "x2"], "system": ["x1", "x2"]}
    assert run(capsys, "check", write(tmp_path, "d.json", doc))[0] == 1


def test_counterexample_exit_code(capsys, tmp_path):
    doc = json.loads(open(BUSE).read())
    doc["closed_form"] = "a*(" + doc["closed_form"] + ")"
    code, out, _ = run(capsys, "verify", write(tmp_path, "wrong.json", doc), "--trials", "1")
    assert code == 2 and "counterexample" in out


def test_decompose_text(capsys):
    code, out, _ = run(capsys, "decompose", BUSE)
    assert code == 0
    assert "exponent mu1 = 8" in out
    assert [line.split("m*m' = ")[1] for line in out.splitlines() if "m*m' = " in line] == ["1", "3", "1", "3"]
    assert "total 80 (expected 80)" in out


def test_decompose_json_and_byte_stability(capsys):
    first = run(capsys, "decompose", BUSE, "--json")[1]
    second = run(capsys, "decompose", BUSE, "--json")[1]
    assert first == second
    doc = json.loads(first)
    assert doc["case"] == "p>d, q<=d"
    assert doc["factors"][0]["value"] == "a" and doc["factors"][0]["exponent"] == 8


def test_discriminant_json(capsys):
    code, out, _ = run(capsys, "discriminant", DISC, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["prefactor"] == {"base": 4, "exponent": 20}
    assert len(doc["factors"]) == 4


@pytest.mark.parametrize("point", [None, "a=1,b=2,c=3,p=4,q=5", "a=1/2,b=-3,c=2,p=7,q=1"])
def test_evaluate_round_trip(capsys, tmp_path, point):
    extra = ["--at", point] if point else []
    code, out, _ = run(capsys, "decompose", BUSE, "--json", *extra)
    doc = json.loads(out)
    path = write(tmp_path, "dec.json", out)
    code, out, _ = run(capsys, "evaluate", path, "--json")
    assert code == 0
    again = json.loads(out)
    assert again["values"] == [f["evaluated"] for f in doc["factors"]]
    if point:
        assert again["product"] == doc["product"]


def test_resultant_direct_and_decomposed(capsys):
    code, out, _ = run(capsys, "resultant", SUMSQ)
    assert code == 0 and out.strip() == "direct resultant: 16"
    code, out, _ = run(capsys, "resultant", SUMSQ, "--decomposed")
    assert code == 0 and out.strip() == "decomposed resultant: 16"


def test_resultant_over_cap_needs_point(capsys):
    code, _, err = run(capsys, "resultant", BUSE)
    assert code == 1 and "--at" in err
    assert run(capsys, "resultant", BUSE, "--at", "a=1,b=2")[0] == 1


def test_at_rejects_unknown_names(capsys):
    assert run(capsys, "decompose", BUSE, "--at", "z=1")[0] == 3
    assert run(capsys, "decompose", BUSE, "--at", "a")[0] == 3


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", SUMSQ, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "pass" and doc["completed"] == 1


def test_partitions(capsys):
    code, out, _ = run(capsys, "partitions", "5")
    assert code == 0 and out.splitlines()[-1] == "count=7  sum m=52"
    code, out, _ = run(capsys, "partitions", "3", "2", "--max-length", "2", "--json")
    assert [p["weight"] for p in json.loads(out)] == [1, 3, 1, 3]


def test_bench_runs(capsys):
    code, out, _ = run(capsys, "bench", SUMSQ, "--trials", "1")
    assert code == 0 and "speedup" in out
