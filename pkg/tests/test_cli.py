from __future__ import annotations

import json
import shutil

import pytest

from conftest import DATA
from crossarray import golden
from crossarray.cli import EXIT_IO, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, RunConfig, main, parse_subset
from crossarray.formats import dumps, indicator_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_default_config_is_the_reference_instance():
    cfg = RunConfig("enumerate")
    assert (cfg.p, cfg.q, cfg.s, cfg.runs) == (6, 3, 3, 24)
    assert cfg.provenance() == golden.default_config()


@pytest.mark.parametrize(
    "text, expected", [("1,6,7:star", ((1, 6, 7), True)), ("4,5,6", ((4, 5, 6), False))]
)
def test_parse_subset(text, expected):
    assert parse_subset(text) == expected


def test_enumerate_default(capsys, tmp_path):
    out_file = tmp_path / "bundle.json"
    code, _, err = run(capsys, "enumerate", "--out", str(out_file))
    assert code == EXIT_OK
    assert "192 solutions, 1 orbit, 12 anchored representatives" in err
    bundle = json.loads(out_file.read_text())
    assert bundle["config"] == golden.default_config()
    assert len(bundle["solutions"]) == 192 and len(bundle["representatives"]) == 12
    first = out_file.read_bytes()
    assert run(capsys, "enumerate", "--out", str(out_file), "--workers", "2")[0] == EXIT_OK
    assert out_file.read_bytes() == first


def test_enumerate_full_runs(capsys):
    code, out, err = run(capsys, "enumerate", "--runs", "64")
    assert code == EXIT_OK
    assert err.startswith("1 solution,")
    assert len(json.loads(out)["solutions"]) == 1


def test_enumerate_infeasible_is_not_an_error(capsys):
    code, out, err = run(capsys, "enumerate", "--require-uniform", "1,6,7:star")
    assert code == EXIT_OK
    assert err.startswith("0 solutions")
    bundle = json.loads(out)
    assert bundle["solutions"] == []
    assert bundle["config"]["require_uniform"] == ["1,6,7:star"]


def test_enumerate_text_grid(capsys):
    code, out, _ = run(capsys, "enumerate", "--format", "text")
    assert code == EXIT_OK
    assert out.count("representative") == 12
    assert out.count("∘") == 12 * 24


@pytest.mark.parametrize(
    "argv",
    [
        ["enumerate", "--runs", "20"],
        ["enumerate", "--require-uniform", "1,2:nope"],
        ["enumerate", "--drop-uniform", "1,6,7:star"],
        ["enumerate", "--anchor", "1,1,0,1,1,1"],
        ["enumerate", "--workers", "0"],
    ],
)
def test_enumerate_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err.startswith("error:")


def test_analyze_f1(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "f1.csv"))
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["catalog_label"] == "F1"
    assert report["strength"] == {"u": 3, "u_star": 2}
    assert sorted(report["quotient_basis"]) == sorted((DATA / "basis_f1.txt").read_text().split())
    assert report["estimable"]["columns"] == [j for j in range(1, 29) if j not in (19, 25, 27, 28)]
    assert report["estimable"]["estimable"]
    matrix = [[int(v.split("/")[0]) for v in row] for row in report["confounding"]["entries"]]
    expected = [[int(v) for v in line.split()] for line in (DATA / "confounding_f1.txt").read_text().splitlines()]
    assert matrix == expected


def test_analyze_product_design(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "product32.csv"))
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["strength"]["u_star"] == 2
    assert report["nonuniform_marginals"]["u_star_2"] == []
    assert report["nonuniform_marginals"]["u_star_3"] == [[1, 2, 4], [1, 3, 5], [2, 3, 6], [4, 5, 6], [7, 8, 9]]


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "f1.csv"), "--format", "text")
    assert code == EXIT_OK
    assert "matches catalog column F1" in out
    assert "(alpha4 + gamma32)*x4" in out


def test_indicator_of_full_factorial(capsys):
    code, out, _ = run(capsys, "indicator", str(DATA / "full64.csv"), "--format", "text")
    assert code == EXIT_OK and out.strip() == "1"


def test_indicator_design_round_trip(capsys, tmp_path):
    ind = tmp_path / "f1.json"
    assert run(capsys, "indicator", str(DATA / "f1.csv"), "--out", str(ind))[0] == EXIT_OK
    poly = indicator_from_json(ind.read_text())
    assert len(poly) == 16
    code, out, _ = run(capsys, "design", str(ind))
    assert code == EXIT_OK
    assert out == (DATA / "f1.csv").read_text()


def test_design_rejects_non_indicator(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 6, "terms": [{"support": [], "num": 1, "den": 2}]}))
    code, _, err = run(capsys, "design", str(bad))
    assert code == EXIT_USAGE and "not an indicator" in err


def test_strength_and_marginals(capsys):
    assert run(capsys, "strength", str(DATA / "f1.csv"))[1].strip() == "3"
    assert run(capsys, "strength", str(DATA / "product32.csv"), "--star")[1].strip() == "2"
    code, out, _ = run(capsys, "marginals", str(DATA / "f1.csv"), "--subset", "1,2,3", "--subset", "1,6,7:star")
    assert code == EXIT_OK
    tables = json.loads(out)
    assert tables[0]["counts"] == [3] * 8 and tables[0]["uniform"]
    assert tables[1]["T"] == [1, 6, 7] and not tables[1]["uniform"]
    code, out, _ = run(capsys, "marginals", str(DATA / "f1.csv"), "--size", "2", "--star")
    assert len(json.loads(out)) == 36


def test_malformed_csv_names_the_line(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x1,x2,x3,y1,y2,y3\n1,1,1,1,1,1\n1,1,1,2,1,1\n")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == EXIT_USAGE and "line 3" in err


def test_missing_input_is_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", str(tmp_path / "nope.csv"))
    assert code == EXIT_IO and "not found" in err
    code, _, _ = run(capsys, "indicator", str(DATA / "f1.csv"), "--out", str(tmp_path / "no" / "dir.json"))
    assert code == EXIT_IO


def test_verify_intact(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == EXIT_OK and "match" in out


def test_verify_flipped_sign_names_column_and_monomial(capsys, tmp_path):
    work = tmp_path / "golden"
    shutil.copytree(golden.DEFAULT_DIR, work)
    path = work / "catalog.json"
    table = json.loads(path.read_text())
    entry = next(e for e in table if e["label"] == "F3")
    term = entry["indicator"]["terms"][3]
    term["num"] = -term["num"]
    path.write_text(dumps(table))
    code, out, _ = run(capsys, "verify", "--golden", str(work))
    assert code == EXIT_MISMATCH
    exps = "".join("1" if j in term["support"] else "0" for j in range(6))
    assert f"column F3, theta_{exps}" in out


def test_verify_missing_golden(capsys, tmp_path):
    work = tmp_path / "golden"
    shutil.copytree(golden.DEFAULT_DIR, work)
    (work / "f1_confounding.csv").unlink()
    code, _, err = run(capsys, "verify", "--golden", str(work))
    assert code == EXIT_IO and "f1_confounding.csv" in err


def test_regenerate_with_two_workers_then_verify(capsys, tmp_path):
    work = tmp_path / "golden"
    assert run(capsys, "verify", "--update", "--golden", str(work), "--workers", "2")[0] == EXIT_OK
    for path in golden.DEFAULT_DIR.iterdir():
        if path.is_file():
            assert (work / path.name).read_bytes() == path.read_bytes()
    assert run(capsys, "verify", "--golden", str(work))[0] == EXIT_OK
