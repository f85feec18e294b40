import hashlib
import json
from pathlib import Path

import pytest

from skewlab import certificates
from skewlab.cli import main
from skewlab.io import config_from_json, config_to_json, dumps
from skewlab.ehsets import Halfplane, Intersection, PointSet
from skewlab.poly2 import PolarDecomposition

DATA = Path(certificates.__file__).parent / "data"


@pytest.fixture
def run(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err

    return _run


def test_trans_on_seven_line_certificate(run):
    code, out, _ = run("trans", "-i", DATA / "seven_lines.json")
    assert code == 0 and out.strip() == "3"


def test_mtbound_n2(run):
    code, out, _ = run("mtbound", "--n", 2, "-o", "mt.json")
    assert code == 0 and "log2_total = 1" in out
    assert json.loads(Path("mt.json").read_text())["log2_total"] == "1"


def test_bundle_then_trans(run):
    assert run("bundle", "--levels", 1, "-o", "nine.json")[0] == 0
    code, out, _ = run("trans", "-i", "nine.json", "-o", "t.json")
    assert code == 0 and out.strip() == "4"
    res = json.loads(Path("t.json").read_text())
    assert res["n"] == 9 and res["witness"]["kind"] == "Transitive" and len(res["witness"]["vertices"]) == 4


def test_bundle_from_named_base_and_file(run):
    assert run("bundle", "--base", "seven_lines", "--levels", 0, "-o", "same.json")[0] == 0
    assert config_from_json(json.loads(Path("same.json").read_text())) == certificates.seven_lines()
    assert run("bundle", "--base", DATA / "three_cycle.json", "--levels", 1, "-o", "nine.json")[0] == 0
    assert len(json.loads(Path("nine.json").read_text())["lines"]) == 9


def test_manifest_digests_recompute(run):
    run("bundle", "--levels", 1, "-o", "nine.json")
    run("trans", "-i", "nine.json", "-o", "t.json")
    m = json.loads(Path("t.manifest.json").read_text())
    assert m["command"] == ["skewlab", "trans", "-i", "nine.json", "-o", "t.json"]
    assert m["seed"] == 0 and m["tool_version"]
    for name, digest in {**m["input_digests"], **m["outputs"]}.items():
        assert hashlib.sha256(Path(name).read_bytes()).hexdigest() == digest


def test_results_are_byte_identical_across_runs(run):
    for k in (1, 2):
        run("bundle", "--levels", 1, "-o", f"b{k}.json")
        run("decompose", "--poly", "y^2 - x^3 + x", "-o", f"d{k}.json")
        run("verify-decomp", "--poly", "y^2 - x^3 + x", "--samples", 500, "--seed", 3, "-o", f"v{k}.json")
        run("search", "--n", 5, "--target", 3, "--budget", 4, "--seed", 9, "-o", f"s{k}.json")
    for stem in "bdvs":
        assert Path(f"{stem}1.json").read_bytes() == Path(f"{stem}2.json").read_bytes()
    assert Path("s1.cert.json").read_bytes() == Path("s2.cert.json").read_bytes()


def test_emitted_json_round_trips(run):
    run("bundle", "--levels", 1, "-o", "nine.json")
    text = Path("nine.json").read_text()
    assert dumps(config_to_json(config_from_json(json.loads(text)))) == text
    run("decompose", "--poly", "x^2 - 4x + y^2 + 3", "-o", "d.json")
    text = Path("d.json").read_text()
    assert dumps(PolarDecomposition.from_json(json.loads(text)).to_json()) == text


def test_search_writes_certificate(run):
    code, out, _ = run("search", "--n", 5, "--target", 3, "--budget", 8, "--seed", 1, "-o", "s.json")
    assert code == 0
    cert = json.loads(Path("s.cert.json").read_text())
    assert cert["trans"] <= 3 and cert["seed"] == 1 and cert["verified"]
    code, out, _ = run("trans", "-i", "s.json")
    assert int(out) == cert["trans"]


def test_tournament_and_hom(run):
    code, out, _ = run("tournament", "-i", DATA / "three_cycle.json", "-o", "t.json")
    assert code == 0
    Path("t.txt").write_text(out)
    code, out, _ = run("hom", "-i", "t.txt")
    assert code == 0 and out.split()[0] == "1"  # one-way arcs only: no pair is complete or independent
    assert json.loads(Path("t.json").read_text())["n"] == 3


def test_extract_verb(run):
    e = Intersection(Halfplane((1, 2)), Halfplane((3, -1)))
    Path("e.json").write_text(json.dumps(e.to_json()))
    pts = PointSet.of([[i * 7919 % 1009, i * 104729 % 2003] for i in range(60)])
    Path("p.json").write_text(json.dumps(pts.to_json()))
    code, out, _ = run("extract", "--expr", "e.json", "--points", "p.json", "-o", "w.json")
    assert code == 0
    res = json.loads(Path("w.json").read_text())
    assert res["verified"] and res["epsilon"] == "1/8" and len(res["witness"]["vertices"]) >= res["guaranteed"]


def test_polyclass_and_spectral(run):
    assert run("polyclass", "--poly", "2x - 3y")[1].strip() == "LinearForm"
    Path("f.txt").write_text("x^2 + y^2 - 4\n")
    assert run("polyclass", "-i", "f.txt")[1].strip() == "CircleForm"
    code, _, _ = run("spectral", "--d", 8, "-o", "s.json")
    assert code == 0 and json.loads(Path("s.json").read_text())["nullity"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["trans"],
        ["trans", "-i", "missing.json"],
        ["mtbound"],
        ["mtbound", "--n", "1"],
        ["spectral", "--d", "0"],
        ["spectral", "--d", "x"],
        ["search", "--n", "20", "--target", "3"],
        ["polyclass", "--poly", "x +* y"],
        ["extract", "--expr", "e.json"],
        ["bundle", "--base", "no_such_config"],
        ["bundle", "--levels", "-1"],
        ["decompose"],
    ],
)
def test_validation_errors_exit_1(run, argv):
    Path("e.json").write_text("{}")
    code, _, err = run(*argv)
    assert code == 1 and "error" in err


def test_bad_json_exits_1(run):
    Path("bad.json").write_text("{not json")
    assert run("trans", "-i", "bad.json")[0] == 1
    Path("bad2.json").write_text('{"lines": [["1", "2", "3"]]}')
    assert run("trans", "-i", "bad2.json")[0] == 1


def test_computation_errors_exit_2(run):
    code, _, err = run("decompose", "--poly", "x^2 + y^2 - 1")
    assert code == 2 and "NotGeneric" in err
    code, _, err = run("search", "--n", 5, "--target", 2, "--budget", 2)
    assert code == 2 and "InfeasibleBudget" in err
    n = 70
    Path("big.txt").write_text(f"{n}\n" + "\n".join("".join("1" if j > i else "0" for j in range(n)) for i in range(n)) + "\n")
    code, _, err = run("trans", "-i", "big.txt")
    assert code == 2 and "TooLarge" in err


def test_failed_verification_exits_2_without_manifest(run):
    run("decompose", "--poly", "x^2 + 2 y^2 - 1", "-o", "d.json")
    dec = json.loads(Path("d.json").read_text())
    dec["arcs"] = dec["arcs"][1:]
    Path("d.json").write_text(json.dumps(dec))
    code, _, err = run("verify-decomp", "--poly", "x^2 + 2 y^2 - 1", "--decomp", "d.json", "--samples", 500, "-o", "v.json")
    assert code == 2 and "disagrees" in err
    assert Path("v.json").exists() and not Path("v.manifest.json").exists()


def test_report_bundle(run):
    code, out, _ = run("report", "-o", "bundle", "--samples", 2000)
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.startswith(("PASS", "FAIL"))]
    assert len(lines) == 11 and all(ln.startswith("PASS") for ln in lines)
    files = sorted(p.name for p in Path("bundle").iterdir())
    assert files == [f"criterion_{k:02d}.json" for k in range(1, 12)] + ["manifest.json", "summary.txt"]
    m = json.loads(Path("bundle/manifest.json").read_text())
    assert len(m["outputs"]) == 12
