import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import pytest

from deltakit.cli import main
from deltakit.errors import InvalidScenario
from deltakit.scenario import (
    bundled,
    bundled_path,
    parse_scenario,
    run,
    scale_scenario,
    scenario_to_json,
    serialize_scenario,
)

F = Fraction
CORPUS = ["qp", "s-h3", "e2", "e2-q-case1", "e2-q-case2", "d1", "r1"]


def e2_data():
    return json.loads(bundled_path("e2").read_text())


def write(tmp_path, data, name="sc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


# --- parsing ---------------------------------------------------------------

def test_corpus_is_complete():
    assert sorted(bundled()) == sorted(CORPUS)


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_matches_published_schema(name):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((Path(__file__).parent.parent / "docs" / "scenario.schema.json").read_text())
    jsonschema.validate(json.loads(bundled_path(name).read_text()), schema)


def test_parse_e2():
    sc = bundled("e2")
    assert len(sc.chambers) == 2
    assert [(n, a) for n, a in zip(sc.lattice.names, sc.lattice.active_flags)] == [("s", True), ("l2", True), ("CE", False)]
    assert [r.curve for r in sc.refinements] == ["l2"]
    assert len(sc.refinements[0].points) == 3


def test_parse_r1():
    sc = bundled("r1")
    assert len(sc.chambers) == 5
    assert all(ch.vol_poly is not None for ch in sc.chambers)
    assert sum(sc.lattice.active_flags) == 12


@pytest.mark.parametrize("name", CORPUS)
def test_round_trip(name):
    sc = bundled(name)
    again = parse_scenario(serialize_scenario(sc))
    assert scenario_to_json(again) == scenario_to_json(sc)
    assert serialize_scenario(again) == serialize_scenario(sc)


def test_asymmetric_gram():
    data = e2_data()
    data["surface"]["gram"][0][1] = "2"
    with pytest.raises(InvalidScenario, match="symmetric"):
        parse_scenario(data)


def test_dangling_curve_name():
    data = e2_data()
    data["refinements"][0]["points"][0]["mults"] = {"nope": "1"}
    with pytest.raises(InvalidScenario, match="nope"):
        parse_scenario(data)


def test_overlapping_chambers():
    data = e2_data()
    data["chambers"][1]["range"] = ["1/2", "2"]
    with pytest.raises(InvalidScenario, match="abut"):
        parse_scenario(data)


def test_malformed_rational_reports_path():
    data = e2_data()
    data["refinements"][0]["A"] = "0.5"
    with pytest.raises(InvalidScenario, match=r"\$\.refinements\[0\]\.A|refinements.*A"):
        parse_scenario(data)


def test_json_syntax_error_has_line():
    with pytest.raises(InvalidScenario, match="line 2"):
        parse_scenario('{"name": "x",\n  oops}')


# --- running ---------------------------------------------------------------

@pytest.mark.parametrize("name", CORPUS)
def test_corpus_reproduces_expected(name):
    rep = run(bundled(name), check=True)
    assert rep.diffs == []
    assert rep.errors == {}
    assert rep.failed_checks == []
    assert rep.exit_code(check=True) == 0


@pytest.mark.parametrize("name,delta", [("qp", F(56, 51)), ("s-h3", F(112, 107)), ("e2", F(112, 109)), ("d1", F(112, 103)), ("r1", F(64, 63))])
def test_delta_values(name, delta):
    assert run(bundled(name)).results["delta"] == delta


def test_r1_surface_levels():
    # h2 has A = 3 and the same S as the curve l on d1, so its ratio is 112/103
    rep = run(bundled("r1"))
    ratios = {lv.label: lv.A / lv.s_value for lv in rep.levels}
    assert ratios["h2"] == F(112, 103)
    assert min(r for k, r in ratios.items() if k != "R1") == F(224, 207)
    assert rep.argmin == "R1"


def test_task_filter():
    rep = run(bundled("r1"), ["s_divisor", "delta"])
    assert rep.results == {"s_divisor": F(63, 16), "delta": F(64, 63)}
    rep = run(bundled("e2"), ["s_curve"])
    assert set(rep.results) == {"s_curve:l2"}


def test_reports_are_deterministic():
    a = json.dumps(run(bundled("d1"), check=True).to_json(), sort_keys=True)
    b = json.dumps(run(bundled("d1"), check=True).to_json(), sort_keys=True)
    assert a == b


def test_doubling_covariance():
    for name in ["qp", "e2", "d1"]:
        sc = bundled(name)
        r1, r2 = run(sc), run(scale_scenario(sc, 2))
        assert set(r1.results) == set(r2.results)
        for k, x in r1.results.items():
            if k != "delta":
                assert r2.results[k] == 2 * x, k
        assert r1.argmin == r2.argmin


def test_diagnostic_case1():
    rep = run(bundled("e2-q-case1"))
    assert rep.results["s_curve:e1"] == F(111, 56)
    sc = bundled("e2-q-case1")
    assert sc.diagnostic


# --- command line ----------------------------------------------------------

def test_cli_json(capsys):
    assert main(["run", "qp"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["results"]["delta"] == "56/51"
    assert out["argmin"] is not None


def test_cli_markdown_and_csv(capsys):
    assert main(["run", "e2", "--format", "md"]) == 0
    md = capsys.readouterr().out
    assert "| s_curve:l2" in md and "25/28" in md and "## chambers for l2" in md
    assert main(["run", "e2", "qp", "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0][:4] == ["scenario", "curve", "u_lo", "u_hi"]
    assert {r[0] for r in rows[1:]} == {"e2", "qp"}
    assert ["e2", "l2", "0", "1", "1", "2 + u", "s", "s=-1 + v", "4 + 4*u - 4*v + u^2 - 2*u*v + v^2", "2 + u - v"] in rows


def test_cli_task_filter(capsys):
    assert main(["run", "r1", "--task", "s_divisor", "delta"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["results"] == {"s_divisor": "63/16", "delta": "64/63"}


def test_cli_mismatch_exit_code(tmp_path, capsys):
    data = e2_data()
    data["expected"]["s_curve:l2"] = "1"
    path = write(tmp_path, data)
    assert main(["run", path]) == 0
    capsys.readouterr()
    assert main(["run", path, "--check"]) == 2
    out = json.loads(capsys.readouterr().out)
    assert out["diffs"] == [{"task": "s_curve:l2", "expected": "1", "computed": "25/28"}]


def test_cli_invalid_scenario(tmp_path, capsys):
    data = e2_data()
    data["surface"]["gram"][1][0] = "3"
    assert main(["run", write(tmp_path, data)]) == 3
    assert "symmetric" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.json")]) == 3


def test_cli_failed_identity_exit_code(tmp_path, capsys):
    # a volume that does not vanish at the end of its range
    data = {"name": "bad-volume", "divisor": {"name": "Y", "A": "1"}, "chambers": [{"range": ["0", "1"], "vol": "28 - 14*u"}]}
    path = write(tmp_path, data)
    assert main(["run", path]) == 0
    assert main(["run", path, "--check"]) == 4


def test_cli_non_nef_family_is_invalid(tmp_path, capsys):
    data = e2_data()
    data["chambers"][0]["Q"] = {"s": "1"}
    assert main(["run", write(tmp_path, data)]) == 3


def test_cli_oracle_flag(capsys):
    assert main(["run", "e2", "--oracle", "--samples", "50"]) == 0
    out = json.loads(capsys.readouterr().out)
    oracle = [c for c in out["checks"] if "oracle" in c["name"]]
    assert len(oracle) == 2 and all(c["passed"] for c in oracle)


def test_cli_list(capsys):
    assert main(["list"]) == 0
    names = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert sorted(names) == sorted(CORPUS)
