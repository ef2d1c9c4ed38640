import json

import jsonschema
import pytest

from cblocks import schemas
from cblocks.cli import main
from cblocks.graph import build_gamma, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_enum_count_only(capsys):
    assert run(capsys, "enum", "--graph", "b2", "--level", "2", "--count-only")[:2] == (0, "8\n")


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_missing_graph_is_usage_error(capsys):
    code, _, err = run(capsys, "enum", "--level", "2")
    assert code == 2 and "--graph" in err


def test_graph_build_and_split(tmp_path, capsys):
    out = tmp_path / "g.json"
    assert run(capsys, "graph", "build", "--g", "2", "--n", "3", "--out", str(out))[0] == 0
    data = json.loads(out.read_text())
    jsonschema.validate(data, schemas.GRAPH)
    assert data == to_json(build_gamma(2, 3))
    code, text, _ = run(capsys, "graph", "split", "--graph", str(out), "--edge", "4")
    assert code == 0
    split = json.loads(text)
    jsonschema.validate(split, schemas.SPLIT)
    assert split["right"]["name"].endswith("right@4")


def test_split_bad_edge(tmp_path, capsys):
    code, _, err = run(capsys, "graph", "split", "--graph", "gamma(2,1)", "--edge", "0")
    assert code == 2 and "cycle" in err


def test_no_implicit_overwrite(tmp_path, capsys):
    out = tmp_path / "g.json"
    out.write_text("keep me")
    code, _, err = run(capsys, "graph", "build", "--kind", "b2", "--out", str(out))
    assert code == 2 and "--force" in err
    assert out.read_text() == "keep me"
    assert run(capsys, "graph", "build", "--kind", "b2", "--out", str(out), "--force")[0] == 0
    assert json.loads(out.read_text())["name"] == "b2"


def test_enum_points(capsys):
    code, text, _ = run(capsys, "enum", "--graph", "gamma(0,3)", "--level", "1")
    data = json.loads(text)
    jsonschema.validate(data, schemas.POINTS)
    assert data["count"] == 4 and data["points"][1] == [0, 1, 1]
    code, text, _ = run(capsys, "enum", "--graph", "gamma(0,3)", "--level", "1", "--format", "csv")
    assert text.splitlines()[0] == "e0,e1,e2" and len(text.splitlines()) == 5


def test_enum_budget(capsys):
    code, _, err = run(capsys, "enum", "--graph", "gamma(0,6)", "--level", "4", "--budget", "50")
    assert code == 2 and "budget" in err


def test_hilbert_csv(tmp_path, capsys):
    code, text, _ = run(capsys, "hilbert", "--graph", "b1", "--lmax", "4", "--cache-dir", str(tmp_path))
    assert code == 0 and text == "level,count\n0,1\n1,2\n2,4\n3,6\n4,9\n"
    for p in tmp_path.iterdir():
        jsonschema.validate(json.loads(p.read_text()), schemas.HILBERT_CACHE)


def test_wt_commands(tmp_path, capsys):
    a = write_json(tmp_path / "a.json", {"graph": "b2", "level": 2, "w": {"0": 0, "1": 1, "2": 1, "3": 2}})
    b = write_json(tmp_path / "b.json", {"graph": "b2", "level": 2, "w": {"0": 2, "1": 1, "2": 1, "3": 0}})
    code, text, _ = run(capsys, "wt", "check", "--graph", "b2", "--weighting", a)
    assert code == 0 and json.loads(text)["member"] is True
    code, text, _ = run(capsys, "wt", "mul", "--graph", "b2", "--weighting", a, "--weighting", b)
    prod = json.loads(text)
    jsonschema.validate(prod, schemas.WEIGHTING)
    assert prod == {"graph": "b2", "level": 4, "w": {"0": 2, "1": 2, "2": 2, "3": 2}}
    code, text, _ = run(capsys, "wt", "b2map", "--weighting", a)
    assert json.loads(text)["label"] == "[0,0,0,1]"
    code, text, _ = run(capsys, "wt", "b2map", "--coords", "1,0,0,0")
    assert json.loads(text)["w"] == {"0": 2, "1": 1, "2": 1, "3": 0}


def test_wt_check_non_member(tmp_path, capsys):
    bad = write_json(tmp_path / "bad.json", {"graph": "b2", "level": 1, "w": {"0": 2, "1": 1, "2": 1, "3": 0}})
    code, text, _ = run(capsys, "wt", "check", "--graph", "b2", "--weighting", bad)
    assert code == 1 and json.loads(text)["member"] is False


def test_wt_graph_mismatch(tmp_path, capsys):
    w = write_json(tmp_path / "w.json", {"graph": "b1", "level": 1, "w": {"0": 0, "1": 0, "2": 0, "3": 0}})
    code, _, err = run(capsys, "wt", "check", "--graph", "b2", "--weighting", w)
    assert code == 2 and "b1" in err


def test_wt_restrict(tmp_path, capsys):
    w = write_json(tmp_path / "w.json", {"graph": "gamma(1,2)", "level": 2, "w": {"0": 1, "1": 2, "2": 1, "3": 1}})
    code, text, _ = run(capsys, "wt", "restrict", "--graph", "gamma(1,2)", "--weighting", w, "--edge", "1", "--side", "left")
    assert code == 0 and json.loads(text)["w"] == {"0": 1, "1": 2}


@pytest.mark.parametrize("method", ["auto", "search"])
def test_factor(tmp_path, capsys, method):
    w = write_json(tmp_path / "w.json", {"graph": "b2", "level": 3, "w": {"0": 2, "1": 3, "2": 1, "3": 2}})
    code, text, _ = run(capsys, "factor", "--graph", "b2", "--weighting", w, "--method", method)
    assert code == 0
    data = json.loads(text)
    jsonschema.validate(data, schemas.FACTORIZATION)
    total = [sum(p["w"][str(e)] for p in data["parts"]) for e in range(4)]
    assert total == [2, 3, 1, 2] and sum(p["level"] for p in data["parts"]) == 3


def test_factor_search_none(tmp_path, capsys):
    w = write_json(tmp_path / "w.json", {"graph": "b1", "level": 2, "w": {"0": 1, "1": 2}})
    code, _, err = run(capsys, "factor", "--graph", "b1", "--weighting", w, "--method", "search", "--max-degree", "1")
    assert code == 1 and "no factorization" in err


def test_verify_gen_and_rel(capsys):
    code, text, _ = run(capsys, "verify", "gen", "--graph", "gamma(1,2)", "--lmax", "3")
    report = json.loads(text)
    jsonschema.validate(report, schemas.REPORT)
    assert code == 0 and report["status"] == "pass"
    code, text, _ = run(capsys, "verify", "rel", "--graph", "b2", "--dmax", "4", "--move-bound", "4")
    report = json.loads(text)
    jsonschema.validate(report, schemas.REPORT)
    assert code == 0 and report["summary"]["fail"] == 0
    code, text, _ = run(capsys, "verify", "rel", "--graph", "b2", "--dmax", "4", "--move-bound", "1", "--format", "csv")
    assert code == 1 and text.splitlines()[1].endswith(",fail")


def test_verify_gen_failure_exit(capsys):
    code, _, err = run(capsys, "verify", "gen", "--graph", "b1", "--lmax", "2", "--max-degree", "1")
    assert code == 1 and "fail" in err


def test_relations_and_b2(capsys):
    code, text, _ = run(capsys, "relations", "find", "--graph", "b2")
    data = json.loads(text)
    jsonschema.validate(data, schemas.REPORT)
    assert code == 0 and data["max_degree"] == 4 and data["moves"]
    code, text, _ = run(capsys, "b2", "analyze")
    data = json.loads(text)
    jsonschema.validate(data, schemas.REPORT)
    assert code == 0 and data["point_count"] == 8


def test_reports_byte_identical_across_jobs(tmp_path, capsys):
    outs = []
    for jobs in ("1", "3"):
        out = tmp_path / f"r{jobs}.json"
        run(capsys, "verify", "rel", "--graph", "gamma(1,2)", "--dmax", "4", "--jobs", jobs, "--seed", jobs, "--out", str(out))
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("graph = b2\nlevel = 2\n")
    assert run(capsys, "enum", "--config", str(cfg), "--count-only")[:2] == (0, "8\n")
    assert run(capsys, "enum", "--config", str(cfg), "--level", "1", "--count-only")[:2] == (0, "2\n")


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "cblocks", "enum", "--graph", "b2", "--level", "1", "--count-only"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "2\n"
