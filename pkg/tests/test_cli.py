import csv
import json

import pytest

from hl2lab import cli
from hl2lab.cli import main


def run(tmp_path, *args, sub="out"):
    out = tmp_path / sub
    code = main([*args, "--out", str(out)])
    return code, out


def read_csv(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def snapshot(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def test_lift_k4(tmp_path):
    code, out = run(tmp_path, "lift", "--levels", "3")
    assert code == 0
    rows = read_csv(out / "tower.csv")
    got = [(int(r["vertices"]), r["degree"], int(r["edges"])) for r in rows]
    assert got == [(4, "3", 6), (12, "4", 24), (48, "6", 144), (288, "10", 1440)]
    assert all(r["recurrence_ok"] == "true" for r in rows)
    from hl2lab import hl2_tower, make_complete
    from hl2lab.graphio import read_graph
    assert read_graph(out / "level_3.edges") == hl2_tower(make_complete(4), 3)[0][3]


def test_lift_bipartite_base_splits(tmp_path):
    code, out = run(tmp_path, "lift", "--base", "cycle:4", "--levels", "1")
    assert code == 0
    assert [int(r["components"]) for r in read_csv(out / "tower.csv")] == [1, 2]


def test_lift_budget_exit(tmp_path, capsys):
    code, out = run(tmp_path, "lift", "--levels", "5", "--budget", "1000")
    assert code == 3
    rows = read_csv(out / "tower.csv")
    assert [int(r["vertices"]) for r in rows] == [4, 12, 48, 288, 2880, 51840]
    assert rows[-1]["predicted"] == "true" and int(rows[-1]["edges"]) == 881280
    assert "budget" in capsys.readouterr().err


@pytest.mark.parametrize("args", [
    ["lift", "--base", "complete:x"],
    ["lift", "--base", "wheel:5"],
    ["lift", "--k", "0"],
    ["walk", "--start", "9"],
    ["lift", "--base", "rr:3,7"],
    ["lift", "--base", "file:/nonexistent/graph.txt"],
])
def test_config_errors(tmp_path, args):
    assert run(tmp_path, *args)[0] == 2


def test_bad_graph_file(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("3 2\n0 1\n1 1\n")
    assert run(tmp_path, "lift", "--base", f"file:{f}")[0] == 2


def test_file_base(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("# triangle\n3 3\n0 1\n1 2\n2 0\n")
    code, out = run(tmp_path, "lift", "--base", f"file:{f}", "--levels", "1")
    assert code == 0
    assert [int(r["vertices"]) for r in read_csv(out / "tower.csv")] == [3, 6]


def test_walk_and_stats(tmp_path):
    code, out = run(tmp_path, "walk", "--level", "0")
    assert code == 0
    body = (out / "walk_level0.csv").read_text().splitlines()
    assert body[1] == "t,p_return" and len(body) == 2 + 400
    stats = json.loads((out / "walk_level0_stats.json").read_text())
    assert set(stats["meta"]) == {"artifact", "version", "config_hash"}
    assert stats["data"]["mean"] == pytest.approx(0.633, abs=0.02)


def test_walk_budget_and_sample(tmp_path):
    assert run(tmp_path, "walk", "--level", "2", "--walk-budget", "20")[0] == 3
    code, out = run(tmp_path, "walk", "--level", "2", "--walk-budget", "20", "--sample", "20", "--steps", "50")
    assert code == 0
    assert len((out / "walk_level2.csv").read_text().splitlines()) == 52


def test_coherence_tables(tmp_path):
    code, out = run(tmp_path, "coherence", "--levels", "2")
    assert code == 0
    rows = read_csv(out / "coherence.csv")
    assert [int(r["Nodes"]) for r in rows] == [4, 12, 48]
    assert float(rows[0]["Purity"]) == pytest.approx(0.16)
    assert float(rows[2]["Purity"]) == pytest.approx(0.2)
    assert (out / "log_coherence.csv").exists()
    data = json.loads((out / "coherence.json").read_text())["data"]
    assert data[0]["trace_mode"] == "paper"


def test_structural_table(tmp_path):
    code, out = run(tmp_path, "structural", "--levels", "1")
    assert code == 0
    data = json.loads((out / "structural.json").read_text())["data"]
    assert data[0]["trace_a4"] == 84 and data[1]["triangle_count"] == 8


def test_spectrum_with_rule(tmp_path):
    code, out = run(tmp_path, "spectrum", "--base", "petersen", "--levels", "2", "--verify-rule", "-v")
    assert code == 0
    rule = read_csv(out / "spectrum_rule.csv")
    assert len(rule) == 2 and all(r["match"] == "true" for r in rule)
    assert "displayed_rule_distinct" in rule[0]


def test_spectrum_predict_only(tmp_path):
    code, out = run(tmp_path, "spectrum", "--levels", "5", "--predict-only")
    assert code == 0
    rows = read_csv(out / "spectrum.csv")
    assert rows[5]["source"] == "predicted"
    assert rows[5]["distinct_eigenvalues"].split(";") == [str(x) for x in range(34, -3, -2)]


def test_spectrum_rule_mismatch_exit(tmp_path, monkeypatch):
    real = cli.predict_lift_spectrum
    monkeypatch.setattr(cli, "predict_lift_spectrum", lambda *a, **kw: real(*a, **kw) + 0.5)
    assert run(tmp_path, "spectrum", "--levels", "1", "--verify-rule")[0] == 5


def test_irregular_spectrum_is_built(tmp_path):
    code, out = run(tmp_path, "spectrum", "--base", "er:12,0.3,1", "--levels", "2")
    assert code == 0
    assert [r["source"] for r in read_csv(out / "spectrum.csv")] == ["dense"] * 3


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# tiny run\nbase = cycle:5\nlevels = 2\nk = 3\n")
    code, out = run(tmp_path, "lift", "--config", str(cfg), "--levels", "1")
    assert code == 0
    assert [int(r["vertices"]) for r in read_csv(out / "tower.csv")] == [5, 10]
    cfg.write_text("levels = many\n")
    assert run(tmp_path, "lift", "--config", str(cfg))[0] == 2
    cfg.write_text("colour = blue\n")
    assert run(tmp_path, "lift", "--config", str(cfg))[0] == 2


def test_header_carries_config_hash(tmp_path):
    _, a = run(tmp_path, "lift", "--levels", "1", sub="a")
    _, b = run(tmp_path, "lift", "--levels", "1", "--seed", "9", sub="b")
    ha = (a / "tower.csv").read_text().splitlines()[0]
    hb = (b / "tower.csv").read_text().splitlines()[0]
    assert ha.startswith("# hl2lab ") and ha != hb


@pytest.mark.parametrize("args", [
    ["report", "--levels", "2"],
    ["coherence", "--base", "rr:3,20,1", "--levels", "1"],
    ["walk", "--base", "er:20,0.1,0", "--level", "1", "--steps", "40"],
])
def test_rerun_byte_identical(tmp_path, args):
    assert run(tmp_path, *args, sub="a")[0] == 0
    assert run(tmp_path, *args, sub="b")[0] == 0
    assert snapshot(tmp_path / "a") == snapshot(tmp_path / "b")


def test_report_contents(tmp_path):
    code, out = run(tmp_path, "report", "--levels", "2")
    assert code == 0
    md = (out / "report.md").read_text()
    assert md.startswith("<!--") and "| " in md
    for name in ["tower.csv", "spectrum.csv", "coherence.csv", "structural.csv", "walk_level2.csv"]:
        assert (out / name).exists()


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "hl2lab", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "hl2lab" in res.stdout
