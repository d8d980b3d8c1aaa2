import csv
import json

import pytest

from polytor.cli import main

E2 = '{"family": "euclidean", "dim": 2}'


def test_run_missing_config(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2
    assert "does not exist" in capsys.readouterr().err


def test_run_bad_json_reports_line(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"checks": [\n oops ]}')
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "line 2" in capsys.readouterr().err


def test_run_filter_and_outputs(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": 1, "checks": [
        {"name": "lemma1_tiny", "kind": "lemma1_bridge", "space": {"family": "euclidean", "dim": 2},
         "params": {"q": [2]}, "instances": {"count": 3, "n": 2, "m": 2}},
        {"name": "kahane_tiny", "kind": "kahane", "space": {"family": "euclidean", "dim": 2},
         "instances": {"count": 3, "n": 2, "m": 2, "m_min": 1, "homogeneous": True}},
    ]}))
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--filter", "lemma1*", "--out", str(out), "--jobs", "1"]) == 0
    bundle = json.loads((out / "results.json").read_text())
    assert [c["name"] for c in bundle["payload"]["checks"]] == ["lemma1_tiny"]
    with (out / "summary.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert rows and {r["check"] for r in rows} == {"lemma1_tiny"}
    assert set(rows[0]) >= {"name", "lhs", "rhs", "constant", "margin", "pass"}


def test_run_seed_flag_beats_env(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": 1, "checks": [
        {"name": "kahane_tiny", "kind": "kahane", "space": {"family": "ellp", "p": 1, "dim": 2},
         "instances": {"count": 3, "n": 2, "m": 2, "m_min": 1, "homogeneous": True}}]}))
    monkeypatch.setenv("POLYTOR_SEED", "99")
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "a"), "--jobs", "1"])
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "b"), "--seed", "99", "--jobs", "1"])
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "c"), "--seed", "5", "--jobs", "1"])
    read = lambda d: json.loads((tmp_path / d / "results.json").read_text())
    assert read("a")["payload"]["seed"] == 99
    assert read("a")["digest"] == read("b")["digest"] != read("c")["digest"]


def test_constants_euclidean(capsys):
    assert main(["constants", "--space", E2, "--q", "2", "--budget", "4", "--seed", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == pytest.approx(1.0, abs=1e-6) and out["name"] == "cotype C_q"


def test_constants_reproducible(capsys):
    args = ["constants", "--space", '{"family": "ellp", "p": "inf", "dim": 2}', "--p", "1.5", "--budget", "5",
            "--seed", "8"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_constants_errors():
    assert main(["constants", "--space", E2, "--q", "1.5"]) == 2
    assert main(["constants", "--space", "{not json", "--q", "2"]) == 2
    assert main(["constants", "--space", E2]) == 2


def test_tables(tmp_path):
    assert main(["tables", "--out", str(tmp_path)]) == 0
    lines = {p.name: p.read_text().splitlines() for p in tmp_path.glob("*.csv")}
    assert set(lines) == {"hilbert_growth.csv", "stirling_ratios.csv", "kahane_ratios.csv"}
    assert len(lines["hilbert_growth.csv"]) == 1 + 13
    # one row per divisor pair n = k*m, n <= 40
    assert len(lines["stirling_ratios.csv"]) == 1 + sum(sum(1 for k in range(1, n + 1) if n % k == 0)
                                                          for n in range(1, 41))
    assert len(lines["kahane_ratios.csv"]) == 1 + 3 * 3 * 2 * 2
    for row in csv.DictReader(open(tmp_path / "kahane_ratios.csv")):
        assert float(row["max_ratio"]) <= float(row["bound"]) * (1 + 1e-9)
