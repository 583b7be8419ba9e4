import csv
import io

import pytest
import yaml

from stabset.cli import main
from stabset.graph import format_dimacs, gen_random


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_solve_exact_to_stdout(capsys):
    assert main(["solve", "--instance", "paley61", "--solver", "exact"]) == 0
    (rec,) = rows(capsys.readouterr().out)
    assert (rec["alpha"], rec["best_card"], rec["optimal"]) == ("5", "5", "true")


def test_solve_sa_to_file(tmp_path):
    out, samples = tmp_path / "o.csv", tmp_path / "s.jsonl"
    code = main([
        "solve", "--instance", "torus:3x4", "--solver", "sa", "--beta", "10",
        "--reads", "8", "--sweeps", "30", "--seed", "3", "--out", str(out), "--samples", str(samples),
    ])
    assert code == 0
    (rec,) = rows(out.read_text())
    assert (rec["solver"], rec["beta"], rec["reads"]) == ("sa", "10", "8")
    assert len(samples.read_text().splitlines()) == 8


def test_solve_dimacs_path_with_complement(tmp_path, capsys):
    p = tmp_path / "k.col"
    p.write_text("p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n")
    assert main(["solve", "--instance", str(p), "--solver", "exact", "--complement"]) == 0
    (rec,) = rows(capsys.readouterr().out)
    assert (rec["m"], rec["alpha"]) == ("0", "4")


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--instance", "unknown_graph"],
        ["solve", "--instance", "DSJC125.5", "--data-dir", "/nonexistent"],
        ["export", "--instance", "paley:12"],
        ["solve", "--instance", "paley61", "--beta", "0"],
    ],
)
def test_errors_exit_nonzero(argv, capsys, monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("STABSET_DATA", raising=False)
    assert main(argv) != 0
    assert "error" in capsys.readouterr().err


def test_parse_error_exit_nonzero(tmp_path, capsys):
    p = tmp_path / "bad.col"
    p.write_text("p edge 3 1\ne 1 9\n")
    assert main(["export", "--instance", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_export(capsys, tmp_path):
    assert main(["export", "--instance", "complete:2", "--beta", "1"]) == 0
    assert capsys.readouterr().out == "2 3\n0 0 -1\n1 1 -1\n0 1 2\n"
    out = tmp_path / "q.jsonl"
    assert main(["export", "--instance", "paley61", "--beta", "10", "--format", "jsonl", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 61 + 915


def test_bench(tmp_path, capsys):
    cfg = tmp_path / "bench.yaml"
    cfg.write_text(yaml.safe_dump({
        "instances": ["paley:13", "random:14:0.3:2"],
        "betas": [1, 100],
        "reads": 10, "sweeps": 30, "restarts": 2,
        "out": str(tmp_path / "r.csv"),
        "tables": str(tmp_path / "t.md"),
    }))
    assert main(["bench", "--config", str(cfg)]) == 0
    assert len(rows((tmp_path / "r.csv").read_text())) == 2 * 3 * 2
    assert "percentage of samples" in (tmp_path / "t.md").read_text()
    assert main(["bench", "--config", str(cfg), "--out", str(tmp_path / "b.csv"), "--jobs", "2"]) == 0
    strip = lambda t: [{k: v for k, v in d.items() if k != "wall_ms"} for d in rows(t)]
    assert strip((tmp_path / "r.csv").read_text()) == strip((tmp_path / "b.csv").read_text())


def test_bench_error_rows_exit_nonzero(tmp_path, capsys):
    cfg = tmp_path / "bench.yaml"
    cfg.write_text(yaml.safe_dump({"instances": ["nope", "paley:13"], "betas": [1], "solvers": ["exact"]}))
    assert main(["bench", "--config", str(cfg)]) == 2
    captured = capsys.readouterr()
    assert len(rows(captured.out)) == 2
    assert "nope" in captured.err


def test_bench_bad_config(tmp_path):
    cfg = tmp_path / "bench.yaml"
    cfg.write_text(yaml.safe_dump({"instances": ["paley:13"], "solvers": ["qpu"]}))
    assert main(["bench", "--config", str(cfg)]) == 2
