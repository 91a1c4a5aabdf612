from __future__ import annotations

import json
import sys

from factbench.cli import EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, run
from factbench.corpus import read_corpus_jsonl


def small_run_config(tmp_path, data_dir, backends=None):
    config = {
        "seed": "cli-1",
        "ratios": [0.5, 0.25, 0.25],
        "datasets": {
            "synthA": {"path": str(data_dir / "synthA.jsonl"), "format": "jsonl"},
            "synthB": {"path": str(data_dir / "synthB.jsonl"), "format": "jsonl"},
        },
        "svm": {"grid": [{"c": 1.0}, {"c": 1.0, "class_weight": "balanced"}]},
        "backends": backends or [{"backend_id": "svm", "kind": "svm"}],
        "out_dir": str(tmp_path / "run"),
    }
    path = tmp_path / "run.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


def test_no_arguments_prints_usage_and_exits_64(capsys):
    assert run([]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_flag_exits_64(capsys):
    assert run(["matrix", "--bogus"]) == EXIT_USAGE


def test_unknown_subcommand_exits_64(capsys):
    assert run(["frobnicate"]) == EXIT_USAGE


def test_synth_writes_twin_corpora(tmp_path, capsys):
    out = tmp_path / "data"
    code = run(["synth", "--out-dir", str(out), "--seed", "cli-1", "--overlap", "1.0",
                "--docs", "8"])
    assert code == EXIT_OK
    a = read_corpus_jsonl(out / "synthA.jsonl")
    b = read_corpus_jsonl(out / "synthB.jsonl")
    assert a.n_documents == 8 and b.n_documents == 8
    assert all(r.meta_label is not None for r in a.sentences())


def test_matrix_and_report_end_to_end(tmp_path, capsys):
    data = tmp_path / "data"
    assert run(["synth", "--out-dir", str(data), "--seed", "cli-1", "--docs", "10"]) == EXIT_OK
    config = small_run_config(tmp_path, data)
    assert run(["matrix", "--config", str(config)]) == EXIT_OK
    run_dir = tmp_path / "run"
    assert (run_dir / "config.json").exists()
    assert (run_dir / "split_manifest.jsonl").exists()
    capsys.readouterr()
    assert run(["report", "--run", str(run_dir), "--format", "csv"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "pool,backend,target,precision,recall,f1"
    # 3 pools x 1 backend x 2 targets = 6 data rows
    assert len(out.strip().splitlines()) == 7


def test_matrix_partial_failure_exits_2(tmp_path, capsys):
    data = tmp_path / "data"
    run(["synth", "--out-dir", str(data), "--seed", "cli-1", "--docs", "8"])
    backends = [
        {"backend_id": "svm", "kind": "svm"},
        {"backend_id": "broken", "kind": "subprocess",
         "command": [sys.executable, "-c", "import sys; sys.exit(1)"]},
    ]
    config = small_run_config(tmp_path, data, backends=backends)
    assert run(["matrix", "--config", str(config)]) == EXIT_PARTIAL


def test_ingest_recast_split_pipeline(tmp_path, bva_fixture_dir, capsys):
    corpus_path = tmp_path / "bva.jsonl"
    assert run(["ingest", "--dataset", "BVA", "--path", str(bva_fixture_dir),
                "--out", str(corpus_path)]) == EXIT_OK
    recast_path = tmp_path / "bva-recast.jsonl"
    assert run(["recast", "--in", str(corpus_path), "--out", str(recast_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Facts" in out and "Total" in out
    manifest = tmp_path / "split.jsonl"
    assert run(["split", "--in", str(recast_path), "--out", str(manifest)]) == EXIT_OK
    assert manifest.exists()


def test_train_single_pool(tmp_path, capsys):
    data = tmp_path / "data"
    run(["synth", "--out-dir", str(data), "--seed", "cli-1", "--docs", "10"])
    config = small_run_config(tmp_path, data)
    model_path = tmp_path / "model.json"
    code = run(["train", "--config", str(config), "--pool", "synthA+synthB",
                "--out", str(model_path)])
    assert code == EXIT_OK
    assert model_path.exists()
    assert "validation F1" in capsys.readouterr().out


def test_fatal_error_exits_1(tmp_path):
    assert run(["recast", "--in", str(tmp_path / "missing.jsonl"),
                "--out", str(tmp_path / "out.jsonl")]) == 1
