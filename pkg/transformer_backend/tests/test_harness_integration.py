"""End-to-end: the harness drives this backend through the file protocol.

Runs only when the factbench harness is installed alongside; the interaction
still crosses a process boundary, exactly as in production.
"""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

factbench_cli = pytest.importorskip("factbench.cli", reason="factbench harness not installed")


def test_matrix_with_transformer_backend(tmp_path, tiny_model_dir):
    data = tmp_path / "data"
    assert factbench_cli.run(["synth", "--out-dir", str(data), "--seed", "itg-1",
                              "--docs", "6"]) == 0
    config = {
        "seed": "itg-1",
        "datasets": {
            "synthA": {"path": str(data / "synthA.jsonl"), "format": "jsonl"},
            "synthB": {"path": str(data / "synthB.jsonl"), "format": "jsonl"},
        },
        "backends": [
            {
                "backend_id": "transformer",
                "kind": "subprocess",
                "command": [sys.executable, "-m", "transformer_backend.worker"],
                "timeout": 600,
                "config": {
                    "base_model": str(tiny_model_dir),
                    "epochs": 2,
                    "batch_size": 8,
                    "max_sequence_length": 32,
                    "learning_rate": 5e-3,
                    "seed": 42,
                },
            }
        ],
        "out_dir": str(tmp_path / "run"),
    }
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    assert factbench_cli.run(["matrix", "--config", str(config_path)]) == 0

    metrics = json.loads((tmp_path / "run" / "metrics.json").read_text(encoding="utf-8"))
    cells = metrics["cells"]
    assert len(cells) == 6  # 3 pools x 2 targets
    assert all(cell["error"] is None for cell in cells)
    assert all(0.0 <= cell["f1"] <= 1.0 for cell in cells)
    # training artifacts live in the run registry
    log = (tmp_path / "run" / "cells" / "transformer" / "synthA" / "train"
           / "model" / "training_log.json")
    assert log.exists()
