"""Majority-class stub backend: predicts the training majority for everything.

Useful as a protocol smoke test and as the stand-in second model family when
no real alternative backend is installed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..backends import (
    MODE_TRAIN,
    Prediction,
    read_job_data,
    read_job_manifest,
    write_predictions,
)
from ..corpus import MetaLabel


def run(manifest_path: str) -> int:
    manifest = read_job_manifest(manifest_path)
    if manifest.mode == MODE_TRAIN:
        train = read_job_data(manifest.train_path)
        n_facts = sum(rec.meta_label is MetaLabel.FACTS for rec in train)
        # ties go to NonFacts
        majority = MetaLabel.FACTS if n_facts > len(train) - n_facts else MetaLabel.NON_FACTS
        Path(manifest.output_path).write_text(
            json.dumps({"format": "majority-stub/1", "majority": majority.value}),
            encoding="utf-8",
        )
        print(f"majority class: {majority.value} ({n_facts}/{len(train)} Facts)")
    else:
        model_path = manifest.config.get("model_path")
        if not model_path:
            raise ValueError("predict manifest config must carry model_path")
        model = json.loads(Path(model_path).read_text(encoding="utf-8"))
        majority = MetaLabel(model["majority"])
        records = read_job_data(manifest.predict_path)
        write_predictions(
            [Prediction(rec.doc_id, rec.sent_index, majority, 0.0) for rec in records],
            manifest.output_path,
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="factbench-stub-backend")
    parser.add_argument("--manifest", required=True)
    args = parser.parse_args(argv)
    try:
        return run(args.manifest)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
