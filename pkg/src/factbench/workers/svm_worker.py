"""SVM baseline as an external backend process.

Train mode runs the grid search on the manifest's train/validation files and
saves the selected model to the output path. Predict mode loads that model
and emits one prediction per input sentence with the decision margin as the
score.
"""

from __future__ import annotations

import argparse
import sys

from ..backends import (
    MODE_TRAIN,
    Prediction,
    read_job_data,
    read_job_manifest,
    write_predictions,
)
from ..svm import SvmHyperparams, default_grid, grid_search, load_model, predict_text, save_model


def _grid_from_config(config: dict) -> list[SvmHyperparams]:
    rows = config.get("grid")
    if not rows:
        return default_grid()
    return [
        SvmHyperparams(
            c=float(row["c"]),
            class_weight=row.get("class_weight", "uniform"),
            max_iterations=int(row.get("max_iterations", 1000)),
            tolerance=float(row.get("tolerance", 1e-4)),
        )
        for row in rows
    ]


def run(manifest_path: str) -> int:
    manifest = read_job_manifest(manifest_path)
    if manifest.mode == MODE_TRAIN:
        train = read_job_data(manifest.train_path)
        validation = read_job_data(manifest.validation_path)
        result = grid_search(
            train,
            validation,
            _grid_from_config(manifest.config),
            ngram_range=tuple(manifest.config.get("ngram_range", (1, 3))),
            min_df=int(manifest.config.get("min_df", 1)),
        )
        save_model(result.model, manifest.output_path)
        print(f"selected {result.chosen} with validation F1 {result.val_f1:.4f}")
    else:
        model_path = manifest.config.get("model_path")
        if not model_path:
            raise ValueError("predict manifest config must carry model_path")
        model = load_model(model_path)
        records = read_job_data(manifest.predict_path)
        predictions = []
        for rec in records:
            label, margin = predict_text(model, rec.text)
            predictions.append(
                Prediction(doc_id=rec.doc_id, sent_index=rec.sent_index,
                           predicted=label, score=margin)
            )
        write_predictions(predictions, manifest.output_path)
        print(f"predicted {len(predictions)} sentences")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="factbench-svm-backend")
    parser.add_argument("--manifest", required=True)
    args = parser.parse_args(argv)
    try:
        return run(args.manifest)
    except Exception as exc:  # backend contract: diagnostics on stderr, exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
