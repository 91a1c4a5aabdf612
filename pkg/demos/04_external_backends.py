#!/usr/bin/env python3
"""The pluggable backend protocol, step by step.

Any executable that accepts `--manifest <path>`, reads the referenced JSONL
files, and writes predictions can participate in the transfer matrix. This
walks the bundled majority-class stub through one train job and one predict
job, showing every file that crosses the process boundary.
"""

import tempfile
from pathlib import Path

from factbench.backends import (
    invoke_backend,
    parse_predictions,
    stub_backend_registration,
    write_job_manifest,
)
from factbench.splits import Fold, assign_splits, materialize_fold
from factbench.synth import generate_synthetic, make_twin_specs

work = Path(tempfile.mkdtemp(prefix="factbench-demo-"))
spec, _ = make_twin_specs(overlap=1.0, seed="demo-4", n_documents=6)
corpus = generate_synthetic(spec)
assignment = assign_splits(corpus, seed="demo-4")
train = materialize_fold(corpus, assignment, Fold.TRAIN)
validation = materialize_fold(corpus, assignment, Fold.VALIDATION)
test = materialize_fold(corpus, assignment, Fold.TEST)

registration = stub_backend_registration()
print(f"backend command: {' '.join(registration.command)} --manifest <path>")

train_manifest = write_job_manifest(
    "demo-train", "train", work / "train-job", train=train, validation=validation
)
print(f"\ntrain manifest: {train_manifest}")
print(train_manifest.read_text(encoding="utf-8"))
model_path = invoke_backend(registration, train_manifest)
print(f"backend produced model artifact: {model_path}")
print(model_path.read_text(encoding="utf-8"))

predict_manifest = write_job_manifest(
    "demo-predict", "predict", work / "predict-job",
    predict=test, config={"model_path": str(model_path)},
)
output = invoke_backend(registration, predict_manifest)
predictions = parse_predictions(output, expected={(r.doc_id, r.sent_index) for r in test})
print(f"\n{len(predictions)} predictions, first three rows:")
for pred in predictions[:3]:
    print(f"  {pred.doc_id}[{pred.sent_index}] -> {pred.predicted.value} ({pred.score})")

gold_facts = sum(r.meta_label.value == "Facts" for r in test)
print(f"\nstub predicted the training majority for all {len(test)} sentences "
      f"({gold_facts} of them are actually Facts)")
print("note: the predict job's data file carries no gold labels -")
print((work / "predict-job" / "predict.jsonl").read_text(encoding="utf-8").splitlines()[0])
