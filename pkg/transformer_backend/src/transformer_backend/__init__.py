"""Transformer fine-tuning backend for the factbench file-based job protocol.

Speaks only the protocol: a JSON manifest names train/validation/predict
JSONL files and an output path; training stores one checkpoint per epoch and
marks the one with the best validation F1; prediction emits one row per input
sentence with the positive-class probability as the score.
"""

__version__ = "0.1.0"
