"""Cross-domain transfer benchmark for sentence-level fact classification.

Three differently-annotated corpora of legal decisions are harmonized into a
single binary task (does a sentence state factual circumstances?), models are
trained on every pool of training sets, and the pool x target F1 transfer
matrix is produced, with pluggable external model backends.
"""

from .corpus import (
    BVA,
    CB,
    ISC,
    Corpus,
    Document,
    MetaLabel,
    SentenceRecord,
    read_corpus_jsonl,
    write_corpus_jsonl,
)
from .matrix import Pool, TransferMatrix, enumerate_pools, render_report, run_transfer_matrix
from .metrics import ConfusionCounts, Metrics, confusion, prf1
from .recast import LabelMapping, label_distribution, load_mapping, recast_corpus
from .splits import Fold, SplitAssignment, assign_splits, materialize_fold
from .svm import LinearModel, SvmHyperparams, grid_search, predict, train_linear_svm
from .synth import SynthSpec, generate_synthetic, make_twin_specs

__version__ = "0.1.0"

__all__ = [
    "BVA",
    "CB",
    "ISC",
    "ConfusionCounts",
    "Corpus",
    "Document",
    "Fold",
    "LabelMapping",
    "LinearModel",
    "MetaLabel",
    "Metrics",
    "Pool",
    "SentenceRecord",
    "SplitAssignment",
    "SvmHyperparams",
    "SynthSpec",
    "TransferMatrix",
    "assign_splits",
    "confusion",
    "enumerate_pools",
    "generate_synthetic",
    "grid_search",
    "label_distribution",
    "load_mapping",
    "make_twin_specs",
    "materialize_fold",
    "predict",
    "prf1",
    "read_corpus_jsonl",
    "recast_corpus",
    "render_report",
    "run_transfer_matrix",
    "train_linear_svm",
    "write_corpus_jsonl",
]
