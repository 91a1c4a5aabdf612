"""Tokenization and (1-3)-gram TF-IDF features over training sentences.

The vocabulary assigns dense indices in lexicographic n-gram order, so a
given training set always produces the same feature space. Weights use the
smoothed formula ``tf * (ln((1 + N) / (1 + df)) + 1)`` with ``N`` the number
of training sentences, followed by L2 normalization.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# maximal runs of Unicode letters/digits (underscore excluded), lowercased
_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


class FeatureError(ValueError):
    """Raised for unusable training input."""


def tokenize(text: str) -> list[str]:
    return [m.group(0).lower() for m in _TOKEN.finditer(text)]


def ngrams(tokens: Sequence[str], ngram_range: tuple[int, int]) -> list[str]:
    lo, hi = ngram_range
    out = []
    for n in range(lo, hi + 1):
        out.extend(" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1))
    return out


@dataclass(frozen=True)
class Vocabulary:
    index: dict[str, int]
    document_frequency: np.ndarray  # int64, aligned with index values
    n_train_sentences: int
    ngram_range: tuple[int, int]
    min_df: int

    @property
    def size(self) -> int:
        return len(self.index)

    def idf(self, feature: int) -> float:
        df = int(self.document_frequency[feature])
        return math.log((1 + self.n_train_sentences) / (1 + df)) + 1.0


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray  # int32, strictly increasing
    values: np.ndarray  # float64, finite

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values must align")

    @property
    def nnz(self) -> int:
        return len(self.indices)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def dense(self, dim: int) -> np.ndarray:
        out = np.zeros(dim)
        out[self.indices] = self.values
        return out


def _texts(train: Iterable) -> list[str]:
    return [getattr(item, "text", item) for item in train]


def fit_vocabulary(
    train: Iterable, ngram_range: tuple[int, int] = (1, 3), min_df: int = 1
) -> Vocabulary:
    """Build the vocabulary of n-grams whose sentence-level df >= min_df."""
    texts = _texts(train)
    if not texts:
        raise FeatureError("cannot fit a vocabulary on an empty training set")
    df: Counter[str] = Counter()
    for text in texts:
        df.update(set(ngrams(tokenize(text), ngram_range)))
    kept = sorted(g for g, count in df.items() if count >= min_df)
    if not kept:
        raise FeatureError("training set produced no n-grams at the requested min_df")
    index = {gram: i for i, gram in enumerate(kept)}
    frequencies = np.array([df[gram] for gram in kept], dtype=np.int64)
    return Vocabulary(
        index=index,
        document_frequency=frequencies,
        n_train_sentences=len(texts),
        ngram_range=ngram_range,
        min_df=min_df,
    )


def vectorize(text: str, vocab: Vocabulary) -> SparseVector:
    """TF-IDF vector for one sentence; out-of-vocabulary n-grams are ignored."""
    counts: Counter[int] = Counter()
    for gram in ngrams(tokenize(text), vocab.ngram_range):
        feature = vocab.index.get(gram)
        if feature is not None:
            counts[feature] += 1
    if not counts:
        return SparseVector(np.empty(0, dtype=np.int32), np.empty(0, dtype=np.float64))
    indices = np.array(sorted(counts), dtype=np.int32)
    values = np.array([counts[i] * vocab.idf(i) for i in indices], dtype=np.float64)
    norm = np.sqrt(np.dot(values, values))
    if norm > 0.0:
        values = values / norm
    return SparseVector(indices=indices, values=values)


@dataclass(frozen=True)
class CsrMatrix:
    """Row-major sparse matrix: the concatenation of SparseVectors."""

    indptr: np.ndarray  # int64, len n_rows + 1
    indices: np.ndarray  # int32
    data: np.ndarray  # float64
    n_features: int

    @property
    def n_rows(self) -> int:
        return len(self.indptr) - 1

    @classmethod
    def from_vectors(cls, vectors: Sequence[SparseVector], n_features: int) -> "CsrMatrix":
        indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
        for i, vec in enumerate(vectors):
            indptr[i + 1] = indptr[i] + vec.nnz
        indices = np.concatenate([v.indices for v in vectors]) if vectors else np.empty(0, np.int32)
        data = np.concatenate([v.values for v in vectors]) if vectors else np.empty(0, np.float64)
        return cls(
            indptr=indptr,
            indices=indices.astype(np.int32),
            data=data.astype(np.float64),
            n_features=n_features,
        )

    def row(self, i: int) -> SparseVector:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return SparseVector(indices=self.indices[lo:hi], values=self.data[lo:hi])


def vectorize_all(texts: Iterable, vocab: Vocabulary) -> CsrMatrix:
    vectors = [vectorize(t, vocab) for t in _texts(texts)]
    return CsrMatrix.from_vectors(vectors, n_features=vocab.size)
