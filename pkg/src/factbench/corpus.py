"""Core corpus model: sentences, documents, corpora, and the JSONL interchange format.

The interchange format is the contract every other component (splitters,
backends, external tools) reads and writes: UTF-8 JSON Lines, one object per
sentence with keys ``dataset, doc_id, sent_index, text, source_label,
meta_label`` (``null`` when unset), lines sorted by ``(doc_id, sent_index)``.
Serialization is canonical (fixed key order, compact separators) so equal
corpora produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

BVA = "BVA"
CB = "CB"
ISC = "ISC"
KNOWN_DATASETS = (BVA, CB, ISC)


class MetaLabel(str, Enum):
    FACTS = "Facts"
    NON_FACTS = "NonFacts"


class CorpusError(ValueError):
    """Raised when corpus data violates a structural invariant."""


@dataclass(frozen=True)
class SentenceRecord:
    dataset_id: str
    doc_id: str
    sent_index: int
    text: str
    source_label: str
    meta_label: MetaLabel | None = None

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise CorpusError(
                f"empty sentence text: {self.dataset_id}/{self.doc_id}[{self.sent_index}]"
            )
        if self.sent_index < 0:
            raise CorpusError(f"negative sent_index in {self.doc_id}")

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.dataset_id, self.doc_id, self.sent_index)


@dataclass(frozen=True)
class Document:
    dataset_id: str
    doc_id: str
    sentences: tuple[SentenceRecord, ...]

    def __post_init__(self) -> None:
        if not self.sentences:
            raise CorpusError(f"document {self.doc_id} has no sentences")
        for pos, rec in enumerate(self.sentences):
            if rec.doc_id != self.doc_id or rec.dataset_id != self.dataset_id:
                raise CorpusError(f"sentence {rec.key} filed under document {self.doc_id}")
            if rec.sent_index != pos:
                raise CorpusError(
                    f"document {self.doc_id}: sent_index {rec.sent_index} at position {pos}"
                )


@dataclass(frozen=True)
class Provenance:
    source: str
    reader: str


@dataclass(frozen=True)
class Corpus:
    dataset_id: str
    documents: tuple[Document, ...]
    provenance: Provenance = field(default=Provenance(source="<memory>", reader="in-memory"))

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for doc in self.documents:
            if doc.dataset_id != self.dataset_id:
                raise CorpusError(
                    f"document {doc.doc_id} of dataset {doc.dataset_id} "
                    f"in corpus {self.dataset_id}"
                )
            if doc.doc_id in seen:
                raise CorpusError(f"duplicate doc_id {doc.doc_id!r}")
            seen.add(doc.doc_id)

    @property
    def n_documents(self) -> int:
        return len(self.documents)

    @property
    def n_sentences(self) -> int:
        return sum(len(doc.sentences) for doc in self.documents)

    def sentences(self) -> list[SentenceRecord]:
        """All sentences in (doc_id, sent_index) order."""
        out: list[SentenceRecord] = []
        for doc in self.documents:
            out.extend(doc.sentences)
        return out

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.doc_id == doc_id:
                return doc
        raise KeyError(doc_id)


def build_corpus(
    dataset_id: str,
    records: Iterable[SentenceRecord],
    provenance: Provenance | None = None,
) -> Corpus:
    """Group records into documents sorted by doc_id; records may arrive in any order.

    Within a document, records are ordered by sent_index, which must be
    contiguous from 0.
    """
    by_doc: dict[str, list[SentenceRecord]] = {}
    for rec in records:
        if rec.dataset_id != dataset_id:
            raise CorpusError(f"record {rec.key} does not belong to dataset {dataset_id}")
        by_doc.setdefault(rec.doc_id, []).append(rec)
    docs = []
    for doc_id in sorted(by_doc):
        sents = tuple(sorted(by_doc[doc_id], key=lambda r: r.sent_index))
        docs.append(Document(dataset_id=dataset_id, doc_id=doc_id, sentences=sents))
    kwargs = {} if provenance is None else {"provenance": provenance}
    return Corpus(dataset_id=dataset_id, documents=tuple(docs), **kwargs)


def with_meta_labels(corpus: Corpus, labels: dict[tuple[str, str, int], MetaLabel]) -> Corpus:
    """Return a copy of the corpus with meta labels attached per sentence key."""
    docs = []
    for doc in corpus.documents:
        sents = tuple(replace(rec, meta_label=labels[rec.key]) for rec in doc.sentences)
        docs.append(Document(dataset_id=doc.dataset_id, doc_id=doc.doc_id, sentences=sents))
    return Corpus(
        dataset_id=corpus.dataset_id, documents=tuple(docs), provenance=corpus.provenance
    )


# --- interchange format ----------------------------------------------------

def record_to_json(rec: SentenceRecord) -> str:
    obj = {
        "dataset": rec.dataset_id,
        "doc_id": rec.doc_id,
        "sent_index": rec.sent_index,
        "text": rec.text,
        "source_label": rec.source_label,
        "meta_label": None if rec.meta_label is None else rec.meta_label.value,
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def record_from_json(line: str, include_meta: bool = True) -> SentenceRecord:
    obj = json.loads(line)
    meta = obj.get("meta_label")
    return SentenceRecord(
        dataset_id=obj["dataset"],
        doc_id=obj["doc_id"],
        sent_index=int(obj["sent_index"]),
        text=obj["text"],
        source_label=obj["source_label"],
        meta_label=MetaLabel(meta) if (include_meta and meta is not None) else None,
    )


def records_to_jsonl(records: Sequence[SentenceRecord]) -> str:
    """Canonical serialization: lines sorted by (dataset, doc_id, sent_index)."""
    ordered = sorted(records, key=lambda r: r.key)
    return "".join(record_to_json(rec) + "\n" for rec in ordered)


def read_records_jsonl(path: str | Path) -> list[SentenceRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(record_from_json(line))
            except (KeyError, ValueError) as exc:
                raise CorpusError(f"{path}:{lineno}: bad interchange row: {exc}") from exc
    return records


def write_corpus_jsonl(corpus: Corpus, path: str | Path) -> None:
    Path(path).write_text(records_to_jsonl(corpus.sentences()), encoding="utf-8")


def read_corpus_jsonl(path: str | Path) -> Corpus:
    records = read_records_jsonl(path)
    if not records:
        raise CorpusError(f"empty corpus: {path}")
    datasets = {rec.dataset_id for rec in records}
    if len(datasets) != 1:
        raise CorpusError(f"{path} mixes datasets {sorted(datasets)}; expected one corpus")
    return build_corpus(
        records[0].dataset_id,
        records,
        provenance=Provenance(source=str(path), reader="jsonl/1"),
    )
