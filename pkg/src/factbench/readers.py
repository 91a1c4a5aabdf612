"""Readers for the three source corpora.

Each reader targets the pinned public snapshot documented in the README and
falls back to the JSONL interchange format when pointed at a ``.jsonl`` file.
All input is decoded as UTF-8 with replacement and normalized to NFC so
ingestion is deterministic across platforms. Files are read independently and
merged in lexicographic doc_id order.
"""

from __future__ import annotations

import json
import logging
import unicodedata
from pathlib import Path

from .corpus import (
    BVA,
    CB,
    ISC,
    Corpus,
    Provenance,
    SentenceRecord,
    build_corpus,
    read_corpus_jsonl,
)
from .sections import (
    DEFAULT_SECTION_RULES,
    HeadingRule,
    SectionType,
    segment_brief_sections,
)
from .sentences import SentenceSplitter, split_sentences

log = logging.getLogger(__name__)

READER_VERSION = "1"

BVA_LABELS = ("Finding", "Reasoning", "Evidence", "Legal Rule", "Citation")
ISC_LABELS = (
    "Facts",
    "Ruling (lower court)",
    "Argument",
    "Ratio",
    "Statute",
    "Precedent",
    "Ruling (present court)",
)

# Spellings seen across snapshot revisions, mapped to the canonical label.
_BVA_ALIASES = {
    "FindingSentence": "Finding",
    "ReasoningSentence": "Reasoning",
    "EvidenceSentence": "Evidence",
    "LegalRuleSentence": "Legal Rule",
    "LegalRule": "Legal Rule",
    "CitationSentence": "Citation",
}
_ISC_ALIASES = {
    "Fact": "Facts",
    "RulingByLowerCourt": "Ruling (lower court)",
    "Ruling by Lower Court": "Ruling (lower court)",
    "LowerCourt": "Ruling (lower court)",
    "RulingByPresentCourt": "Ruling (present court)",
    "Ruling by Present Court": "Ruling (present court)",
    "PresentCourt": "Ruling (present court)",
    "RatioOfTheDecision": "Ratio",
    "Ratio of the decision": "Ratio",
    "ArgumentPetitioner": "Argument",
    "ArgumentRespondent": "Argument",
}


class IngestError(ValueError):
    """Raised when a source corpus cannot be read."""


def _read_text(path: Path) -> str:
    return unicodedata.normalize("NFC", path.read_bytes().decode("utf-8", errors="replace"))


def _finish(dataset_id: str, records: list[SentenceRecord], source: Path, reader: str) -> Corpus:
    corpus = build_corpus(
        dataset_id,
        records,
        provenance=Provenance(source=str(source), reader=f"{reader}/{READER_VERSION}"),
    )
    log.info(
        "ingested %s: %d documents, %d sentences from %s",
        dataset_id, corpus.n_documents, corpus.n_sentences, source,
    )
    return corpus


def _canonical_label(raw: str, known: tuple[str, ...], aliases: dict[str, str],
                     dataset_id: str, doc_id: str) -> str:
    label = raw.strip()
    label = aliases.get(label, label)
    if label not in known:
        log.warning("%s/%s: unrecognized label %r preserved verbatim", dataset_id, doc_id, raw)
    return label


def ingest_bva(path: str | Path) -> Corpus:
    """Read the veterans'-appeals decisions: one JSON file per decision.

    Each file holds a sentence list with rhetorical-role annotations. The
    document count equals the number of decision files read.
    """
    root = Path(path)
    if not root.exists():
        raise IngestError(f"BVA path does not exist: {root}")
    if root.is_file() and root.suffix == ".jsonl":
        return read_corpus_jsonl(root)
    files = sorted(root.rglob("*.json"))
    if not files:
        raise IngestError(f"empty corpus: no decision files under {root}")
    records: list[SentenceRecord] = []
    n_docs = 0
    for file in files:
        doc_id = file.stem
        try:
            payload = json.loads(_read_text(file))
        except json.JSONDecodeError:
            log.warning("BVA: %s is not valid JSON, skipped", file)
            continue
        sentences = payload.get("sentences") if isinstance(payload, dict) else payload
        if not isinstance(sentences, list) or not sentences:
            log.warning("BVA: %s carries no sentence list, skipped", file)
            continue
        idx = 0
        for row in sentences:
            if not isinstance(row, dict):
                raise IngestError(f"{file}: malformed sentence entry {row!r}")
            text = str(row.get("text") or row.get("sentence") or "").strip()
            raw_label = row.get("rhetClass") or row.get("rhetRole") or row.get("label")
            if isinstance(raw_label, list):
                raw_label = raw_label[0] if raw_label else None
            if not text:
                continue
            label = _canonical_label(str(raw_label or ""), BVA_LABELS, _BVA_ALIASES, BVA, doc_id)
            records.append(SentenceRecord(BVA, doc_id, idx, text, label))
            idx += 1
        if idx == 0:
            log.warning("BVA: %s contains no usable sentences, skipped", file)
            continue
        n_docs += 1
    if n_docs == 0:
        raise IngestError(f"empty corpus: no usable decision files under {root}")
    return _finish(BVA, records, root, "bva")


def ingest_isc(path: str | Path) -> Corpus:
    """Read the supreme-court opinions: one TSV file per document.

    Each line pairs a sentence with its rhetorical-role label; both
    `text TAB label` and `label TAB text` layouts are accepted, detected per
    file from which column matches the known label set.
    """
    root = Path(path)
    if not root.exists():
        raise IngestError(f"ISC path does not exist: {root}")
    if root.is_file() and root.suffix == ".jsonl":
        return read_corpus_jsonl(root)
    files = sorted(root.rglob("*.txt"))
    if not files:
        raise IngestError(f"empty corpus: no document files under {root}")
    known = set(ISC_LABELS) | set(_ISC_ALIASES)
    records: list[SentenceRecord] = []
    n_docs = 0
    for file in files:
        doc_id = file.stem
        rows = []
        for line in _read_text(file).splitlines():
            line = line.strip()
            if not line or "\t" not in line:
                continue
            first, rest = line.split("\t", 1)
            rows.append((first.strip(), rest.strip()))
        if not rows:
            log.warning("ISC: %s has no tab-separated sentence lines, skipped", file)
            continue
        label_first = sum(r[0] in known for r in rows) > sum(r[1] in known for r in rows)
        for idx, (first, rest) in enumerate(rows):
            raw_label, text = (first, rest) if label_first else (rest, first)
            if not text:
                raise IngestError(f"{file}: empty sentence at line {idx}")
            label = _canonical_label(raw_label, ISC_LABELS, _ISC_ALIASES, ISC, doc_id)
            records.append(SentenceRecord(ISC, doc_id, idx, text, label))
        n_docs += 1
    if n_docs == 0:
        raise IngestError(f"empty corpus: no usable document files under {root}")
    return _finish(ISC, records, root, "isc")


def ingest_casebriefs(
    path: str | Path,
    rules: tuple[HeadingRule, ...] = DEFAULT_SECTION_RULES,
    splitter: SentenceSplitter | None = None,
) -> Corpus:
    """Read archived case briefs: one text file per brief.

    Each brief is segmented into heading-delimited sections; sections whose
    heading canonicalizes to a known type are sentence-split, and each
    sentence is labeled with its section type. Briefs with no recognized
    section are skipped with a warning.
    """
    root = Path(path)
    if not root.exists():
        raise IngestError(f"case-brief path does not exist: {root}")
    if root.is_file() and root.suffix == ".jsonl":
        return read_corpus_jsonl(root)
    files = sorted(p for p in root.rglob("*") if p.is_file() and p.suffix in (".txt", ".md", ".html"))
    if not files:
        raise IngestError(f"empty corpus: no brief files under {root}")
    records: list[SentenceRecord] = []
    kept_docs = 0
    for file in files:
        doc_id = file.stem
        sections = segment_brief_sections(_read_text(file), rules)
        recognized = [s for s in sections if s.canonical is not SectionType.UNKNOWN]
        if not recognized:
            log.warning("CB/%s: no recognized sections, document skipped", doc_id)
            continue
        idx = 0
        for section in recognized:
            for sentence in split_sentences(section.body, splitter):
                records.append(SentenceRecord(CB, doc_id, idx, sentence, section.canonical.value))
                idx += 1
        if idx == 0:
            log.warning("CB/%s: recognized sections contain no sentences, document skipped", doc_id)
            continue
        kept_docs += 1
    if kept_docs == 0:
        raise IngestError(f"empty corpus: no brief under {root} yielded sentences")
    return _finish(CB, records, root, "casebriefs")
