"""Recast dataset-native label systems into the binary Facts / NonFacts task.

The mapping is declarative: a config file of `dataset.label = Facts|NonFacts`
lines plus a per-dataset `dataset.default = NonFacts|reject` directive that
governs labels absent from the mapping.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .corpus import KNOWN_DATASETS, Corpus, MetaLabel, with_meta_labels

log = logging.getLogger(__name__)

REJECT = "reject"


class MappingError(ValueError):
    """Raised for unparseable or contradictory mapping configs."""


@dataclass(frozen=True)
class DatasetMapping:
    entries: dict[str, MetaLabel]
    default: str  # MetaLabel.NON_FACTS.value or REJECT


@dataclass(frozen=True)
class LabelMapping:
    datasets: dict[str, DatasetMapping]

    def covers(self, dataset_id: str) -> bool:
        return dataset_id in self.datasets


@dataclass
class DatasetCounts:
    facts: int = 0
    non_facts: int = 0

    @property
    def total(self) -> int:
        return self.facts + self.non_facts

    def percent_facts(self) -> int:
        return round(100 * self.facts / self.total) if self.total else 0


@dataclass
class LabelDistribution:
    per_dataset: dict[str, DatasetCounts] = field(default_factory=dict)

    @property
    def pooled(self) -> DatasetCounts:
        out = DatasetCounts()
        for counts in self.per_dataset.values():
            out.facts += counts.facts
            out.non_facts += counts.non_facts
        return out

    def format_table(self) -> str:
        names = sorted(self.per_dataset)
        lines = [f"{'Label':<10}" + "".join(f"{d:>16}" for d in names) + f"{'Total':>16}"]
        rows = [
            ("Facts", lambda c: c.facts, lambda c: c.percent_facts()),
            ("Non-Facts", lambda c: c.non_facts, lambda c: 100 - c.percent_facts()),
        ]
        for name, count_of, pct_of in rows:
            cells = []
            for dataset in names:
                c = self.per_dataset[dataset]
                cells.append(f"{count_of(c):,} ({pct_of(c)}%)")
            c = self.pooled
            cells.append(f"{count_of(c):,} ({pct_of(c)}%)")
            lines.append(f"{name:<10}" + "".join(f"{cell:>16}" for cell in cells))
        totals = [f"{self.per_dataset[d].total:,}" for d in names] + [f"{self.pooled.total:,}"]
        lines.append(f"{'Total':<10}" + "".join(f"{cell:>16}" for cell in totals))
        return "\n".join(lines)


def parse_mapping(text: str, source: str = "<config>") -> LabelMapping:
    entries: dict[str, dict[str, MetaLabel]] = {}
    defaults: dict[str, str] = {}
    assigned_at: dict[tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MappingError(f"{source}:{lineno}: expected `dataset.label = value`")
        lhs, value = (part.strip() for part in line.split("=", 1))
        if "." not in lhs:
            raise MappingError(f"{source}:{lineno}: left side must be `dataset.label`")
        dataset, label = (part.strip() for part in lhs.split(".", 1))
        if dataset not in KNOWN_DATASETS:
            raise MappingError(f"{source}:{lineno}: unknown dataset {dataset!r}")
        if label == "default":
            if value not in (MetaLabel.NON_FACTS.value, REJECT):
                raise MappingError(
                    f"{source}:{lineno}: default must be NonFacts or reject, got {value!r}"
                )
            if dataset in defaults:
                raise MappingError(f"{source}:{lineno}: duplicate default for {dataset}")
            defaults[dataset] = value
            entries.setdefault(dataset, {})
            continue
        try:
            meta = MetaLabel(value)
        except ValueError as exc:
            raise MappingError(
                f"{source}:{lineno}: class must be Facts or NonFacts, got {value!r}"
            ) from exc
        key = (dataset, label)
        if key in assigned_at:
            raise MappingError(
                f"{source}:{lineno}: {dataset}.{label} already mapped at line {assigned_at[key]}"
            )
        assigned_at[key] = lineno
        entries.setdefault(dataset, {})[label] = meta
    if not entries:
        raise MappingError(f"{source}: no datasets configured")
    datasets = {}
    for dataset, mapping in entries.items():
        if dataset not in defaults:
            raise MappingError(f"{source}: dataset {dataset} has no `{dataset}.default` line")
        datasets[dataset] = DatasetMapping(entries=mapping, default=defaults[dataset])
    return LabelMapping(datasets=datasets)


def load_mapping(path: str | None = None) -> LabelMapping:
    """Load a mapping config; with no path, the shipped default mapping."""
    if path is None:
        text = resources.files("factbench.data").joinpath("label_mapping.cfg").read_text("utf-8")
        return parse_mapping(text, source="<default>")
    return parse_mapping(Path(path).read_text(encoding="utf-8"), source=str(path))


def recast_corpus(corpus: Corpus, mapping: LabelMapping) -> Corpus:
    """Attach a meta label to every sentence; source labels are preserved."""
    if not mapping.covers(corpus.dataset_id):
        raise MappingError(f"mapping does not cover dataset {corpus.dataset_id}")
    dataset_mapping = mapping.datasets[corpus.dataset_id]
    labels = {}
    unmapped: set[str] = set()
    for rec in corpus.sentences():
        meta = dataset_mapping.entries.get(rec.source_label)
        if meta is None:
            unmapped.add(rec.source_label)
            meta = MetaLabel.NON_FACTS
        labels[rec.key] = meta
    if unmapped:
        if dataset_mapping.default == REJECT:
            raise MappingError(
                f"{corpus.dataset_id}: unmapped labels with default=reject: "
                f"{sorted(unmapped)}"
            )
        for label in sorted(unmapped):
            log.warning("%s: label %r not in mapping, defaulted to NonFacts",
                        corpus.dataset_id, label)
    return with_meta_labels(corpus, labels)


def label_distribution(corpora: list[Corpus]) -> LabelDistribution:
    """Count Facts / NonFacts per dataset and pooled; corpora must be recast."""
    dist = LabelDistribution()
    for corpus in corpora:
        counts = dist.per_dataset.setdefault(corpus.dataset_id, DatasetCounts())
        for rec in corpus.sentences():
            if rec.meta_label is None:
                raise MappingError(
                    f"{corpus.dataset_id}/{rec.doc_id}[{rec.sent_index}] has no meta label; "
                    "recast the corpus first"
                )
            if rec.meta_label is MetaLabel.FACTS:
                counts.facts += 1
            else:
                counts.non_facts += 1
    return dist
