"""Case-brief section segmentation and heading canonicalization.

Headings are detected on lines that end with ":" or that are standalone
title-case lines. Detected headings are canonicalized against an ordered,
user-extensible rule file (regex pattern -> section type); headings no rule
matches become ``Unknown`` sections, which downstream ingestion drops.
Sections carry their exact character spans so the segmentation is a
partition: concatenating the pre-heading prefix and all section spans
reconstructs the input byte for byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources


class SectionType(str, Enum):
    FACTS = "Facts"
    ISSUE = "Issue"
    CONCLUSION = "Conclusion"
    PROCEDURAL_HISTORY = "Procedural History"
    REASONING = "Reasoning"
    RULE = "Rule"
    UNKNOWN = "Unknown"


class SectionRuleError(ValueError):
    """Raised when a section rule file cannot be parsed."""


@dataclass(frozen=True)
class HeadingRule:
    pattern: re.Pattern[str]
    canonical: SectionType


@dataclass(frozen=True)
class BriefSection:
    raw_heading: str
    canonical: SectionType
    body: str
    span: tuple[int, int]  # [start of heading line, start of next heading or EOF)


_NORM = re.compile(r"[^a-z0-9]+")
_TITLE_WORD = re.compile(r"[A-Za-z][A-Za-z'-]*")
_LOWER_OK = frozenset({"of", "the", "and", "a", "an", "in", "to", "by", "for"})


def normalize_heading(raw: str) -> str:
    """Case-, punctuation-, and whitespace-insensitive normal form."""
    return _NORM.sub(" ", raw.lower()).strip()


def load_section_rules(path: str | None = None) -> tuple[HeadingRule, ...]:
    """Load ordered heading rules: one `<pattern> TAB <canonical>` per line."""
    if path is None:
        text = resources.files("factbench.data").joinpath("section_headings.rules").read_text("utf-8")
        source = "<default>"
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        source = str(path)
    rules = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip()
        if not line or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise SectionRuleError(f"{source}:{lineno}: expected `<pattern> TAB <canonical>`")
        pattern, canonical = line.split("\t", 1)
        try:
            section = SectionType(canonical.strip())
        except ValueError as exc:
            raise SectionRuleError(f"{source}:{lineno}: unknown section type {canonical!r}") from exc
        try:
            compiled = re.compile(pattern.strip())
        except re.error as exc:
            raise SectionRuleError(f"{source}:{lineno}: bad pattern: {exc}") from exc
        rules.append(HeadingRule(pattern=compiled, canonical=section))
    return tuple(rules)


DEFAULT_SECTION_RULES = load_section_rules()


def canonicalize_heading(
    raw: str, rules: tuple[HeadingRule, ...] = DEFAULT_SECTION_RULES
) -> SectionType:
    """Map a raw heading to its section type; Unknown when no rule matches."""
    norm = normalize_heading(raw)
    for rule in rules:
        if rule.pattern.fullmatch(norm):
            return rule.canonical
    return SectionType.UNKNOWN


def _is_title_case_line(stripped: str) -> bool:
    if len(stripped) > 60 or stripped.endswith((".", "?", "!", ",", ";")):
        return False
    words = _TITLE_WORD.findall(stripped)
    if not words or len(words) > 6:
        return False
    if _NORM.sub("", stripped.lower()) != "".join(w.lower() for w in words):
        return False  # line contains digits or stray symbols
    if not words[0][0].isupper():
        return False
    return all(w[0].isupper() or w.lower() in _LOWER_OK for w in words)


def _heading_text(stripped: str) -> str | None:
    """Return the heading text if this line is a heading candidate."""
    if stripped.endswith(":"):
        head = stripped[:-1].strip()
        if head and len(head) <= 60:
            return stripped
        return None
    if _is_title_case_line(stripped):
        return stripped
    return None


def segment_brief_sections(
    text: str, rules: tuple[HeadingRule, ...] = DEFAULT_SECTION_RULES
) -> list[BriefSection]:
    """Segment a brief into heading-delimited sections covering disjoint spans."""
    # (line_start, body_start) per heading candidate, in document order
    heads: list[tuple[int, int, str]] = []
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped:
            heading = _heading_text(stripped)
            if heading is not None:
                heads.append((offset, offset + len(line), heading))
        offset += len(line)

    sections = []
    for i, (start, body_start, heading) in enumerate(heads):
        end = heads[i + 1][0] if i + 1 < len(heads) else len(text)
        sections.append(
            BriefSection(
                raw_heading=heading,
                canonical=canonicalize_heading(heading, rules),
                body=text[body_start:end],
                span=(start, end),
            )
        )
    return sections
