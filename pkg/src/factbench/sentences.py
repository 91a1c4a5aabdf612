"""Rule-based sentence boundary detection tuned for legal prose.

A boundary is a run of ``.?!`` (plus closing quotes/brackets) followed by
whitespace and a capitalized or quoted continuation. A boundary is suppressed
when the word before the punctuation is in the abbreviation lexicon (legal
reporters, "v.", "No.", month names, ...) or is a single-letter initial.
Periods inside numbers ("5.2") never qualify because no whitespace follows.
"""

from __future__ import annotations

import re
from importlib import resources

_BOUNDARY = re.compile(r"[.?!]+[\"'”’)\]]*\s+(?=[\"'“‘(\[]*[A-Z])")
_WORD_BEFORE = re.compile(r"[A-Za-z0-9§]+(?:\.[A-Za-z0-9§]+)*$")
_WS = re.compile(r"\s+")


def load_abbreviations(path: str | None = None) -> frozenset[str]:
    """Load the abbreviation lexicon: one lowercase entry per line, '#' comments."""
    if path is None:
        text = resources.files("factbench.data").joinpath("abbreviations.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    entries = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            entries.add(line.rstrip("."))
    return frozenset(entries)


DEFAULT_ABBREVIATIONS = load_abbreviations()


class SentenceSplitter:
    def __init__(
        self,
        abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
        suppress_initials: bool = True,
    ):
        self.abbreviations = abbreviations
        self.suppress_initials = suppress_initials

    def _suppressed(self, text: str, punct_start: int) -> bool:
        m = _WORD_BEFORE.search(text, 0, punct_start)
        if m is None:
            return False
        word = m.group(0)
        if self.suppress_initials and len(word) == 1 and word.isalpha() and word.isupper():
            return True
        return word.lower().rstrip(".") in self.abbreviations

    def split(self, text: str) -> list[str]:
        """Split text into trimmed, non-empty sentences in document order."""
        pieces: list[str] = []
        start = 0
        for m in _BOUNDARY.finditer(text):
            if self._suppressed(text, m.start()):
                continue
            pieces.append(text[start : m.end()])
            start = m.end()
        pieces.append(text[start:])
        return [p for p in (piece.strip() for piece in pieces) if p]


def split_sentences(text: str, splitter: SentenceSplitter | None = None) -> list[str]:
    return (splitter or _DEFAULT_SPLITTER).split(text)


def collapse_whitespace(text: str) -> str:
    return _WS.sub(" ", text).strip()


_DEFAULT_SPLITTER = SentenceSplitter()
