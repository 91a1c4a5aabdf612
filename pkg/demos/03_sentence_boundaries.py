#!/usr/bin/env python3
"""Sentence boundary detection on legal prose.

Citations, reporters, honorifics, and initials are full of periods that do
not end sentences; the splitter suppresses them with an abbreviation lexicon
(see factbench/data/abbreviations.txt, replaceable per corpus).
"""

from factbench.sentences import SentenceSplitter, split_sentences

passages = [
    "See Smith v. Jones, 530 U.S. 123. He appealed.",
    "Mr. Gorman filed suit against Acme Corp. on Jan. 2, 1999. The suit failed.",
    "The court cited 28 U.S.C. 1291 and Fed. R. Civ. P. 12(b)(6). Both applied.",
    "John Q. Public testified. \"I saw nothing.\" The jury disagreed.",
    "Was the contract valid? The trial court said no! The appellate court agreed.",
]

for passage in passages:
    print(passage)
    for i, sentence in enumerate(split_sentences(passage), start=1):
        print(f"  {i}. {sentence}")
    print()

# a narrower lexicon changes the behavior
bare = SentenceSplitter(abbreviations=frozenset(), suppress_initials=False)
print("with an empty lexicon, every period followed by a capital splits:")
for i, sentence in enumerate(bare.split(passages[0]), start=1):
    print(f"  {i}. {sentence}")
