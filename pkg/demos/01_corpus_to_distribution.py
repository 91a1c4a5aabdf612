#!/usr/bin/env python3
"""From raw source files to a binary label distribution.

Builds a tiny two-decision fixture in each source format, ingests it, recasts
the native labels into Facts / NonFacts with the shipped default mapping, and
prints the resulting distribution table.
"""

import json
import tempfile
from pathlib import Path

from factbench.readers import ingest_bva, ingest_casebriefs
from factbench.recast import label_distribution, load_mapping, recast_corpus

work = Path(tempfile.mkdtemp(prefix="factbench-demo-"))

# --- a veterans'-appeals style corpus: JSON sentence lists with role labels --
bva_dir = work / "bva"
bva_dir.mkdir()
decisions = {
    "1301234": [
        ("The veteran served on active duty from 1968 to 1970.", "EvidenceSentence"),
        ("The examiner diagnosed PTSD related to combat stressors.", "EvidenceSentence"),
        ("The Board finds the evidence to be in relative equipoise.", "FindingSentence"),
        ("See 38 U.S.C. 5107(b).", "CitationSentence"),
    ],
    "1305678": [
        ("Service connection requires a current disability.", "LegalRuleSentence"),
        ("The claims file contains VA treatment records from 2009.", "EvidenceSentence"),
        ("Accordingly, the benefit of the doubt rule applies.", "ReasoningSentence"),
    ],
}
for doc_id, sentences in decisions.items():
    payload = {"sentences": [{"text": t, "rhetClass": c} for t, c in sentences]}
    (bva_dir / f"{doc_id}.json").write_text(json.dumps(payload), encoding="utf-8")

bva = ingest_bva(bva_dir)
print(f"ingested BVA fixture: {bva.n_documents} documents, {bva.n_sentences} sentences")

# --- a case-brief style corpus: headings segmented, sections sentence-split --
cb_dir = work / "cb"
cb_dir.mkdir()
(cb_dir / "palsgraf-v-long-island.txt").write_text(
    "Facts:\n"
    "A passenger carrying a package ran to catch a departing train. "
    "Guards pushed him aboard and the package fell on the rails.\n"
    "Issue:\n"
    "Was the railroad negligent toward a bystander injured by the falling scales?\n"
    "Holding:\n"
    "No. The court reversed the judgment below.\n",
    encoding="utf-8",
)
cb = ingest_casebriefs(cb_dir)
print(f"ingested CB fixture: {cb.n_documents} documents, {cb.n_sentences} sentences")
for rec in cb.sentences():
    print(f"  [{rec.source_label}] {rec.text}")

# --- recast both into the shared binary task and count ------------------------
mapping = load_mapping()
dist = label_distribution([recast_corpus(bva, mapping), recast_corpus(cb, mapping)])
print()
print(dist.format_table())
