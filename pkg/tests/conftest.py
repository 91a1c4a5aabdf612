from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

# Local checkouts of the two public datasets, for the tests that reproduce
# published statistics. See README "Getting the real datasets".
DATA_DIR = Path(os.environ.get("FACTBENCH_DATA_DIR", Path(__file__).parent.parent / "datasets"))
BVA_DIR = DATA_DIR / "vetclaims-json"
ISC_DIR = DATA_DIR / "isc-semantic-segmentation"

requires_bva = pytest.mark.skipif(
    not BVA_DIR.exists(), reason=f"BVA dataset not present at {BVA_DIR} (see README)"
)
requires_isc = pytest.mark.skipif(
    not ISC_DIR.exists(), reason=f"ISC dataset not present at {ISC_DIR} (see README)"
)


def write_bva_decision(path: Path, sentences: list[tuple[str, str]]) -> None:
    payload = {
        "sentences": [
            {"text": text, "rhetClass": label} for text, label in sentences
        ]
    }
    path.write_text(json.dumps(payload), encoding="utf-8")


def write_isc_doc(path: Path, sentences: list[tuple[str, str]]) -> None:
    path.write_text(
        "".join(f"{text}\t{label}\n" for text, label in sentences), encoding="utf-8"
    )


@pytest.fixture
def bva_fixture_dir(tmp_path: Path) -> Path:
    root = tmp_path / "bva"
    root.mkdir()
    write_bva_decision(
        root / "1301234.json",
        [
            ("The veteran served from 1968 to 1970.", "EvidenceSentence"),
            ("The Board finds the evidence credible.", "FindingSentence"),
            ("See 38 U.S.C. 1154(b).", "CitationSentence"),
        ],
    )
    write_bva_decision(
        root / "1305678.json",
        [
            ("Service connection requires a current disability.", "LegalRuleSentence"),
            ("The examiner diagnosed PTSD.", "EvidenceSentence"),
            ("Thus the claim must be granted.", "ReasoningSentence"),
        ],
    )
    return root


@pytest.fixture
def isc_fixture_dir(tmp_path: Path) -> Path:
    root = tmp_path / "isc"
    root.mkdir()
    write_isc_doc(
        root / "1951_ca_001.txt",
        [
            ("The appellant was convicted by the trial court.", "Facts"),
            ("The High Court upheld the conviction.", "RulingByLowerCourt"),
            ("We see no reason to interfere.", "RatioOfTheDecision"),
        ],
    )
    write_isc_doc(
        root / "1960_ip_002.txt",
        [("Section 10 of the Act applies.", "Statute")],
    )
    return root


@pytest.fixture
def cb_fixture_dir(tmp_path: Path) -> Path:
    root = tmp_path / "cb"
    root.mkdir()
    (root / "smith-v-jones.txt").write_text(
        "Facts:\nA sued B over a contract. B refused to pay.\n"
        "Issue:\nWho wins the dispute?\n",
        encoding="utf-8",
    )
    (root / "doe-v-roe.txt").write_text(
        "Procedural History:\nThe trial court dismissed.\n"
        "Holding:\nReversed and remanded.\n",
        encoding="utf-8",
    )
    return root
