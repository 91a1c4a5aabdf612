"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest -v tests/test_acceptance.py` (add `-s` to see the summary
lines). Criteria 1-3 reproduce published statistics and need the two public
datasets fetched locally (scripts/fetch_datasets.sh); they skip otherwise.
Everything else runs self-contained.
"""

from __future__ import annotations

import json
import random

import numpy as np
import pytest

from factbench.cli import run as cli_run
from factbench.corpus import MetaLabel
from factbench.matrix import (
    InProcessSvmBackend,
    SubprocessBackend,
    enumerate_pools,
    run_transfer_matrix,
)
from factbench.metrics import confusion, f1_score, prf1
from factbench.readers import ingest_bva, ingest_isc
from factbench.recast import label_distribution, load_mapping, recast_corpus
from factbench.splits import Fold, assign_all, assign_splits, materialize_fold
from factbench.svm import (
    SvmHyperparams,
    class_weighted_c,
    default_grid,
    grid_search,
    predict,
    train_linear_svm,
)
from factbench.synth import SynthSpec, generate_synthetic, make_twin_specs
from tests.conftest import BVA_DIR, ISC_DIR, requires_bva, requires_isc
from tests.test_corpus import rec
from tests.test_features import brute_force_tfidf
from tests.test_metrics import brute_force_confusion
from tests.test_svm import separable_fixture, subgradient_objective
from factbench.corpus import build_corpus
from factbench.features import fit_vocabulary, vectorize, vectorize_all


def _passed(name: str) -> None:
    print(f"[ACCEPTANCE] {name}: PASS")


# --- criteria 1-3: published-data reproduction (skip without the datasets) ---

@pytest.fixture(scope="module")
def real_matrix(tmp_path_factory):
    corpora = [
        recast_corpus(ingest_bva(BVA_DIR), load_mapping()),
        recast_corpus(ingest_isc(ISC_DIR), load_mapping()),
    ]
    assignment = assign_all(corpora, seed="rr-v1")
    run_dir = tmp_path_factory.mktemp("real-run")
    backend = InProcessSvmBackend(backend_id="svm")
    return run_transfer_matrix(corpora, assignment, [backend], run_dir)


@requires_bva
@requires_isc
def test_criterion_1_table_distribution_reproduced():
    mapping = load_mapping()
    dist = label_distribution([
        recast_corpus(ingest_bva(BVA_DIR), mapping),
        recast_corpus(ingest_isc(ISC_DIR), mapping),
    ])
    bva, isc = dist.per_dataset["BVA"], dist.per_dataset["ISC"]
    assert (bva.facts, bva.non_facts, bva.total) == (2420, 3733, 6153)
    assert (isc.facts, isc.non_facts, isc.total) == (2219, 9380, 11599)
    _passed("criterion 1: label distribution reproduced exactly")


@requires_bva
@requires_isc
def test_criterion_2_in_domain_svm_bands(real_matrix):
    bva_f1 = real_matrix.cell("svm", "BVA", "BVA").metrics.f1
    isc_f1 = real_matrix.cell("svm", "ISC", "ISC").metrics.f1
    assert abs(bva_f1 - 0.92) <= 0.05, f"BVA->BVA F1 {bva_f1:.3f} outside 0.92 +/- 0.05"
    assert abs(isc_f1 - 0.41) <= 0.08, f"ISC->ISC F1 {isc_f1:.3f} outside 0.41 +/- 0.08"
    _passed("criterion 2: in-domain SVM F1 within published bands")


@requires_bva
@requires_isc
def test_criterion_3_cross_domain_degradation(real_matrix):
    in_domain = real_matrix.cell("svm", "BVA", "BVA").metrics.f1
    cross = real_matrix.cell("svm", "BVA", "ISC").metrics.f1
    assert cross < in_domain - 0.2, f"expected BVA->ISC ({cross:.3f}) well below BVA->BVA ({in_domain:.3f})"
    _passed("criterion 3: cross-domain F1 drops by more than 0.2")


# --- criterion 4: synthetic end-to-end --------------------------------------

def _twin_matrix(overlap: float, run_dir, seed="accept-1"):
    spec_a, spec_b = make_twin_specs(overlap=overlap, seed=seed)
    corpora = [generate_synthetic(spec_a), generate_synthetic(spec_b)]
    assignment = assign_all(corpora, seed=seed)
    backend = InProcessSvmBackend(backend_id="svm")
    return run_transfer_matrix(corpora, assignment, [backend], run_dir)


def test_criterion_4_synthetic_end_to_end(tmp_path):
    full = _twin_matrix(1.0, tmp_path / "overlap-full")
    assert full.n_failures == 0
    for cell in full.cells.values():
        assert cell.metrics.f1 >= 0.85, f"{cell.pool}->{cell.target} {cell.metrics.f1:.3f}"

    none = _twin_matrix(0.0, tmp_path / "overlap-none")
    for dataset in ("synthA", "synthB"):
        assert none.cell("svm", dataset, dataset).metrics.f1 >= 0.95
    assert none.cell("svm", "synthA", "synthB").metrics.f1 <= 0.3
    assert none.cell("svm", "synthB", "synthA").metrics.f1 <= 0.3

    again = _twin_matrix(1.0, tmp_path / "overlap-full-again")
    for key in full.cells:
        assert full.cells[key].metrics.f1 == again.cells[key].metrics.f1
    _passed("criterion 4: synthetic transfer gap detected, deterministic")


# --- criterion 5: oracle suites ----------------------------------------------

def test_criterion_5_oracle_suites():
    # metrics vs brute-force counting, 1000 seeded random pairs, exact
    rng = random.Random(1234)
    pred = [rng.choice([MetaLabel.FACTS, MetaLabel.NON_FACTS]) for _ in range(1000)]
    gold = [rng.choice([MetaLabel.FACTS, MetaLabel.NON_FACTS]) for _ in range(1000)]
    assert confusion(pred, gold) == brute_force_confusion(pred, gold)

    # TF-IDF vs naive recomputation on a 50-sentence corpus, 1e-12
    texts = [f"token{i % 7} token{i % 3} shared words here" for i in range(50)]
    vocab = fit_vocabulary(texts)
    inverse = {i: g for g, i in vocab.index.items()}
    for query in texts[:10]:
        expected = brute_force_tfidf(texts, query)
        vec = vectorize(query, vocab)
        got = {inverse[int(i)]: float(w) for i, w in zip(vec.indices, vec.values)}
        assert set(got) == set(expected)
        for gram in expected:
            assert got[gram] == pytest.approx(expected[gram], abs=1e-12)

    # grid search vs exhaustive train-all oracle (4-point grid)
    spec, _ = make_twin_specs(overlap=1.0, seed="oracle-5", n_documents=16)
    corpus = generate_synthetic(spec)
    assignment = assign_splits(corpus, seed="oracle-5")
    train = materialize_fold(corpus, assignment, Fold.TRAIN)
    val = materialize_fold(corpus, assignment, Fold.VALIDATION)
    grid = [
        SvmHyperparams(c=0.01),
        SvmHyperparams(c=1.0),
        SvmHyperparams(c=1.0, class_weight="balanced"),
        SvmHyperparams(c=10.0, max_iterations=10000),
    ]
    result = grid_search(train, val, grid)
    vocab = fit_vocabulary(train)
    X_train, X_val = vectorize_all(train, vocab), vectorize_all(val, vocab)
    y_train = [r.meta_label for r in train]
    y_val = [r.meta_label for r in val]
    scored = []
    for pos, h in enumerate(grid):
        model = train_linear_svm(X_train, y_train, h, vocabulary=vocab)
        preds = [predict(model, X_val.row(i))[0] for i in range(X_val.n_rows)]
        scored.append(((-f1_score(preds, y_val), h.c, pos), h))
    assert result.chosen == min(scored)[1]

    # SVM objective vs projected-subgradient oracle on the 20-point fixture
    X, X_dense, y, signs = separable_fixture(n=20)
    h = SvmHyperparams(c=1.0, max_iterations=10000, tolerance=1e-8)
    model = train_linear_svm(X, y, h)
    oracle = subgradient_objective(X_dense, signs, class_weighted_c(h, signs))
    assert model.primal_objective == pytest.approx(oracle, rel=0.01)
    _passed("criterion 5: all four oracle suites agree")


# --- criterion 6: structural invariants --------------------------------------

def test_criterion_6_structural_invariants(tmp_path):
    # the seven pools, in order
    pools = [p.name for p in enumerate_pools({"BVA", "CB", "ISC"})]
    assert pools == ["BVA", "CB", "ISC", "BVA+CB", "BVA+ISC", "CB+ISC", "BVA+CB+ISC"]

    # documents never split across folds
    rng = random.Random(99)
    for trial in range(10):
        n_docs = rng.randint(1, 40)
        records = [
            rec(f"doc{d:03d}", i, text=f"S{d}-{i}.")
            for d in range(n_docs)
            for i in range(rng.randint(1, 4))
        ]
        corpus = build_corpus("BVA", records)
        assignment = assign_splits(corpus, seed=f"trial-{trial}")
        for doc in corpus.documents:
            folds = {assignment.fold_of("BVA", r.doc_id) for r in doc.sentences}
            assert len(folds) == 1

    # fold sizes obey the rounding rule for every n up to 200
    for n in range(1, 201):
        corpus = build_corpus("BVA", [rec(f"d{i:03d}", 0) for i in range(n)])
        sizes = assign_splits(corpus).fold_sizes("BVA")
        train = int(0.5 * n + 0.5)
        val = int(0.25 * n + 0.5)
        assert (sizes[Fold.TRAIN], sizes[Fold.VALIDATION], sizes[Fold.TEST]) == (
            train, val, n - train - val,
        )

    # a matrix run is bit-reproducible from its own registry config snapshot
    data = tmp_path / "data"
    assert cli_run(["synth", "--out-dir", str(data), "--seed", "repro-1", "--docs", "10"]) == 0
    config = {
        "seed": "repro-1",
        "datasets": {
            "synthA": {"path": str(data / "synthA.jsonl"), "format": "jsonl"},
            "synthB": {"path": str(data / "synthB.jsonl"), "format": "jsonl"},
        },
        "svm": {"grid": [{"c": 1.0}, {"c": 10.0}]},
        "backends": [{"backend_id": "svm", "kind": "svm"}],
        "out_dir": str(tmp_path / "run1"),
    }
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    assert cli_run(["matrix", "--config", str(config_path)]) == 0
    snapshot = tmp_path / "run1" / "config.json"
    assert cli_run(["matrix", "--config", str(snapshot), "--out", str(tmp_path / "run2")]) == 0

    first = json.loads((tmp_path / "run1" / "metrics.json").read_text(encoding="utf-8"))
    second = json.loads((tmp_path / "run2" / "metrics.json").read_text(encoding="utf-8"))
    assert first["cells"] == second["cells"]
    assert (tmp_path / "run1" / "split_manifest.jsonl").read_bytes() == (
        tmp_path / "run2" / "split_manifest.jsonl"
    ).read_bytes()
    _passed("criterion 6: pools, splits, and reproducibility invariants hold")


# --- criterion 7: protocol equivalence ----------------------------------------

def test_criterion_7_protocol_equivalence(tmp_path):
    from factbench.backends import stub_backend_registration, svm_backend_registration

    # SVM in-process vs the same SVM behind the subprocess protocol
    spec_a, spec_b = make_twin_specs(overlap=1.0, seed="equiv-1", n_documents=12)
    corpora = [generate_synthetic(spec_a), generate_synthetic(spec_b)]
    assignment = assign_all(corpora, seed="equiv-1")
    grid_rows = [{"c": 1.0}, {"c": 1.0, "class_weight": "balanced"}]
    grid = [SvmHyperparams(c=1.0), SvmHyperparams(c=1.0, class_weight="balanced")]
    in_proc = InProcessSvmBackend(backend_id="svm", grid=grid)
    external = SubprocessBackend(
        registration=svm_backend_registration(backend_id="svm-proc"),
        config={"grid": grid_rows},
    )
    matrix = run_transfer_matrix(corpora, assignment, [in_proc, external], tmp_path / "equiv")
    assert matrix.n_failures == 0
    for pool in matrix.pools:
        for target in matrix.targets:
            a = matrix.cell("svm", pool, target).metrics
            b = matrix.cell("svm-proc", pool, target).metrics
            assert a.f1 == b.f1 and a.precision == b.precision and a.recall == b.recall, (
                f"{pool}->{target} diverged"
            )

    # majority-class stub completes a full 7 x 3 matrix
    def synth3(dataset_id, seed):
        return generate_synthetic(SynthSpec(
            dataset_id=dataset_id, n_documents=8, sentences_per_doc=(4, 8),
            facts_ratio=0.4, signal_vocab=("siga", "sigb", "sigc"),
            noise_vocab=tuple(f"n{i}" for i in range(30)), overlap=1.0, seed=seed,
        ))

    trio = [synth3("BVA", "s1"), synth3("CB", "s2"), synth3("ISC", "s3")]
    stub_assignment = assign_all(trio, seed="stub-1")
    stub = SubprocessBackend(registration=stub_backend_registration())
    stub_matrix = run_transfer_matrix(trio, stub_assignment, [stub], tmp_path / "stub")
    assert stub_matrix.pools == ["BVA", "CB", "ISC", "BVA+CB", "BVA+ISC", "CB+ISC", "BVA+CB+ISC"]
    assert len(stub_matrix.cells) == 21
    assert stub_matrix.n_failures == 0
    # constant-prediction oracle: F1 is 0 when the pool's training majority is
    # NonFacts, else 2P/(P+1) with P the Facts rate of the target's test fold
    by_dataset = {c.dataset_id: c for c in trio}
    for cell in stub_matrix.cells.values():
        train = [
            r
            for ds in cell.pool.split("+")
            for r in materialize_fold(by_dataset[ds], stub_assignment, Fold.TRAIN)
        ]
        n_facts = sum(r.meta_label is MetaLabel.FACTS for r in train)
        test = materialize_fold(by_dataset[cell.target], stub_assignment, Fold.TEST)
        if n_facts > len(train) - n_facts:
            p = sum(r.meta_label is MetaLabel.FACTS for r in test) / len(test)
            assert cell.metrics.f1 == pytest.approx(2 * p / (p + 1), abs=1e-12)
        else:
            assert cell.metrics.f1 == 0.0
    _passed("criterion 7: protocol equivalence and stub coverage hold")
