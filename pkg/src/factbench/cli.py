"""Command-line entry point: ingest -> recast -> split -> matrix -> report.

One JSON run config drives full experiments; flags override environment
variables (prefix FACTBENCH_), which override the config file. Exit codes:
0 success, 1 fatal error, 2 partial cell failures, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .corpus import Corpus, read_corpus_jsonl, write_corpus_jsonl
from .matrix import build_backend, read_matrix, render_report, run_transfer_matrix
from .readers import ingest_bva, ingest_casebriefs, ingest_isc
from .recast import label_distribution, load_mapping, recast_corpus
from .sections import load_section_rules
from .splits import (
    DEFAULT_RATIOS,
    DEFAULT_SEED,
    Fold,
    assign_all,
    materialize_fold,
    write_split_manifest,
)
from .svm import SvmHyperparams, default_grid, grid_search, save_model
from .synth import generate_synthetic, make_twin_specs

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2
EXIT_USAGE = 64

ENV_PREFIX = "FACTBENCH_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 64 instead of argparse's default 2
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="factbench", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("ingest", help="read a source corpus into interchange JSONL")
    p.add_argument("--dataset", required=True, choices=["BVA", "CB", "ISC"])
    p.add_argument("--path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--section-rules", default=None)

    p = sub.add_parser("recast", help="attach binary meta labels to a corpus")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mapping", default=None)

    p = sub.add_parser("split", help="write a deterministic split manifest")
    p.add_argument("--in", dest="inputs", action="append", required=True)
    p.add_argument("--seed", default=DEFAULT_SEED)
    p.add_argument("--ratios", default="0.5,0.25,0.25")
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="grid-search the SVM on one training pool")
    p.add_argument("--config", required=True)
    p.add_argument("--pool", required=True, help="e.g. BVA or BVA+CB")
    p.add_argument("--out", required=True)

    p = sub.add_parser("matrix", help="run the full pool x target transfer matrix")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", default=None)
    p.add_argument("--datasets", default=None, help="comma-separated subset to run")
    p.add_argument("--backends", default=None, help="comma-separated backend ids to run")
    p.add_argument("--parallelism", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("report", help="render a finished run")
    p.add_argument("--run", required=True)
    p.add_argument("--format", default="table-text", choices=["table-text", "csv"])

    p = sub.add_parser("synth", help="generate twin synthetic corpora")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", default="synth-v1")
    p.add_argument("--overlap", type=float, default=1.0)
    p.add_argument("--docs", type=int, default=12)
    p.add_argument("--facts-ratio", type=float, default=0.4)

    return parser


def _env(name: str, fallback):
    return os.environ.get(ENV_PREFIX + name, fallback)


def _load_config(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"error: cannot load config {path}: {exc}")


def _load_dataset(dataset_id: str, entry: dict) -> Corpus:
    path = entry["path"]
    format = entry.get("format", "jsonl")
    if format == "jsonl":
        return read_corpus_jsonl(path)
    if format == "bva":
        return ingest_bva(path)
    if format == "isc":
        return ingest_isc(path)
    if format == "casebriefs":
        rules_path = entry.get("section_rules")
        rules = load_section_rules(rules_path) if rules_path else load_section_rules()
        return ingest_casebriefs(path, rules=rules)
    raise SystemExit(f"error: dataset {dataset_id}: unknown format {format!r}")


def _ensure_recast(corpus: Corpus, mapping) -> Corpus:
    if all(rec.meta_label is not None for rec in corpus.sentences()):
        return corpus
    return recast_corpus(corpus, mapping)


def _load_corpora(config: dict, only: set[str] | None = None) -> list[Corpus]:
    datasets = config.get("datasets") or {}
    if not datasets:
        raise SystemExit("error: config has no datasets")
    mapping = load_mapping(config.get("mapping_config"))
    corpora = []
    for dataset_id in sorted(datasets):
        if only and dataset_id not in only:
            continue
        corpus = _load_dataset(dataset_id, datasets[dataset_id])
        corpora.append(_ensure_recast(corpus, mapping))
    if not corpora:
        raise SystemExit("error: no datasets selected")
    return corpora


def _cmd_ingest(args) -> int:
    if args.dataset == "BVA":
        corpus = ingest_bva(args.path)
    elif args.dataset == "ISC":
        corpus = ingest_isc(args.path)
    else:
        rules = load_section_rules(args.section_rules) if args.section_rules else load_section_rules()
        corpus = ingest_casebriefs(args.path, rules=rules)
    write_corpus_jsonl(corpus, args.out)
    print(f"{corpus.dataset_id}: {corpus.n_documents} documents, "
          f"{corpus.n_sentences} sentences -> {args.out}")
    return EXIT_OK


def _cmd_recast(args) -> int:
    corpus = read_corpus_jsonl(args.input)
    mapping = load_mapping(args.mapping)
    recast = recast_corpus(corpus, mapping)
    write_corpus_jsonl(recast, args.out)
    print(label_distribution([recast]).format_table())
    return EXIT_OK


def _cmd_split(args) -> int:
    ratios = tuple(float(x) for x in args.ratios.split(","))
    corpora = [read_corpus_jsonl(path) for path in args.inputs]
    assignment = assign_all(corpora, ratios=ratios, seed=args.seed)
    write_split_manifest(assignment, args.out)
    for corpus in corpora:
        sizes = assignment.fold_sizes(corpus.dataset_id)
        print(f"{corpus.dataset_id}: " + ", ".join(f"{fold.value}={n}" for fold, n in sizes.items()))
    return EXIT_OK


def _svm_settings(config: dict) -> dict:
    return config.get("svm") or {}


def _cmd_train(args) -> int:
    config = _load_config(args.config)
    pool_datasets = args.pool.split("+")
    corpora = _load_corpora(config, only=set(pool_datasets))
    seed = str(_env("SEED", config.get("seed", DEFAULT_SEED)))
    ratios = tuple(config.get("ratios", DEFAULT_RATIOS))
    assignment = assign_all(corpora, ratios=ratios, seed=seed)
    by_dataset = {c.dataset_id: c for c in corpora}
    train, validation = [], []
    for dataset_id in sorted(pool_datasets):
        train.extend(materialize_fold(by_dataset[dataset_id], assignment, Fold.TRAIN))
        validation.extend(materialize_fold(by_dataset[dataset_id], assignment, Fold.VALIDATION))
    train.sort(key=lambda r: r.key)
    validation.sort(key=lambda r: r.key)
    svm = _svm_settings(config)
    grid_rows = svm.get("grid")
    grid = default_grid()
    if grid_rows:
        grid = [SvmHyperparams(c=float(r["c"]), class_weight=r.get("class_weight", "uniform"),
                               max_iterations=int(r.get("max_iterations", 1000)),
                               tolerance=float(r.get("tolerance", 1e-4))) for r in grid_rows]
    result = grid_search(train, validation, grid,
                         ngram_range=tuple(svm.get("ngram_range", (1, 3))),
                         min_df=int(svm.get("min_df", 1)))
    save_model(result.model, args.out)
    print(f"pool {args.pool}: chose C={result.chosen.c} "
          f"class_weight={result.chosen.class_weight} "
          f"max_iterations={result.chosen.max_iterations}; "
          f"validation F1 {result.val_f1:.4f} -> {args.out}")
    return EXIT_OK


def _cmd_matrix(args) -> int:
    config = _load_config(args.config)
    seed = str(args.seed or _env("SEED", config.get("seed", DEFAULT_SEED)))
    ratios = tuple(config.get("ratios", DEFAULT_RATIOS))
    out_dir = Path(args.out or _env("OUT", config.get("out_dir", "runs/latest")))
    parallelism = int(args.parallelism or _env("PARALLELISM", config.get("parallelism", 1)))
    only = set(args.datasets.split(",")) if args.datasets else None
    corpora = _load_corpora(config, only=only)
    assignment = assign_all(corpora, ratios=ratios, seed=seed)

    backend_entries = config.get("backends") or [{"kind": "svm", "backend_id": "svm"}]
    if args.backends:
        wanted = set(args.backends.split(","))
        backend_entries = [e for e in backend_entries
                           if e.get("backend_id", e.get("kind")) in wanted]
        if not backend_entries:
            raise SystemExit(f"error: no configured backend matches {sorted(wanted)}")
    backends = [build_backend(entry, _svm_settings(config)) for entry in backend_entries]

    out_dir.mkdir(parents=True, exist_ok=True)
    snapshot = dict(config)
    snapshot["seed"] = seed
    snapshot["ratios"] = list(ratios)
    snapshot["parallelism"] = parallelism
    snapshot["backends"] = backend_entries
    snapshot["datasets"] = {
        ds: {**entry, "path": str(Path(entry["path"]).resolve())}
        for ds, entry in (config.get("datasets") or {}).items()
        if only is None or ds in only
    }
    (out_dir / "config.json").write_text(json.dumps(snapshot, indent=2), encoding="utf-8")
    write_split_manifest(assignment, out_dir / "split_manifest.jsonl")

    matrix = run_transfer_matrix(
        corpora, assignment, backends, out_dir,
        parallelism=parallelism,
        metadata={"seed": seed, "config": str(Path(args.config).resolve())},
    )
    print(render_report(matrix, "table-text"))
    if matrix.n_failures:
        print(f"{matrix.n_failures} cells failed; see {out_dir}", file=sys.stderr)
        return EXIT_PARTIAL
    print(f"run registry: {out_dir}")
    return EXIT_OK


def _cmd_report(args) -> int:
    matrix = read_matrix(Path(args.run) / "metrics.json")
    print(render_report(matrix, args.format), end="")
    return EXIT_OK


def _cmd_synth(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec_a, spec_b = make_twin_specs(
        overlap=args.overlap, seed=args.seed,
        n_documents=args.docs, facts_ratio=args.facts_ratio,
    )
    for spec in (spec_a, spec_b):
        corpus = generate_synthetic(spec)
        path = out_dir / f"{spec.dataset_id}.jsonl"
        write_corpus_jsonl(corpus, path)
        print(f"{spec.dataset_id}: {corpus.n_documents} documents, "
              f"{corpus.n_sentences} sentences -> {path}")
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "recast": _cmd_recast,
    "split": _cmd_split,
    "train": _cmd_train,
    "matrix": _cmd_matrix,
    "report": _cmd_report,
    "synth": _cmd_synth,
}


def run(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return EXIT_FATAL
        return int(exc.code or 0)
    except Exception as exc:
        log.error("fatal: %s", exc)
        return EXIT_FATAL


def main() -> None:
    sys.exit(run())
