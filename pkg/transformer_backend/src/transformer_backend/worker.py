"""Entry point: `factbench-transformer-backend --manifest <path>`; exit 0 on success."""

from __future__ import annotations

import argparse
import logging
import sys

from .inference import predict_sentences
from .protocol import read_manifest
from .training import fine_tune


def run(manifest_path: str) -> int:
    manifest = read_manifest(manifest_path)
    if manifest.mode == "train":
        out = fine_tune(manifest)
        print(f"model directory: {out}")
    else:
        out = predict_sentences(manifest)
        print(f"predictions: {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = argparse.ArgumentParser(prog="factbench-transformer-backend")
    parser.add_argument("--manifest", required=True)
    args = parser.parse_args(argv)
    try:
        return run(args.manifest)
    except Exception as exc:  # backend contract: diagnostic on stderr, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
