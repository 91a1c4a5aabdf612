#!/usr/bin/env python3
"""The full experiment on synthetic twins: does lexical signal transfer?

Generates two corpora whose Facts-marking vocabularies either fully overlap
or are disjoint, trains the SVM baseline on every training pool, and prints
the pool x target F1 matrices. With full overlap the model transfers almost
perfectly; with none, cross-domain F1 collapses while in-domain stays high -
the generalization gap the harness exists to measure.
"""

import tempfile
from pathlib import Path

from factbench.matrix import InProcessSvmBackend, render_report, run_transfer_matrix
from factbench.splits import assign_all
from factbench.svm import SvmHyperparams
from factbench.synth import generate_synthetic, make_twin_specs

work = Path(tempfile.mkdtemp(prefix="factbench-demo-"))
grid = [SvmHyperparams(c=c, class_weight=cw) for c in (0.1, 1.0, 10.0)
        for cw in ("uniform", "balanced")]

for overlap in (1.0, 0.0):
    spec_a, spec_b = make_twin_specs(overlap=overlap, seed="demo-2")
    corpora = [generate_synthetic(spec_a), generate_synthetic(spec_b)]
    assignment = assign_all(corpora, seed="demo-2")
    backend = InProcessSvmBackend(backend_id="svm", grid=grid)
    run_dir = work / f"overlap-{overlap:.0%}"
    matrix = run_transfer_matrix(corpora, assignment, [backend], run_dir)
    print(f"signal-vocabulary overlap {overlap:.0%}")
    print(render_report(matrix, "table-text"))
    print(f"(run registry: {run_dir})")
    print()
