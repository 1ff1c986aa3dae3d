#!/usr/bin/env python3
"""Write a generated corpus (docs.jsonl + labels.tsv) into a directory.

Two flavors: 'anchored' has seed emoji as a high-precision offensive
signal (for collection/enrichment experiments); 'separable' never lets
marker words cross classes (for classifier sanity runs). Both are pure
functions of the seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from anchorlex.corpus import write_corpus, write_labels
from anchorlex.synth import make_anchored_corpus, make_separable_corpus


def generate(out_dir: str, kind: str = "anchored", n_docs: int = 10_000, seed: int = 0) -> tuple[str, str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if kind == "anchored":
        docs, labels = make_anchored_corpus(n_docs=n_docs, seed=seed)
    elif kind == "separable":
        docs, labels = make_separable_corpus(n_docs=n_docs, seed=seed)
    else:
        raise ValueError(f"unknown corpus kind {kind!r}")
    docs_path = str(out / "docs.jsonl")
    labels_path = str(out / "labels.tsv")
    write_corpus(docs_path, docs)
    write_labels(labels_path, labels.values())
    return docs_path, labels_path


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", required=True)
    ap.add_argument("--kind", choices=("anchored", "separable"), default="anchored")
    ap.add_argument("--n-docs", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    docs_path, labels_path = generate(args.out_dir, args.kind, args.n_docs, args.seed)
    print(f"wrote {docs_path} and {labels_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
