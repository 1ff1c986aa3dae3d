#!/usr/bin/env python3
"""Drive every CLI stage on a generated corpus, end to end.

The corpus is synthesized in-process, so the whole run is a pure
function of --seed: two runs with the same seed write byte-identical
data files (manifests record wall time and therefore differ, but the
output digests they record match).

Stages: collect -> dedup -> split -> mine-lexicon -> emoji-stats ->
sample -> match-violence -> train -> predict -> evaluate -> explain ->
report.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from anchorlex import cli
from anchorlex.corpus import load_corpus, load_labels, write_corpus, write_labels
from anchorlex.synth import make_anchored_corpus


def _run(argv: list[str]) -> None:
    rc = cli.main(argv)
    if rc != 0:
        raise SystemExit(f"stage {argv[0]!r} failed with exit code {rc}")


def run_pipeline(out_dir: str, seed: int = 0, n_docs: int = 10_000) -> dict[str, str]:
    """Returns a name -> path map of every file the pipeline wrote."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    p = {
        "raw": str(out / "raw.jsonl"),
        "labels": str(out / "labels.tsv"),
        "anchored": str(out / "anchored.jsonl"),
        "deduped": str(out / "deduped.jsonl"),
        "dropped": str(out / "deduped.jsonl.dropped.tsv"),
        "labels_kept": str(out / "labels_kept.tsv"),
        "split": str(out / "split.tsv"),
        "lexicon": str(out / "lexicon.tsv"),
        "emoji_stats": str(out / "emoji_stats.tsv"),
        "samples": str(out / "samples.tsv"),
        "violence": str(out / "violence.tsv"),
        "model": str(out / "model.json"),
        "preds": str(out / "preds.tsv"),
        "eval": str(out / "eval.txt"),
        "explain": str(out / "explain.txt"),
        "report": str(out / "report.txt"),
    }

    docs, labels = make_anchored_corpus(n_docs=n_docs, seed=seed)
    write_corpus(p["raw"], docs)
    write_labels(p["labels"], labels.values())

    _run(["collect", "--in", p["raw"], "--out", p["anchored"]])
    _run(["dedup", "--in", p["anchored"], "--out", p["deduped"], "--dropped", p["dropped"]])

    # split over the docs that survived collection + dedup
    kept_ids = {d.id for d in load_corpus(p["deduped"])}
    kept = [r for i, r in load_labels(p["labels"]).items() if i in kept_ids]
    write_labels(p["labels_kept"], kept)

    _run(["split", "--labels", p["labels_kept"], "--out", p["split"], "--seed", str(seed)])
    _run(["mine-lexicon", "--in", p["deduped"], "--labels", p["labels_kept"], "--out", p["lexicon"], "--min-freq", "3"])
    _run(["emoji-stats", "--in", p["deduped"], "--labels", p["labels_kept"], "--out", p["emoji_stats"]])
    _run(["sample", "--in", p["deduped"], "--out", p["samples"], "--k", "5", "--seed", str(seed)])
    _run(["match-violence", "--in", p["deduped"], "--out", p["violence"]])
    _run(
        [
            "train",
            "--in", p["deduped"],
            "--labels", p["labels_kept"],
            "--split", p["split"],
            "--out", p["model"],
            "--seed", str(seed),
        ]
    )
    _run(["predict", "--model", p["model"], "--in", p["deduped"], "--out", p["preds"]])
    _run(
        [
            "evaluate",
            "--gold", p["labels_kept"],
            "--pred", p["preds"],
            "--split", p["split"],
            "--part", "test",
            "--out", p["eval"],
        ]
    )
    _run(
        [
            "explain",
            "--model", p["model"],
            "--text", "يا غبي يا تافه",
            "--samples", "400",
            "--seed", str(seed),
            "--out", p["explain"],
        ]
    )
    _run(
        [
            "report",
            "--corpus", p["deduped"],
            "--labels", p["labels_kept"],
            "--stats", p["emoji_stats"],
            "--lexicon", p["lexicon"],
            "--eval", p["eval"],
            "--out", p["report"],
        ]
    )
    return p


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", required=True)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-docs", type=int, default=10_000)
    args = ap.parse_args(argv)
    paths = run_pipeline(args.out_dir, args.seed, args.n_docs)
    print(f"pipeline wrote {len(paths)} files under {args.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
