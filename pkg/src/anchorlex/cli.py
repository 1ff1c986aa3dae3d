"""Command-line front end: one binary, subcommand per pipeline stage.

Exit codes: 0 success, 1 usage error, 2 data/IO error. Every file write
is atomic (temp + rename) and every command emits a run manifest next
to its primary output (or at --manifest). No environment variables are
consulted; behavior is flags + config only.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Sequence

from . import __version__
from . import annotation as anno
from . import corpus as corpus_mod
from . import emoji as emoji_mod
from . import lexicon as lexicon_mod
from . import metrics as metrics_mod
from . import textnorm
from . import violence as violence_mod
from .explain import dump_explanation, explain as explain_text
from .features import FeatureConfig
from .linear import load_model, predict_texts, save_model, train_model
from .manifest import RunManifest
from .util import atomic_write_text


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _norm_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--no-letter-maps", action="store_true", help="keep alef/taa/yaa variants")
    p.add_argument("--keep-diacritics", action="store_true")
    p.add_argument("--keep-newlines", action="store_true")
    p.add_argument("--squash", type=int, default=2, metavar="K", help="cap letter runs at K")
    p.add_argument("--mention-token", default="@USER")
    p.add_argument("--url-token", default="URL")


def _norm_config(args: argparse.Namespace) -> textnorm.NormalizationConfig:
    return textnorm.NormalizationConfig(
        map_alef=not args.no_letter_maps,
        map_taa_marbuta=not args.no_letter_maps,
        map_alef_maksura=not args.no_letter_maps,
        strip_diacritics=not args.keep_diacritics,
        squash_repeats_over=args.squash,
        replace_mentions_with=args.mention_token,
        replace_urls_with=args.url_token,
        newline_to_space=not args.keep_newlines,
    )


def _manifest(args: argparse.Namespace, command: str, seed: int | None = None) -> RunManifest:
    cfg = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "manifest") and not k.startswith("_")
    }
    return RunManifest(command=command, config=cfg, seed=seed, version=__version__)


def _finish(man: RunManifest, args: argparse.Namespace, primary_out: str | None) -> None:
    path = getattr(args, "manifest", None)
    if path is None and primary_out is not None:
        path = primary_out + ".manifest.json"
    if path is not None:
        man.write(path)


def _load_inventory(args: argparse.Namespace) -> emoji_mod.SeedInventory:
    if getattr(args, "seeds", None):
        return emoji_mod.load_seed_inventory(args.seeds)
    return emoji_mod.default_inventory()


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


# --- commands ------------------------------------------------------------


def cmd_collect(args: argparse.Namespace) -> int:
    man = _manifest(args, "collect")
    man.add_input(args.infile)
    docs = corpus_mod.load_corpus(args.infile, args.format)
    inv = _load_inventory(args)
    if args.seeds:
        man.add_input(args.seeds)
    kept = emoji_mod.filter_by_seeds(docs, inv)
    corpus_mod.write_corpus(args.out, kept, args.format)
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(f"collect: kept {len(kept)}/{len(docs)} docs with seed emoji")
    return 0


def cmd_dedup(args: argparse.Namespace) -> int:
    man = _manifest(args, "dedup")
    man.add_input(args.infile)
    docs = corpus_mod.load_corpus(args.infile)
    policy = textnorm.NearDupPolicy(
        shingle_size=args.shingle_size,
        jaccard_threshold=args.jaccard,
        min_tokens=args.min_tokens,
    )
    kept, dropped = textnorm.dedup(docs, policy, _norm_config(args))
    corpus_mod.write_corpus(args.out, kept)
    man.add_output(args.out)
    dropped_path = args.dropped or args.out + ".dropped.tsv"
    textnorm.write_drops(dropped_path, dropped)
    man.add_output(dropped_path)
    _finish(man, args, args.out)
    print(f"dedup: kept {len(kept)}, dropped {len(dropped)}")
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    man = _manifest(args, "normalize")
    man.add_input(args.infile)
    cfg = _norm_config(args)
    docs = corpus_mod.load_corpus(args.infile)
    out_docs = [
        corpus_mod.Document(
            id=d.id,
            text=textnorm.normalize(d.text, cfg),
            created_at=d.created_at,
            lang=d.lang,
        )
        for d in docs
    ]
    corpus_mod.write_corpus(args.out, out_docs)
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(f"normalize: wrote {len(out_docs)} docs")
    return 0


def cmd_split(args: argparse.Namespace) -> int:
    man = _manifest(args, "split", seed=args.seed)
    man.add_input(args.labels)
    labels = corpus_mod.load_labels(args.labels)
    try:
        ratios = tuple(float(x) for x in args.ratios.split(","))
    except ValueError:
        raise ValueError(f"bad --ratios {args.ratios!r}, expected three floats") from None
    if len(ratios) != 3:
        raise ValueError(f"bad --ratios {args.ratios!r}, expected three floats")
    split = corpus_mod.stratified_split(labels, ratios, args.seed)
    corpus_mod.write_split(args.out, split)
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(
        f"split: train={len(split.train)} dev={len(split.dev)} test={len(split.test)}"
    )
    return 0


def cmd_mine_lexicon(args: argparse.Namespace) -> int:
    man = _manifest(args, "mine-lexicon")
    man.add_input(args.infile)
    man.add_input(args.labels)
    docs = corpus_mod.load_corpus(args.infile)
    labels = corpus_mod.load_labels(args.labels)
    entries = lexicon_mod.mine_class_lexicon(
        docs,
        labels,
        args.positive_class,
        _norm_config(args),
        min_valence=args.min_valence,
        min_freq=args.min_freq,
    )
    lexicon_mod.write_lexicon(args.out, entries)
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(f"mine-lexicon: {len(entries)} terms at valence >= {args.min_valence}")
    return 0


def cmd_emoji_stats(args: argparse.Namespace) -> int:
    man = _manifest(args, "emoji-stats")
    man.add_input(args.infile)
    man.add_input(args.labels)
    docs = corpus_mod.load_corpus(args.infile)
    labels = corpus_mod.load_labels(args.labels)
    inv = None
    if args.seeds:
        inv = emoji_mod.load_seed_inventory(args.seeds)
        man.add_input(args.seeds)
    elif not args.all_bases:
        inv = emoji_mod.default_inventory()
    stats = emoji_mod.emoji_stats(docs, labels, inv)
    if not args.all_bases and inv is not None:
        stats = [s for s in stats if s.base in inv.bases]
    emoji_mod.write_emoji_stats(args.out, stats)
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(f"emoji-stats: {len(stats)} base forms")
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    man = _manifest(args, "sample", seed=args.seed)
    man.add_input(args.infile)
    docs = corpus_mod.load_corpus(args.infile)
    inv = _load_inventory(args)
    if args.seeds:
        man.add_input(args.seeds)
    sampled = emoji_mod.sample_per_emoji(docs, inv, args.k, args.seed)
    lines = ["base\tdoc_id\ttext"]
    for base in sorted(sampled):
        for d in sampled[base]:
            text = d.text.replace("\t", " ").replace("\n", " ")
            lines.append(f"{emoji_mod.codepoints_hex(base)}\t{d.id}\t{text}")
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(f"sample: wrote draws for {len(sampled)} bases")
    return 0


def cmd_match_violence(args: argparse.Namespace) -> int:
    man = _manifest(args, "match-violence")
    man.add_input(args.infile)
    docs = corpus_mod.load_corpus(args.infile)
    classes = violence_mod.load_classes(args.classes) if args.classes else None
    rules = violence_mod.load_rules(args.rules) if args.rules else None
    for p in (args.classes, args.rules):
        if p:
            man.add_input(p)
    compiled = violence_mod.compile_rules(rules, classes)
    rows = []
    cfg = _norm_config(args)
    for d in docs:
        for m in violence_mod.match_violence_text(d.text, compiled, cfg):
            rows.append((d.id, m))
    violence_mod.write_matches(args.out, rows)
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(f"match-violence: {len(rows)} matches in {len(docs)} docs")
    return 0


def cmd_aggregate(args: argparse.Namespace) -> int:
    man = _manifest(args, "aggregate")
    man.add_input(args.judgments)
    judgments = anno.load_judgments(args.judgments)
    aggregated = anno.majority_vote(judgments)
    labels = anno.aggregate_to_labels(aggregated)
    if args.overrides:
        man.add_input(args.overrides)
        labels = anno.apply_overrides(labels, anno.load_overrides(args.overrides))
    corpus_mod.write_labels(args.out, labels.values())
    man.add_output(args.out)
    if args.queue:
        anno.write_text(args.queue, anno.dump_adjudication(anno.adjudication_queue(aggregated)))
        man.add_output(args.queue)
    _finish(man, args, args.out)
    queue_n = sum(1 for a in aggregated if a.agreement != "full")
    print(f"aggregate: {len(labels)} docs labeled, {queue_n} queue items")
    return 0


def cmd_kappa(args: argparse.Namespace) -> int:
    man = _manifest(args, "kappa")
    man.add_input(args.judgments)
    judgments = anno.load_judgments(args.judgments)
    report = anno.avg_pairwise_kappa(judgments, min_shared=args.min_shared, job=args.job)
    text = anno.dump_kappa_report(report)
    _emit(text, args.out)
    if args.out:
        man.add_output(args.out)
    _finish(man, args, args.out)
    return 0


def cmd_gate(args: argparse.Namespace) -> int:
    man = _manifest(args, "gate")
    man.add_input(args.judgments)
    man.add_input(args.answers)
    judgments = anno.load_judgments(args.judgments)
    gate = anno.QCGate(anno.load_gate_answers(args.answers), args.threshold)
    results = anno.gate_all(judgments, gate)
    _emit(anno.dump_gate_results(results), args.out)
    if args.out:
        man.add_output(args.out)
    _finish(man, args, args.out)
    n_pass = sum(1 for r in results if r.passed)
    print(f"gate: {n_pass}/{len(results)} annotators pass", file=sys.stderr)
    return 0


def _feature_config(args: argparse.Namespace) -> FeatureConfig:
    def parse_range(s: str) -> tuple[int, int]:
        parts = s.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad n-gram range {s!r}, expected LO,HI")
        return int(parts[0]), int(parts[1])

    return FeatureConfig(
        mode=args.mode,
        char_range=parse_range(args.char_ngrams),
        word_range=parse_range(args.word_ngrams),
    )


def cmd_train(args: argparse.Namespace) -> int:
    man = _manifest(args, "train", seed=args.seed)
    for p in (args.infile, args.labels, args.split):
        man.add_input(p)
    docs = corpus_mod.load_corpus(args.infile)
    labels = corpus_mod.load_labels(args.labels)
    split = corpus_mod.load_split(args.split)
    model = train_model(
        docs,
        labels,
        split,
        feature_config=_feature_config(args),
        C=args.C,
        seed=args.seed,
        target=args.target,
        normalize_text=not args.no_normalize,
    )
    save_model(args.out, model)
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(
        f"train: {model.space.n_features} features, "
        f"objective {model.objective:.6f} after {len(model.objective_trace)} epochs"
    )
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    man = _manifest(args, "predict")
    man.add_input(args.model)
    man.add_input(args.infile)
    model = load_model(args.model)
    docs = corpus_mod.load_corpus(args.infile)
    results = predict_texts(model, [d.text for d in docs])
    lines = ["doc_id\tlabel\tscore"]
    lines.extend(
        f"{d.id}\t{label}\t{score:.10f}" for d, (label, score) in zip(docs, results)
    )
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(f"predict: scored {len(docs)} docs")
    return 0


def load_predictions(path: str) -> dict[str, int]:
    out: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header != ["doc_id", "label", "score"]:
            raise ValueError(f"{path}: bad predictions header {header!r}")
        for lineno, raw in enumerate(fh, start=2):
            if not raw.strip():
                continue
            row = raw.rstrip("\n").split("\t")
            if len(row) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 columns")
            if row[0] in out:
                raise ValueError(f"{path}: line {lineno}: duplicate doc_id {row[0]!r}")
            if row[1] not in ("0", "1"):
                raise ValueError(f"{path}: line {lineno}: label must be 0/1")
            out[row[0]] = int(row[1])
    return out


def cmd_evaluate(args: argparse.Namespace) -> int:
    man = _manifest(args, "evaluate")
    man.add_input(args.gold)
    man.add_input(args.pred)
    labels = corpus_mod.load_labels(args.gold)
    preds = load_predictions(args.pred)
    if args.split:
        man.add_input(args.split)
        keep = corpus_mod.load_split(args.split).part(args.part)
        preds = {d: v for d, v in preds.items() if d in keep}
    from .linear import _target_value

    gold = {d: _target_value(r, args.target) for d, r in labels.items()}
    report = metrics_mod.evaluate_predictions(gold, preds)
    _emit(metrics_mod.dump_report(report), args.out)
    if args.out:
        man.add_output(args.out)
    _finish(man, args, args.out)
    return 0


def cmd_explain(args: argparse.Namespace) -> int:
    man = _manifest(args, "explain", seed=args.seed)
    man.add_input(args.model)
    model = load_model(args.model)
    if args.text is not None:
        text = args.text
    else:
        if not args.infile or not args.doc_id:
            raise ValueError("explain needs --text, or --in with --doc-id")
        man.add_input(args.infile)
        docs = {d.id: d for d in corpus_mod.load_corpus(args.infile)}
        if args.doc_id not in docs:
            raise ValueError(f"doc {args.doc_id!r} not in {args.infile}")
        text = docs[args.doc_id].text
    ex = explain_text(
        text,
        model,
        n_samples=args.samples,
        kernel_width=args.kernel_width,
        top_k=args.top_k,
        seed=args.seed,
        preprocess=not args.no_preprocess,
    )
    _emit(dump_explanation(ex), args.out)
    if args.out:
        man.add_output(args.out)
    _finish(man, args, args.out)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    man = _manifest(args, "report")
    man.add_input(args.corpus)
    man.add_input(args.labels)
    docs = corpus_mod.load_corpus(args.corpus)
    labels = corpus_mod.load_labels(args.labels)
    n = len(docs)
    labeled = [labels[d.id] for d in docs if d.id in labels]
    n_off = sum(1 for r in labeled if r.offensive)
    n_hate = sum(1 for r in labeled if r.is_hate)
    n_vul = sum(1 for r in labeled if r.vulgar)
    n_vio = sum(1 for r in labeled if r.violence)
    target_counts: dict[str, int] = {}
    for r in labeled:
        for t in r.hate_targets:
            target_counts[t] = target_counts.get(t, 0) + 1

    def pct(k: int, total: int) -> str:
        return f"{100.0 * k / total:.2f}%" if total else "n/a"

    lines = [
        "corpus report",
        "=============",
        f"documents\t{n}",
        f"labeled\t{len(labeled)}",
        f"offensive\t{n_off}\t{pct(n_off, len(labeled))}",
        f"hate\t{n_hate}\t{pct(n_hate, len(labeled))}",
        f"vulgar\t{n_vul}\t{pct(n_vul, len(labeled))}",
        f"violence\t{n_vio}\t{pct(n_vio, len(labeled))}",
    ]
    for t in sorted(target_counts, key=lambda t: (-target_counts[t], t)):
        lines.append(f"hate_target\t{t}\t{target_counts[t]}")
    for name, path in (("emoji-stats", args.stats), ("lexicon", args.lexicon), ("eval", args.eval)):
        if not path:
            continue
        man.add_input(path)
        lines.append("")
        # basename, not the full path: report bytes must not depend on
        # where the run directory happens to live
        lines.append(f"[{name}] {os.path.basename(path)}")
        with open(path, encoding="utf-8") as fh:
            content = fh.read().rstrip("\n")
        head = content.splitlines()[: args.head + 1]  # header + N rows
        lines.extend(head)
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    man.add_output(args.out)
    _finish(man, args, args.out)
    print(f"report: wrote {args.out}")
    return 0


# --- parser wiring --------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="anchorlex", description=__doc__)
    parser.add_argument("--version", action="version", version=f"anchorlex {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--manifest", help="run manifest path (default: <out>.manifest.json)")
        return p

    p = add("collect", cmd_collect, "keep docs whose emoji hit the seed inventory")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seeds", help="seed inventory TSV (default: bundled)")
    p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")

    p = add("dedup", cmd_dedup, "drop short/exact/near duplicate docs")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dropped", help="drop log TSV (default: <out>.dropped.tsv)")
    p.add_argument("--min-tokens", type=int, default=3)
    p.add_argument("--jaccard", type=float, default=0.8)
    p.add_argument("--shingle-size", type=int, default=2)
    _norm_flags(p)

    p = add("normalize", cmd_normalize, "canonicalize text")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    _norm_flags(p)

    p = add("split", cmd_split, "stratified train/dev/test split")
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratios", default="0.7,0.1,0.2")

    p = add("mine-lexicon", cmd_mine_lexicon, "high-valence term lexicon")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-valence", type=float, default=0.8)
    p.add_argument("--min-freq", type=int, default=5)
    p.add_argument(
        "--class",
        dest="positive_class",
        choices=("offensive", "hate", "vulgar", "violence"),
        default="offensive",
    )
    _norm_flags(p)

    p = add("emoji-stats", cmd_emoji_stats, "per-emoji offensive/hate rates")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seeds", help="seed inventory TSV (default: bundled)")
    p.add_argument("--all-bases", action="store_true", help="stats for every base, not just seeds")

    p = add("sample", cmd_sample, "seeded doc samples per inventory emoji")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seeds", help="seed inventory TSV (default: bundled)")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)

    p = add("match-violence", cmd_match_violence, "violence pattern matches")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--classes", help="lexical classes TSV (default: bundled)")
    p.add_argument("--rules", help="pattern rules TSV (default: bundled)")
    _norm_flags(p)

    p = add("aggregate", cmd_aggregate, "majority-vote judgments into labels")
    p.add_argument("--judgments", required=True)
    p.add_argument("--out", required=True, help="labels TSV")
    p.add_argument("--queue", help="adjudication queue TSV")
    p.add_argument("--overrides", help="adjudication TSV with filled override column")

    p = add("kappa", cmd_kappa, "average pairwise Cohen's kappa")
    p.add_argument("--judgments", required=True)
    p.add_argument("--min-shared", type=int, default=20)
    p.add_argument("--job", help="restrict to one job")
    p.add_argument("--out", help="write report here instead of stdout")

    p = add("gate", cmd_gate, "gate annotators on hidden test items")
    p.add_argument("--judgments", required=True)
    p.add_argument("--answers", required=True, help="doc_id<TAB>label TSV")
    p.add_argument("--threshold", type=float, default=0.8)
    p.add_argument("--out", help="write results here instead of stdout")

    p = add("train", cmd_train, "train the tf-idf linear classifier")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--out", required=True, help="model file")
    p.add_argument("--mode", choices=("char", "word", "char+word"), default="char+word")
    p.add_argument("--char-ngrams", default="2,5", metavar="LO,HI")
    p.add_argument("--word-ngrams", default="1,3", metavar="LO,HI")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--target",
        choices=("offensive", "hate", "vulgar", "violence"),
        default="offensive",
    )
    p.add_argument("--no-normalize", action="store_true", help="train on raw text")

    p = add("predict", cmd_predict, "score docs with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("evaluate", cmd_evaluate, "accuracy and macro P/R/F1")
    p.add_argument("--gold", required=True, help="labels TSV")
    p.add_argument("--pred", required=True, help="predictions TSV")
    p.add_argument("--split", help="restrict to one split part")
    p.add_argument("--part", choices=("train", "dev", "test"), default="test")
    p.add_argument(
        "--target",
        choices=("offensive", "hate", "vulgar", "violence"),
        default="offensive",
    )
    p.add_argument("--out", help="write report here instead of stdout")

    p = add("explain", cmd_explain, "per-token attribution for one doc")
    p.add_argument("--model", required=True)
    p.add_argument("--text", help="explain this text directly")
    p.add_argument("--in", dest="infile", help="corpus holding --doc-id")
    p.add_argument("--doc-id")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--kernel-width", type=float, default=0.25)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-preprocess", action="store_true")
    p.add_argument("--out", help="write explanation here instead of stdout")

    p = add("report", cmd_report, "one-page corpus summary")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stats", help="emoji-stats TSV to excerpt")
    p.add_argument("--lexicon", help="lexicon TSV to excerpt")
    p.add_argument("--eval", help="evaluate output to excerpt")
    p.add_argument("--head", type=int, default=10, help="rows to excerpt per file")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"anchorlex {args.command}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
