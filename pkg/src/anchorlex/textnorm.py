"""Arabic-aware text normalization, tokenization, n-grams, deduplication."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .corpus import Document
from .emoji import cluster_spans
from .util import atomic_write_text

# alef variants, taa marbuta, alef maksura
_CHAR_MAP = {
    "آ": "ا",  # آ -> ا
    "أ": "ا",  # أ -> ا
    "إ": "ا",  # إ -> ا
    "ة": "ه",  # ة -> ه
    "ى": "ي",  # ى -> ي
}
_ALEF_TAA_YAA = str.maketrans(_CHAR_MAP)

# tashkeel + superscript alef + tatweel
_DIACRITICS_RE = re.compile("[ً-ْٰـ]")

_URL_RE = re.compile(r"(?:https?://\S+|\bwww\.\S+)")
_MENTION_RE = re.compile(r"(?<![\w@])@\w+")
_WORD_RE = re.compile(r"\w+", re.UNICODE)


@dataclass(frozen=True)
class NormalizationConfig:
    map_alef: bool = True
    map_taa_marbuta: bool = True
    map_alef_maksura: bool = True
    strip_diacritics: bool = True
    squash_repeats_over: int = 2
    replace_mentions_with: str = "@USER"
    replace_urls_with: str = "URL"
    newline_to_space: bool = True

    def __post_init__(self) -> None:
        if self.squash_repeats_over < 1:
            raise ValueError("squash_repeats_over must be >= 1")


_DEFAULT = NormalizationConfig()


def _normalize_once(s: str, cfg: NormalizationConfig) -> str:
    if cfg.newline_to_space:
        s = s.replace("\r\n", " ").replace("\n", " ").replace("\r", " ")
    s = _URL_RE.sub(cfg.replace_urls_with, s)
    s = _MENTION_RE.sub(cfg.replace_mentions_with, s)
    table = {}
    if cfg.map_alef:
        table.update({k: v for k, v in _CHAR_MAP.items() if v == "ا"})
    if cfg.map_taa_marbuta:
        table["ة"] = "ه"
    if cfg.map_alef_maksura:
        table["ى"] = "ي"
    if table:
        s = s.translate(str.maketrans(table))
    if cfg.strip_diacritics:
        s = _DIACRITICS_RE.sub("", s)
    k = cfg.squash_repeats_over
    s = re.sub(r"(.)\1{%d,}" % k, lambda m: m.group(1) * k, s, flags=re.DOTALL)
    return s


def normalize(text: str, cfg: NormalizationConfig = _DEFAULT) -> str:
    """Canonicalize one text. Idempotent: normalize(normalize(x)) == normalize(x).

    The rewrite steps are applied to a fixpoint: one step can expose
    work for another (stripping a tatweel can uncover a @mention,
    squashing can complete a URL scheme), so a single pass is not a
    projection. Real text stabilizes in one or two rounds; the bound
    only guards against adversarial input.
    """
    s = text
    for _ in range(8):
        nxt = _normalize_once(s, cfg)
        if nxt == s:
            return s
        s = nxt
    return s


def tokenize(text: str) -> list[str]:
    """Split on whitespace/punctuation; every emoji cluster is its own token."""
    tokens: list[str] = []
    pos = 0
    for a, b in cluster_spans(text):
        tokens.extend(_WORD_RE.findall(text[pos:a]))
        tokens.append(text[a:b])
        pos = b
    tokens.extend(_WORD_RE.findall(text[pos:]))
    return tokens


def word_ngrams(tokens: Sequence[str], n_min: int, n_max: int) -> Counter:
    """Multiset of contiguous word n-grams, joined with single spaces."""
    if not (1 <= n_min <= n_max):
        raise ValueError(f"bad n-gram range ({n_min}, {n_max})")
    grams: Counter = Counter()
    for n in range(n_min, n_max + 1):
        for i in range(len(tokens) - n + 1):
            grams[" ".join(tokens[i : i + n])] += 1
    return grams


def char_ngrams(text: str, n_min: int, n_max: int) -> Counter:
    """Multiset of contiguous character n-grams over the string, spaces included."""
    if not (1 <= n_min <= n_max):
        raise ValueError(f"bad n-gram range ({n_min}, {n_max})")
    grams: Counter = Counter()
    for n in range(n_min, n_max + 1):
        for i in range(len(text) - n + 1):
            grams[text[i : i + n]] += 1
    return grams


# --- deduplication ------------------------------------------------------


@dataclass(frozen=True)
class NearDupPolicy:
    shingle_size: int = 2
    jaccard_threshold: float = 0.8
    min_tokens: int = 3

    def __post_init__(self) -> None:
        if self.shingle_size < 1:
            raise ValueError("shingle_size must be >= 1")
        if not (0.0 < self.jaccard_threshold <= 1.0):
            raise ValueError("jaccard_threshold must be in (0, 1]")
        if self.min_tokens < 0:
            raise ValueError("min_tokens must be >= 0")


@dataclass(frozen=True)
class DropRecord:
    doc_id: str
    reason: str  # short | exact | near
    duplicate_of: str | None = None


def jaccard(a: frozenset, b: frozenset) -> float:
    if not a and not b:
        return 1.0
    inter = len(a & b)
    if inter == 0:
        return 0.0
    return inter / (len(a) + len(b) - inter)


def _shingles(tokens: Sequence[str], size: int) -> frozenset[tuple[str, ...]]:
    return frozenset(
        tuple(tokens[i : i + size]) for i in range(len(tokens) - size + 1)
    )


def _placeholder_tokens(cfg: NormalizationConfig) -> set[str]:
    return set(tokenize(cfg.replace_mentions_with)) | set(tokenize(cfg.replace_urls_with))


def dedup(
    docs: Iterable[Document],
    policy: NearDupPolicy = NearDupPolicy(),
    cfg: NormalizationConfig = _DEFAULT,
) -> tuple[list[Document], list[DropRecord]]:
    """Sequential first-wins dedup.

    Per doc, checks run in the order short -> exact -> near, so a
    too-short doc never anchors near-duplicate drops. Tokens counted
    toward min_tokens exclude mention/URL placeholders. Near means
    Jaccard over word shingles against any *kept* doc >= threshold;
    output is equivalent to the brute-force pairwise scan (the shingle
    index below only skips pairs with zero overlap).
    """
    placeholders = _placeholder_tokens(cfg)
    kept: list[Document] = []
    dropped: list[DropRecord] = []
    exact_seen: dict[str, str] = {}
    kept_shingles: list[frozenset] = []
    by_shingle: dict[tuple[str, ...], list[int]] = {}
    for doc in docs:
        norm = normalize(doc.text, cfg)
        toks = [t for t in tokenize(norm) if t not in placeholders]
        if len(toks) < policy.min_tokens:
            dropped.append(DropRecord(doc.id, "short"))
            continue
        if norm in exact_seen:
            dropped.append(DropRecord(doc.id, "exact", exact_seen[norm]))
            continue
        sh = _shingles(toks, policy.shingle_size)
        candidates: set[int] = set()
        for g in sh:
            candidates.update(by_shingle.get(g, ()))
        hit: str | None = None
        for idx in sorted(candidates):
            if jaccard(sh, kept_shingles[idx]) >= policy.jaccard_threshold:
                hit = kept[idx].id
                break
        if hit is None and not sh:
            # empty shingle sets only compare equal to other empties
            for idx, other in enumerate(kept_shingles):
                if not other:
                    hit = kept[idx].id
                    break
        if hit is not None:
            dropped.append(DropRecord(doc.id, "near", hit))
            continue
        exact_seen[norm] = doc.id
        for g in sh:
            by_shingle.setdefault(g, []).append(len(kept))
        kept_shingles.append(sh)
        kept.append(doc)
    return kept, dropped


def dump_drops(drops: Iterable[DropRecord]) -> str:
    lines = ["doc_id\treason\tduplicate_of"]
    lines.extend(
        f"{d.doc_id}\t{d.reason}\t{d.duplicate_of or ''}" for d in drops
    )
    return "\n".join(lines) + "\n"


def write_drops(path: str, drops: Iterable[DropRecord]) -> None:
    atomic_write_text(path, dump_drops(drops))
