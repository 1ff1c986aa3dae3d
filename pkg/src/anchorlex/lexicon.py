"""Valence-scored lexicon mining over a labeled two-partition corpus.

The valence of a term contrasts its relative frequency in the offensive
partition with its relative frequency in the clean partition:

    V(t) = 2 * (r_off / (r_off + r_cln)) - 1,   r_p = count(t in p) / tokens(p)

so V = +1 for terms seen only with offensive docs, -1 only with clean,
0 for balanced use. Counts are token occurrences, not document hits.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Mapping

from .corpus import Document, LabelRecord
from .textnorm import NormalizationConfig, normalize, tokenize
from .util import atomic_write_text

_DEFAULT = NormalizationConfig()


@dataclass(frozen=True)
class TermCounts:
    n_off: Mapping[str, int]
    n_cln: Mapping[str, int]
    total_off: int
    total_cln: int

    def freq(self, term: str) -> int:
        return self.n_off.get(term, 0) + self.n_cln.get(term, 0)

    @property
    def terms(self) -> set[str]:
        return set(self.n_off) | set(self.n_cln)

    @classmethod
    def from_texts(
        cls,
        off_texts: Iterable[str],
        cln_texts: Iterable[str],
        cfg: NormalizationConfig = _DEFAULT,
    ) -> "TermCounts":
        n_off: Counter = Counter()
        n_cln: Counter = Counter()
        for t in off_texts:
            n_off.update(tokenize(normalize(t, cfg)))
        for t in cln_texts:
            n_cln.update(tokenize(normalize(t, cfg)))
        return cls(
            n_off=dict(n_off),
            n_cln=dict(n_cln),
            total_off=sum(n_off.values()),
            total_cln=sum(n_cln.values()),
        )


def valence(term: str, counts: TermCounts) -> float:
    """Signed offensive-association score in [-1, 1]."""
    if counts.total_off <= 0 or counts.total_cln <= 0:
        raise ValueError("both partitions must contain tokens")
    n_off = counts.n_off.get(term, 0)
    n_cln = counts.n_cln.get(term, 0)
    if n_off + n_cln == 0:
        raise ValueError(f"term {term!r} unseen in both partitions")
    r_off = n_off / counts.total_off
    r_cln = n_cln / counts.total_cln
    return 2.0 * (r_off / (r_off + r_cln)) - 1.0


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    n_off: int
    n_cln: int
    valence: float


def mine_from_counts(
    counts: TermCounts, min_valence: float = 0.8, min_freq: int = 5
) -> list[LexiconEntry]:
    """Terms with freq >= min_freq and valence >= min_valence.

    Sorted most charged first: valence desc, combined frequency desc,
    then term for a total deterministic order.
    """
    entries = []
    for term in counts.terms:
        freq = counts.freq(term)
        if freq < min_freq:
            continue
        v = valence(term, counts)
        if v >= min_valence:
            entries.append(
                LexiconEntry(
                    term=term,
                    n_off=counts.n_off.get(term, 0),
                    n_cln=counts.n_cln.get(term, 0),
                    valence=v,
                )
            )
    entries.sort(key=lambda e: (-e.valence, -(e.n_off + e.n_cln), e.term))
    return entries


def _partition(
    docs: Iterable[Document],
    labels: Mapping[str, LabelRecord],
    positive: Callable[[LabelRecord], bool],
) -> tuple[list[str], list[str]]:
    pos_texts: list[str] = []
    neg_texts: list[str] = []
    for d in docs:
        rec = labels.get(d.id)
        if rec is None:
            raise ValueError(f"document {d.id!r} has no label record")
        (pos_texts if positive(rec) else neg_texts).append(d.text)
    return pos_texts, neg_texts


_CLASS_PREDICATES: dict[str, Callable[[LabelRecord], bool]] = {
    "offensive": lambda r: r.offensive,
    "hate": lambda r: r.is_hate,
    "vulgar": lambda r: r.vulgar,
    "violence": lambda r: r.violence,
}


def mine_lexicon(
    docs: Iterable[Document],
    labels: Mapping[str, LabelRecord],
    cfg: NormalizationConfig = _DEFAULT,
    min_valence: float = 0.8,
    min_freq: int = 5,
) -> list[LexiconEntry]:
    """High-valence terms of the offensive partition, most charged first."""
    return mine_class_lexicon(docs, labels, "offensive", cfg, min_valence, min_freq)


def mine_class_lexicon(
    docs: Iterable[Document],
    labels: Mapping[str, LabelRecord],
    positive_class: str,
    cfg: NormalizationConfig = _DEFAULT,
    min_valence: float = 0.8,
    min_freq: int = 5,
) -> list[LexiconEntry]:
    """Like mine_lexicon but the positive partition is any label class."""
    if positive_class not in _CLASS_PREDICATES:
        raise ValueError(f"unknown class {positive_class!r}")
    pos, neg = _partition(docs, labels, _CLASS_PREDICATES[positive_class])
    if not pos or not neg:
        raise ValueError(
            f"class {positive_class!r}: both partitions must be non-empty "
            f"(positive={len(pos)}, negative={len(neg)})"
        )
    counts = TermCounts.from_texts(pos, neg, cfg)
    if counts.total_off <= 0 or counts.total_cln <= 0:
        raise ValueError("both partitions must contain tokens")
    return mine_from_counts(counts, min_valence, min_freq)


def dump_lexicon(entries: Iterable[LexiconEntry]) -> str:
    lines = ["term\tn_off\tn_cln\tvalence"]
    lines.extend(
        f"{e.term}\t{e.n_off}\t{e.n_cln}\t{e.valence:.6f}" for e in entries
    )
    return "\n".join(lines) + "\n"


def write_lexicon(path: str, entries: Iterable[LexiconEntry]) -> None:
    atomic_write_text(path, dump_lexicon(entries))


# --- gazetteers and target distribution ---------------------------------


@dataclass(frozen=True)
class Gazetteer:
    groups: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        if not self.groups:
            raise ValueError("gazetteer has no groups")


def load_gazetteer(path: str, cfg: NormalizationConfig = _DEFAULT) -> Gazetteer:
    """Gazetteer TSV: group<TAB>term1,term2,...; terms are normalized on load."""
    groups: dict[str, frozenset[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ValueError(f"{path}: line {lineno}: expected group<TAB>terms")
            group = cols[0].strip()
            if group in groups:
                raise ValueError(f"{path}: line {lineno}: duplicate group {group!r}")
            terms = frozenset(
                normalize(t.strip(), cfg) for t in cols[1].split(",") if t.strip()
            )
            if not terms:
                raise ValueError(f"{path}: line {lineno}: group {group!r} has no terms")
            groups[group] = terms
    return Gazetteer(groups=groups)


def default_religious_gazetteer() -> Gazetteer:
    ref = resources.files("anchorlex.data").joinpath("gazetteer_religious.tsv")
    with resources.as_file(ref) as p:
        return load_gazetteer(str(p))


@dataclass(frozen=True)
class GroupShare:
    group: str
    n_docs: int
    share: float


def target_distribution(
    docs: Iterable[Document],
    labels: Mapping[str, LabelRecord],
    gazetteer: Gazetteer,
    cfg: NormalizationConfig = _DEFAULT,
) -> list[GroupShare]:
    """How hate documents distribute over gazetteer groups.

    A hate doc counts toward every group whose term set intersects the
    doc's normalized token set; shares are fractions of all hate docs.
    """
    hate_docs = 0
    counts: dict[str, int] = {g: 0 for g in gazetteer.groups}
    for d in docs:
        rec = labels.get(d.id)
        if rec is None:
            raise ValueError(f"document {d.id!r} has no label record")
        if not rec.is_hate:
            continue
        hate_docs += 1
        toks = set(tokenize(normalize(d.text, cfg)))
        for g, terms in gazetteer.groups.items():
            if toks & terms:
                counts[g] += 1
    out = [
        GroupShare(group=g, n_docs=c, share=(c / hate_docs if hate_docs else 0.0))
        for g, c in counts.items()
    ]
    out.sort(key=lambda s: (-s.n_docs, s.group))
    return out


def dump_target_distribution(shares: Iterable[GroupShare]) -> str:
    lines = ["group\tn_docs\tshare"]
    lines.extend(f"{s.group}\t{s.n_docs}\t{s.share:.6f}" for s in shares)
    return "\n".join(lines) + "\n"
