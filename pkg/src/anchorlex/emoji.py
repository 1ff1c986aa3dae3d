"""Emoji cluster segmentation, seed inventories, and per-emoji corpus stats.

A cluster is one user-perceived emoji: a pictographic scalar plus any
variation selectors, skin-tone modifiers and tag characters, chained
through ZWJ; a regional-indicator pair (flag); or a keycap sequence.
The *base form* is the cluster with skin tones and variation selectors
stripped, so all tone/presentation variants of one emoji collapse to a
single key.
"""

from __future__ import annotations

import random
import unicodedata
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping, Sequence

from . import emoji_ranges as er
from .corpus import Document, LabelRecord
from .util import atomic_write_text

SEED_CATEGORIES = frozenset(
    {
        "animal_dehumanization",
        "anger_disgust_face",
        "disrespect_symbol",
        "violence_symbol",
        "adult",
        "other",
    }
)


# --- segmentation -------------------------------------------------------


def _absorb_extensions(text: str, j: int) -> int:
    """Consume variation selectors, skin tones, and tag characters."""
    n = len(text)
    while j < n:
        cp = ord(text[j])
        if er.is_variation_selector(cp) or er.is_skin_tone(cp) or er.is_tag(cp):
            j += 1
        else:
            break
    return j


def cluster_spans(text: str) -> list[tuple[int, int]]:
    """(start, end) character spans of every emoji cluster, left to right."""
    spans: list[tuple[int, int]] = []
    i, n = 0, len(text)
    while i < n:
        cp = ord(text[i])
        if er.is_regional_indicator(cp):
            if i + 1 < n and er.is_regional_indicator(ord(text[i + 1])):
                spans.append((i, i + 2))
                i += 2
            else:
                spans.append((i, i + 1))
                i += 1
            continue
        if cp in er.KEYCAP_BASES:
            j = i + 1
            if j < n and ord(text[j]) == er.VS16:
                j += 1
            if j < n and ord(text[j]) == er.KEYCAP_MARK:
                spans.append((i, j + 1))
                i = j + 1
                continue
            i += 1
            continue
        if er.is_pictographic(cp) or er.is_skin_tone(cp):
            j = _absorb_extensions(text, i + 1)
            # ZWJ joins further pictographic elements into the same cluster
            while (
                j + 1 < n
                and ord(text[j]) == er.ZWJ
                and er.is_pictographic(ord(text[j + 1]))
            ):
                j = _absorb_extensions(text, j + 2)
            spans.append((i, j))
            i = j
            continue
        i += 1
    return spans


def base_form(display: str) -> str:
    """Strip skin tones and variation selectors; keep ZWJ, tags, keycaps."""
    stripped = "".join(
        c
        for c in display
        if not (er.is_skin_tone(ord(c)) or er.is_variation_selector(ord(c)))
    )
    # a lone tone modifier would strip to nothing; keep it addressable
    return stripped or display


@dataclass(frozen=True)
class EmojiCluster:
    display: str
    base: str

    @classmethod
    def from_display(cls, display: str) -> "EmojiCluster":
        return cls(display=display, base=base_form(display))


def extract_emojis(text: str) -> list[EmojiCluster]:
    """All emoji clusters in order of appearance (repeats included)."""
    return [EmojiCluster.from_display(text[a:b]) for a, b in cluster_spans(text)]


def doc_bases(text: str) -> set[str]:
    return {c.base for c in extract_emojis(text)}


def alias_for(base: str) -> str:
    """Readable ``:token:`` alias for a base form, from Unicode names."""
    parts: list[str] = []
    for c in base:
        cp = ord(c)
        if cp == er.ZWJ or cp == er.KEYCAP_MARK or er.is_tag(cp):
            continue
        try:
            name = unicodedata.name(c)
        except ValueError:
            name = f"u{cp:x}"
        parts.append(name.lower().replace(" ", "_").replace("-", "_"))
    return ":" + "_".join(parts) + ":" if parts else ":emoji:"


# --- seed inventory -----------------------------------------------------


@dataclass(frozen=True)
class SeedEntry:
    base: str
    category: str
    comment: str = ""

    def __post_init__(self) -> None:
        if self.category not in SEED_CATEGORIES:
            raise ValueError(f"unknown seed category {self.category!r}")


@dataclass(frozen=True)
class SeedInventory:
    entries: tuple[SeedEntry, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for e in self.entries:
            if e.base in seen:
                raise ValueError(f"duplicate seed base {codepoints_hex(e.base)}")
            seen.add(e.base)

    @property
    def bases(self) -> frozenset[str]:
        return frozenset(e.base for e in self.entries)

    def category_of(self, base: str) -> str | None:
        for e in self.entries:
            if e.base == base:
                return e.category
        return None

    def __len__(self) -> int:
        return len(self.entries)


def codepoints_hex(s: str) -> str:
    return " ".join(f"{ord(c):04X}" for c in s)


def parse_codepoints(field: str, lineno: int) -> str:
    try:
        return "".join(chr(int(part, 16)) for part in field.split())
    except (ValueError, OverflowError):
        raise ValueError(f"line {lineno}: bad codepoint field {field!r}") from None


def load_seed_inventory(path: str) -> SeedInventory:
    """Seed TSV: hex codepoints, category, comment; '#' lines are comments."""
    entries: list[SeedEntry] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 2:
                raise ValueError(f"{path}: line {lineno}: expected codepoints<TAB>category")
            display = parse_codepoints(cols[0], lineno)
            if not display:
                raise ValueError(f"{path}: line {lineno}: empty codepoint field")
            try:
                entries.append(
                    SeedEntry(
                        base=base_form(display),
                        category=cols[1].strip(),
                        comment=cols[2].strip() if len(cols) > 2 else "",
                    )
                )
            except ValueError as e:
                raise ValueError(f"{path}: line {lineno}: {e}") from None
    try:
        return SeedInventory(entries=tuple(entries))
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None


def default_inventory() -> SeedInventory:
    ref = resources.files("anchorlex.data").joinpath("seed_emojis.tsv")
    with resources.as_file(ref) as p:
        return load_seed_inventory(str(p))


def dump_seed_inventory(inv: SeedInventory) -> str:
    lines = ["# seed emoji inventory: codepoints<TAB>category<TAB>comment"]
    for e in inv.entries:
        lines.append(f"{codepoints_hex(e.base)}\t{e.category}\t{e.comment}")
    return "\n".join(lines) + "\n"


# --- filtering, stats, sampling -----------------------------------------


def filter_by_seeds(docs: Iterable[Document], inventory: SeedInventory) -> list[Document]:
    """Documents whose emoji base forms intersect the inventory, stable order."""
    if len(inventory) == 0:
        raise ValueError("seed inventory is empty")
    bases = inventory.bases
    return [d for d in docs if doc_bases(d.text) & bases]


@dataclass(frozen=True)
class EmojiStat:
    base: str
    category: str
    n_total: int
    n_offensive: int
    offensive_pct: float
    n_hate: int
    hate_pct: float


def emoji_stats(
    docs: Iterable[Document],
    labels: Mapping[str, LabelRecord],
    inventory: SeedInventory | None = None,
) -> list[EmojiStat]:
    """Per distinct base form: document counts and offensive/hate rates.

    Counted per document (a base appearing three times in one doc counts
    once). Every doc that carries an emoji must be labeled.
    """
    totals: dict[str, int] = {}
    off: dict[str, int] = {}
    hate: dict[str, int] = {}
    for d in docs:
        bases = doc_bases(d.text)
        if not bases:
            continue
        rec = labels.get(d.id)
        if rec is None:
            raise ValueError(f"document {d.id!r} has no label record")
        for b in bases:
            totals[b] = totals.get(b, 0) + 1
            if rec.offensive:
                off[b] = off.get(b, 0) + 1
            if rec.is_hate:
                hate[b] = hate.get(b, 0) + 1
    stats = [
        EmojiStat(
            base=b,
            category=(inventory.category_of(b) if inventory else None) or "-",
            n_total=n,
            n_offensive=off.get(b, 0),
            offensive_pct=100.0 * off.get(b, 0) / n,
            n_hate=hate.get(b, 0),
            hate_pct=100.0 * hate.get(b, 0) / n,
        )
        for b, n in totals.items()
    ]
    stats.sort(key=lambda s: (-s.offensive_pct, s.base))
    return stats


def dump_emoji_stats(stats: Iterable[EmojiStat]) -> str:
    lines = ["base\tcategory\tn_total\tn_offensive\toffensive_pct\tn_hate\thate_pct"]
    for s in stats:
        lines.append(
            f"{codepoints_hex(s.base)}\t{s.category}\t{s.n_total}\t{s.n_offensive}"
            f"\t{s.offensive_pct:.2f}\t{s.n_hate}\t{s.hate_pct:.2f}"
        )
    return "\n".join(lines) + "\n"


def write_emoji_stats(path: str, stats: Iterable[EmojiStat]) -> None:
    atomic_write_text(path, dump_emoji_stats(stats))


def sample_per_emoji(
    docs: Sequence[Document],
    inventory: SeedInventory,
    k: int,
    seed: int = 0,
) -> dict[str, list[Document]]:
    """Up to k distinct docs per inventory base, deterministic in seed.

    Each base draws independently (string-seeded RNG keyed by base), so
    adding inventory entries never reshuffles existing draws.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if len(inventory) == 0:
        raise ValueError("seed inventory is empty")
    per_base: dict[str, list[Document]] = {b: [] for b in sorted(inventory.bases)}
    for d in docs:
        for b in doc_bases(d.text) & inventory.bases:
            per_base[b].append(d)
    out: dict[str, list[Document]] = {}
    for b, candidates in per_base.items():
        rng = random.Random(f"{seed}:{codepoints_hex(b)}")
        take = min(k, len(candidates))
        out[b] = rng.sample(candidates, take)
    return out
