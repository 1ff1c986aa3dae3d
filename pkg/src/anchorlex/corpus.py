"""Corpus containers, label records, and deterministic stratified splitting.

File formats:
  corpus JSONL  one object per line: id, text, created_at (ISO-8601), lang (optional)
  corpus TSV    header doc: id, text, created_at, lang (lang column optional)
  labels TSV    header: doc_id, offensive, hate_targets, vulgar, violence
  split file    "train:" / "dev:" / "test:" section headers, one doc_id per line
"""

from __future__ import annotations

import csv
import json
import random
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Mapping

from .util import atomic_write_text, round_half_up

HATE_TARGETS = frozenset(
    {"gender", "race", "ideology", "social_class", "religion", "disability"}
)

_SPLIT_NAMES = ("train", "dev", "test")


def parse_timestamp(value: str) -> datetime:
    """ISO-8601 -> aware UTC datetime at seconds precision.

    Naive inputs are taken as UTC; a trailing 'Z' is accepted.
    """
    s = value.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(s)
    except ValueError as e:
        raise ValueError(f"bad timestamp {value!r}: {e}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    created_at: datetime
    lang: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("document id must be non-empty")
        if "\x00" in self.text:
            raise ValueError(f"document {self.id!r}: text contains NUL")


@dataclass(frozen=True)
class LabelRecord:
    doc_id: str
    offensive: bool
    hate_targets: frozenset[str] = frozenset()
    vulgar: bool = False
    violence: bool = False

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise ValueError("doc_id must be non-empty")
        bad = set(self.hate_targets) - HATE_TARGETS
        if bad:
            raise ValueError(f"{self.doc_id}: unknown hate targets {sorted(bad)}")
        # hate/vulgar/violence are refinements of offensive, never independent
        if (self.hate_targets or self.vulgar or self.violence) and not self.offensive:
            raise ValueError(f"{self.doc_id}: hate/vulgar/violence labels require offensive=1")

    @property
    def is_hate(self) -> bool:
        return bool(self.hate_targets)


# --- corpus I/O ---------------------------------------------------------

_DOC_FIELDS = ("id", "text", "created_at")


def _doc_from_mapping(obj: Mapping[str, object], lineno: int) -> Document:
    for name in _DOC_FIELDS:
        if name not in obj or obj[name] is None or obj[name] == "":
            raise ValueError(f"line {lineno}: missing field {name}")
    return Document(
        id=str(obj["id"]),
        text=str(obj["text"]),
        created_at=parse_timestamp(str(obj["created_at"])),
        lang=str(obj.get("lang") or ""),
    )


def load_corpus(path: str, format: str = "jsonl") -> list[Document]:
    """Read a corpus file; raises ValueError naming the offending line."""
    if format not in ("jsonl", "tsv"):
        raise ValueError(f"unknown corpus format {format!r}")
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        if format == "jsonl":
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as e:
                    raise ValueError(f"{path}: line {lineno}: bad JSON: {e}") from None
                if not isinstance(obj, dict):
                    raise ValueError(f"{path}: line {lineno}: expected an object")
                try:
                    doc = _doc_from_mapping(obj, lineno)
                except ValueError as e:
                    raise ValueError(f"{path}: {e}") from None
                if doc.id in seen:
                    raise ValueError(f"{path}: line {lineno}: duplicate id {doc.id!r}")
                seen.add(doc.id)
                docs.append(doc)
        else:
            reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
            try:
                header = next(reader)
            except StopIteration:
                raise ValueError(f"{path}: empty file, expected a header row") from None
            for name in _DOC_FIELDS:
                if name not in header:
                    raise ValueError(f"{path}: line 1: missing field {name}")
            idx = {name: header.index(name) for name in header}
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                obj = {name: (row[i] if i < len(row) else "") for name, i in idx.items()}
                try:
                    doc = _doc_from_mapping(obj, lineno)
                except ValueError as e:
                    raise ValueError(f"{path}: {e}") from None
                if doc.id in seen:
                    raise ValueError(f"{path}: line {lineno}: duplicate id {doc.id!r}")
                seen.add(doc.id)
                docs.append(doc)
    return docs


def dump_corpus(docs: Iterable[Document], format: str = "jsonl") -> str:
    if format not in ("jsonl", "tsv"):
        raise ValueError(f"unknown corpus format {format!r}")
    if format == "jsonl":
        lines = []
        for d in docs:
            obj = {"id": d.id, "text": d.text, "created_at": format_timestamp(d.created_at)}
            if d.lang:
                obj["lang"] = d.lang
            lines.append(json.dumps(obj, ensure_ascii=False, sort_keys=True))
        return "\n".join(lines) + ("\n" if lines else "")
    rows = ["id\ttext\tcreated_at\tlang"]
    for d in docs:
        text = d.text.replace("\t", " ").replace("\n", " ").replace("\r", " ")
        rows.append(f"{d.id}\t{text}\t{format_timestamp(d.created_at)}\t{d.lang}")
    return "\n".join(rows) + "\n"


def write_corpus(path: str, docs: Iterable[Document], format: str = "jsonl") -> None:
    atomic_write_text(path, dump_corpus(docs, format))


# --- label I/O ----------------------------------------------------------

_LABEL_HEADER = ["doc_id", "offensive", "hate_targets", "vulgar", "violence"]


def _parse_bit(value: str, lineno: int, col: str) -> bool:
    if value not in ("0", "1"):
        raise ValueError(f"line {lineno}: column {col} must be 0 or 1, got {value!r}")
    return value == "1"


def load_labels(path: str) -> dict[str, LabelRecord]:
    """Read a labels TSV into an insertion-ordered doc_id -> LabelRecord map."""
    out: dict[str, LabelRecord] = {}
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        if header != _LABEL_HEADER:
            raise ValueError(f"{path}: bad header {header!r}, expected {_LABEL_HEADER!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise ValueError(f"{path}: line {lineno}: expected 5 columns, got {len(row)}")
            doc_id, off, targets, vul, vio = row
            try:
                rec = LabelRecord(
                    doc_id=doc_id,
                    offensive=_parse_bit(off, lineno, "offensive"),
                    hate_targets=frozenset(t for t in targets.split(",") if t),
                    vulgar=_parse_bit(vul, lineno, "vulgar"),
                    violence=_parse_bit(vio, lineno, "violence"),
                )
            except ValueError as e:
                raise ValueError(f"{path}: line {lineno}: {e}") from None
            if doc_id in out:
                raise ValueError(f"{path}: line {lineno}: duplicate doc_id {doc_id!r}")
            out[doc_id] = rec
    return out


def dump_labels(records: Iterable[LabelRecord]) -> str:
    lines = ["\t".join(_LABEL_HEADER)]
    for r in records:
        lines.append(
            "\t".join(
                [
                    r.doc_id,
                    "1" if r.offensive else "0",
                    ",".join(sorted(r.hate_targets)),
                    "1" if r.vulgar else "0",
                    "1" if r.violence else "0",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_labels(path: str, records: Iterable[LabelRecord]) -> None:
    atomic_write_text(path, dump_labels(records))


# --- splits -------------------------------------------------------------


@dataclass(frozen=True)
class DatasetSplit:
    train: frozenset[str]
    dev: frozenset[str]
    test: frozenset[str]
    seed: int = 0

    def __post_init__(self) -> None:
        if self.train & self.dev or self.train & self.test or self.dev & self.test:
            raise ValueError("split parts must be disjoint")

    @property
    def all_ids(self) -> frozenset[str]:
        return self.train | self.dev | self.test

    def part(self, name: str) -> frozenset[str]:
        if name not in _SPLIT_NAMES:
            raise ValueError(f"unknown split part {name!r}")
        return getattr(self, name)


def stratified_split(
    labels: Mapping[str, LabelRecord] | Iterable[LabelRecord],
    ratios: tuple[float, float, float] = (0.70, 0.10, 0.20),
    seed: int = 0,
) -> DatasetSplit:
    """Split doc ids train/dev/test, stratified on the offensive label.

    Within each class: dev and test sizes are round(ratio * n_class), the
    remainder goes to train. Deterministic in (label set, ratios, seed);
    input iteration order does not matter. A class with fewer than 3
    members is left whole in train (with a warning).
    """
    if isinstance(labels, Mapping):
        records = list(labels.values())
    else:
        records = list(labels)
    if not records:
        raise ValueError("empty label set")
    if len(ratios) != 3:
        raise ValueError("ratios must be (train, dev, test)")
    if any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must be non-negative and sum to 1, got {ratios!r}")

    by_class: dict[bool, list[str]] = {}
    for r in records:
        by_class.setdefault(r.offensive, []).append(r.doc_id)

    rng = random.Random(seed)
    parts: dict[str, set[str]] = {name: set() for name in _SPLIT_NAMES}
    for cls in sorted(by_class):
        ids = sorted(by_class[cls])
        rng.shuffle(ids)
        n = len(ids)
        if n < 3:
            warnings.warn(
                f"class offensive={cls} has only {n} item(s); assigning all to train",
                stacklevel=2,
            )
            parts["train"].update(ids)
            continue
        n_dev = round_half_up(ratios[1] * n)
        n_test = round_half_up(ratios[2] * n)
        n_train = n - n_dev - n_test
        parts["train"].update(ids[:n_train])
        parts["dev"].update(ids[n_train : n_train + n_dev])
        parts["test"].update(ids[n_train + n_dev :])
    return DatasetSplit(
        train=frozenset(parts["train"]),
        dev=frozenset(parts["dev"]),
        test=frozenset(parts["test"]),
        seed=seed,
    )


def dump_split(split: DatasetSplit) -> str:
    lines: list[str] = []
    for name in _SPLIT_NAMES:
        lines.append(f"{name}:")
        lines.extend(sorted(split.part(name)))
    return "\n".join(lines) + "\n"


def write_split(path: str, split: DatasetSplit) -> None:
    atomic_write_text(path, dump_split(split))


def load_split(path: str) -> DatasetSplit:
    parts: dict[str, set[str]] = {name: set() for name in _SPLIT_NAMES}
    current: str | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.endswith(":"):
                name = line[:-1]
                if name not in _SPLIT_NAMES:
                    raise ValueError(f"{path}: line {lineno}: unknown section {name!r}")
                current = name
                continue
            if current is None:
                raise ValueError(f"{path}: line {lineno}: doc id before any section header")
            parts[current].add(line)
    return DatasetSplit(
        train=frozenset(parts["train"]),
        dev=frozenset(parts["dev"]),
        test=frozenset(parts["test"]),
    )
