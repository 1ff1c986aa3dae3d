"""Shared fixtures: tiny corpora and label sets used across test modules."""

from __future__ import annotations

from datetime import datetime, timezone

import pytest

from anchorlex.corpus import Document, LabelRecord

TS = datetime(2021, 5, 1, 12, 0, 0, tzinfo=timezone.utc)


def doc(i: int, text: str, lang: str = "") -> Document:
    return Document(id=f"d{i:03d}", text=text, created_at=TS, lang=lang)


def label(
    i: int,
    offensive: bool = False,
    hate_targets: tuple[str, ...] = (),
    vulgar: bool = False,
    violence: bool = False,
) -> LabelRecord:
    return LabelRecord(
        doc_id=f"d{i:03d}",
        offensive=offensive,
        hate_targets=frozenset(hate_targets),
        vulgar=vulgar,
        violence=violence,
    )


@pytest.fixture
def tiny_corpus() -> tuple[list[Document], dict[str, LabelRecord]]:
    docs = [
        doc(0, "صباح الخير \U0001F600"),
        doc(1, "يا كلب يا غبي \U0001F437"),
        doc(2, "الجو جميل اليوم"),
        doc(3, "يا حقير \U0001F52A"),
    ]
    labels = {
        "d000": label(0),
        "d001": label(1, offensive=True),
        "d002": label(2),
        "d003": label(3, offensive=True, violence=True),
    }
    return docs, labels
