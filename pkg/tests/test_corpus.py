from __future__ import annotations

from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anchorlex.corpus import (
    DatasetSplit,
    Document,
    LabelRecord,
    dump_corpus,
    dump_labels,
    dump_split,
    format_timestamp,
    load_corpus,
    load_labels,
    load_split,
    parse_timestamp,
    stratified_split,
    write_corpus,
    write_labels,
    write_split,
)
from anchorlex.synth import make_label_set
from anchorlex.util import round_half_up

from conftest import TS, doc, label


# --- documents and labels -------------------------------------------------


def test_document_rejects_empty_id_and_nul():
    with pytest.raises(ValueError):
        Document(id="", text="x", created_at=TS)
    with pytest.raises(ValueError):
        Document(id="a", text="x\x00y", created_at=TS)


def test_label_record_monotonicity():
    with pytest.raises(ValueError):
        LabelRecord(doc_id="d", offensive=False, vulgar=True)
    with pytest.raises(ValueError):
        LabelRecord(doc_id="d", offensive=False, hate_targets=frozenset({"race"}))
    rec = LabelRecord(doc_id="d", offensive=True, hate_targets=frozenset({"race"}))
    assert rec.is_hate
    assert not LabelRecord(doc_id="d", offensive=True).is_hate


def test_label_record_rejects_unknown_target():
    with pytest.raises(ValueError):
        LabelRecord(doc_id="d", offensive=True, hate_targets=frozenset({"astrology"}))


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("2021-05-01T12:00:00Z", datetime(2021, 5, 1, 12, tzinfo=timezone.utc)),
        ("2021-05-01T12:00:00+00:00", datetime(2021, 5, 1, 12, tzinfo=timezone.utc)),
        ("2021-05-01T12:00:00", datetime(2021, 5, 1, 12, tzinfo=timezone.utc)),
        # non-UTC offsets convert; microseconds truncate
        ("2021-05-01T14:00:00+02:00", datetime(2021, 5, 1, 12, tzinfo=timezone.utc)),
        ("2021-05-01T12:00:00.999Z", datetime(2021, 5, 1, 12, tzinfo=timezone.utc)),
    ],
)
def test_parse_timestamp(raw, expected):
    assert parse_timestamp(raw) == expected


def test_format_timestamp_round_trip():
    assert format_timestamp(TS) == "2021-05-01T12:00:00Z"
    assert parse_timestamp(format_timestamp(TS)) == TS


def test_corpus_jsonl_round_trip(tmp_path):
    docs = [doc(0, "hello \U0001F437"), doc(1, "tab\tand \"quote\"", lang="ar")]
    p = tmp_path / "c.jsonl"
    write_corpus(str(p), docs)
    assert load_corpus(str(p)) == docs


def test_corpus_tsv_round_trip(tmp_path):
    docs = [doc(0, "hello there"), doc(1, "كلب", lang="ar")]
    p = tmp_path / "c.tsv"
    write_corpus(str(p), docs, format="tsv")
    assert load_corpus(str(p), format="tsv") == docs


def test_corpus_missing_field_names_line(tmp_path):
    p = tmp_path / "bad.jsonl"
    p.write_text('{"id": "a", "text": "x", "created_at": "2021-05-01T12:00:00Z"}\n{"id": "b"}\n', encoding="utf-8")
    with pytest.raises(ValueError, match="line 2.*text"):
        load_corpus(str(p))


def test_corpus_duplicate_id(tmp_path):
    p = tmp_path / "dup.jsonl"
    write_corpus(str(p), [doc(0, "x")])
    raw = p.read_text(encoding="utf-8")
    p.write_text(raw + raw, encoding="utf-8")
    with pytest.raises(ValueError, match="duplicate"):
        load_corpus(str(p))


def test_labels_round_trip(tmp_path):
    recs = [
        label(0),
        label(1, offensive=True, hate_targets=("race", "religion")),
        label(2, offensive=True, vulgar=True, violence=True),
    ]
    p = tmp_path / "labels.tsv"
    write_labels(str(p), recs)
    got = load_labels(str(p))
    assert got == {r.doc_id: r for r in recs}
    # hate_targets serialize sorted
    line = dump_labels(recs).splitlines()[2]
    assert "race,religion" in line


def test_labels_bad_header(tmp_path):
    p = tmp_path / "labels.tsv"
    p.write_text("doc\toffensive\n", encoding="utf-8")
    with pytest.raises(ValueError, match="header"):
        load_labels(str(p))


# --- splits ----------------------------------------------------------------


def test_split_parts_disjoint():
    with pytest.raises(ValueError):
        DatasetSplit(train=frozenset({"a"}), dev=frozenset({"a"}), test=frozenset(), seed=0)


def test_stratified_split_exact_class_counts():
    labels = {}
    for i in range(10):
        labels[f"p{i}"] = LabelRecord(doc_id=f"p{i}", offensive=True)
    for i in range(20):
        labels[f"n{i}"] = LabelRecord(doc_id=f"n{i}", offensive=False)
    split = stratified_split(labels, (0.7, 0.1, 0.2), seed=3)
    pos = {d for d, r in labels.items() if r.offensive}
    assert len(split.dev & pos) == 1 and len(split.test & pos) == 2
    assert len(split.train & pos) == 7
    neg = set(labels) - pos
    assert len(split.dev & neg) == 2 and len(split.test & neg) == 4
    assert len(split.train & neg) == 14
    assert split.all_ids == frozenset(labels)


def test_stratified_split_deterministic_and_seed_sensitive():
    labels = make_label_set(300, 90, seed=1)
    a = stratified_split(labels, seed=5)
    b = stratified_split(labels, seed=5)
    c = stratified_split(labels, seed=6)
    assert (a.train, a.dev, a.test) == (b.train, b.dev, b.test)
    assert (a.train, a.dev, a.test) != (c.train, c.dev, c.test)


def test_stratified_split_tiny_class_goes_to_train():
    labels = {
        "p0": LabelRecord(doc_id="p0", offensive=True),
        "p1": LabelRecord(doc_id="p1", offensive=True),
        **{f"n{i}": LabelRecord(doc_id=f"n{i}", offensive=False) for i in range(10)},
    }
    with pytest.warns(UserWarning, match="assigning all to train"):
        split = stratified_split(labels)
    assert {"p0", "p1"} <= split.train


def test_stratified_split_bad_ratios():
    labels = make_label_set(10, 3)
    with pytest.raises(ValueError):
        stratified_split(labels, (0.5, 0.2, 0.2))  # does not sum to 1
    with pytest.raises(ValueError):
        stratified_split(labels, (0.9, -0.1, 0.2))


@settings(max_examples=40, deadline=None)
@given(
    n_total=st.integers(min_value=3, max_value=120),
    frac=st.floats(min_value=0.0, max_value=1.0),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_stratified_split_partition_invariants(n_total, frac, seed):
    n_pos = min(n_total, max(0, round(frac * n_total)))
    labels = make_label_set(n_total, n_pos, seed=seed)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        split = stratified_split(labels, (0.7, 0.1, 0.2), seed=seed)
    ids = frozenset(labels)
    assert split.train | split.dev | split.test == ids
    assert not (split.train & split.dev or split.train & split.test or split.dev & split.test)
    for positive in (True, False):
        cls = {d for d, r in labels.items() if r.offensive is positive}
        if len(cls) < 3:
            assert cls <= split.train
            continue
        assert len(split.dev & cls) == round_half_up(0.1 * len(cls))
        assert len(split.test & cls) == round_half_up(0.2 * len(cls))


def test_split_file_round_trip(tmp_path):
    labels = make_label_set(40, 12, seed=2)
    split = stratified_split(labels, seed=9)
    p = tmp_path / "split.txt"
    write_split(str(p), split)
    got = load_split(str(p))
    assert (got.train, got.dev, got.test) == (split.train, split.dev, split.test)
    text = dump_split(split)
    assert text.startswith("train:")
    # ids listed sorted inside each section
    lines = text.splitlines()
    sec = lines[1 : 1 + len(split.train)]
    assert sec == sorted(sec)


def test_split_part_lookup():
    s = DatasetSplit(frozenset({"a"}), frozenset({"b"}), frozenset({"c"}), seed=0)
    assert s.part("dev") == frozenset({"b"})
    with pytest.raises(ValueError):
        s.part("validation")
