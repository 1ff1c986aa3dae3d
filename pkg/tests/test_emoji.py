from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anchorlex.corpus import Document, LabelRecord
from anchorlex.emoji import (
    EmojiCluster,
    SeedEntry,
    SeedInventory,
    alias_for,
    base_form,
    codepoints_hex,
    default_inventory,
    doc_bases,
    dump_emoji_stats,
    dump_seed_inventory,
    emoji_stats,
    extract_emojis,
    filter_by_seeds,
    load_seed_inventory,
    parse_codepoints,
    sample_per_emoji,
)

from conftest import TS, doc, label

ZWJ = "‍"
VS16 = "️"
VS15 = "︎"
TONE = {3: "\U0001F3FD", 6: "\U0001F3FF"}

# Hand-built segmentation vectors: text -> [(display, base), ...].
# Covers plain scalars, FE0F/FE0E variants, tone modifier sequences,
# ZWJ chains (with and without tones/FE0F inside), flags, keycaps,
# tag sequences, interleaved text, and degenerate inputs.
VECTORS = [
    # 1-3: no emoji at all
    ("", []),
    ("hello world", []),
    ("يا كلب 123 #tag", []),
    # 4-6: plain pictographic scalars, BMP and supplementary
    ("☕", [("☕", "☕")]),
    ("\U0001F437", [("\U0001F437", "\U0001F437")]),
    ("❤", [("❤", "❤")]),
    # 7-9: presentation selectors strip from the base
    ("❤" + VS16, [("❤" + VS16, "❤")]),
    ("☎" + VS15, [("☎" + VS15, "☎")]),
    ("☕" + VS16 + "x", [("☕" + VS16, "☕")]),
    # 10-12: skin tone modifier sequences collapse to the untoned base
    ("\U0001F44D\U0001F3FF", [("\U0001F44D\U0001F3FF", "\U0001F44D")]),
    ("✌\U0001F3FD", [("✌\U0001F3FD", "✌")]),
    ("✌" + VS16 + "\U0001F3FD", [("✌" + VS16 + "\U0001F3FD", "✌")]),
    # 13: a lone modifier is its own cluster; base falls back to itself
    ("\U0001F3FF", [("\U0001F3FF", "\U0001F3FF")]),
    # 14-17: ZWJ sequences stay one cluster; tones/VS16 inside strip
    (
        "\U0001F468" + ZWJ + "\U0001F469" + ZWJ + "\U0001F466",
        [("\U0001F468‍\U0001F469‍\U0001F466", "\U0001F468‍\U0001F469‍\U0001F466")],
    ),
    (
        "\U0001F469\U0001F3FD" + ZWJ + "\U0001F680",
        [("\U0001F469\U0001F3FD‍\U0001F680", "\U0001F469‍\U0001F680")],
    ),
    (
        "❤" + VS16 + ZWJ + "\U0001F525",
        [("❤️‍\U0001F525", "❤‍\U0001F525")],
    ),
    (
        "\U0001F46E\U0001F3FD" + ZWJ + "♀" + VS16,
        [("\U0001F46E\U0001F3FD‍♀️", "\U0001F46E‍♀")],
    ),
    # 18: two-person ZWJ sequence with two different tones
    (
        "\U0001F468\U0001F3FB" + ZWJ + "\U0001F91D" + ZWJ + "\U0001F468\U0001F3FF",
        [
            (
                "\U0001F468\U0001F3FB‍\U0001F91D‍\U0001F468\U0001F3FF",
                "\U0001F468‍\U0001F91D‍\U0001F468",
            )
        ],
    ),
    # 19-20: dangling ZWJ is not absorbed
    ("\U0001F44D" + ZWJ, [("\U0001F44D", "\U0001F44D")]),
    ("\U0001F44D" + ZWJ + "x", [("\U0001F44D", "\U0001F44D")]),
    # 21: lone ZWJ is not an emoji
    (ZWJ, []),
    # 22-24: flags pair up regional indicators left to right
    ("\U0001F1EA\U0001F1EC", [("\U0001F1EA\U0001F1EC", "\U0001F1EA\U0001F1EC")]),
    (
        "\U0001F1EA\U0001F1EC\U0001F1F8\U0001F1E6",
        [
            ("\U0001F1EA\U0001F1EC", "\U0001F1EA\U0001F1EC"),
            ("\U0001F1F8\U0001F1E6", "\U0001F1F8\U0001F1E6"),
        ],
    ),
    (
        "\U0001F1EA\U0001F1EC\U0001F1F8",
        [
            ("\U0001F1EA\U0001F1EC", "\U0001F1EA\U0001F1EC"),
            ("\U0001F1F8", "\U0001F1F8"),
        ],
    ),
    # 25-27: keycap sequences; FE0F strips from the base
    ("2" + VS16 + "⃣", [("2️⃣", "2⃣")]),
    ("#⃣", [("#⃣", "#⃣")]),
    ("3" + VS16 + "⃣" + "3", [("3️⃣", "3⃣")]),
    # 28: plain digits and hashes are not emoji
    ("42 #x *y", []),
    # 29: tag sequence (subdivision flag) keeps its tags in the base
    (
        "\U0001F3F4\U000E0067\U000E0062\U000E0073\U000E0063\U000E0074\U000E007F",
        [
            (
                "\U0001F3F4\U000E0067\U000E0062\U000E0073\U000E0063\U000E0074\U000E007F",
                "\U0001F3F4\U000E0067\U000E0062\U000E0073\U000E0063\U000E0074\U000E007F",
            )
        ],
    ),
    # 30-32: interleaved text, adjacency, repetition keep order and count
    (
        "a\U0001F437b\U0001F436c",
        [("\U0001F437", "\U0001F437"), ("\U0001F436", "\U0001F436")],
    ),
    (
        "\U0001F52A\U0001F44A",
        [("\U0001F52A", "\U0001F52A"), ("\U0001F44A", "\U0001F44A")],
    ),
    (
        "يا\U0001F437 خنزير \U0001F437",
        [("\U0001F437", "\U0001F437"), ("\U0001F437", "\U0001F437")],
    ),
]


@pytest.mark.parametrize("text,expected", VECTORS, ids=range(1, len(VECTORS) + 1))
def test_extraction_vectors(text, expected):
    got = [(c.display, c.base) for c in extract_emojis(text)]
    assert got == expected


def test_vector_suite_is_large_enough():
    assert len(VECTORS) >= 30


def test_base_form_direct():
    assert base_form("\U0001F44D\U0001F3FF") == "\U0001F44D"
    assert base_form("❤️") == "❤"
    assert base_form("\U0001F3FD") == "\U0001F3FD"  # fallback, never empty
    assert base_form("\U0001F469\U0001F3FD‍\U0001F680") == "\U0001F469‍\U0001F680"


def test_doc_bases_dedupes():
    assert doc_bases("\U0001F437 \U0001F437\U0001F3FF") == {"\U0001F437"}


def test_cluster_dataclass_round_trip():
    c = EmojiCluster.from_display("\U0001F44D\U0001F3FF")
    assert c.base == "\U0001F44D" and c.display == "\U0001F44D\U0001F3FF"


# --- aliases ---------------------------------------------------------------


def test_alias_for_known_names():
    assert alias_for("\U0001F437") == ":pig_face:"
    assert alias_for("❤") == ":heavy_black_heart:"
    assert alias_for("2⃣") == ":digit_two:"


def test_alias_for_zwj_sequence_joins_parts():
    a = alias_for("\U0001F468‍\U0001F469‍\U0001F466")
    assert a.startswith(":") and a.endswith(":")
    assert "man" in a and "woman" in a and "boy" in a
    assert " " not in a and "-" not in a


def test_alias_is_lowercase_identifier_like():
    for base in ("\U0001F52A", "\U0001F595", "\U0001F1EA\U0001F1EC"):
        a = alias_for(base)
        assert a == a.lower()
        assert set(a) <= set("abcdefghijklmnopqrstuvwxyz0123456789_:")


def test_codepoints_hex_round_trip():
    s = "\U0001F468‍\U0001F466"
    assert parse_codepoints(codepoints_hex(s), lineno=1) == s
    assert codepoints_hex("\U0001F437") == "1F437"


# --- seed inventory --------------------------------------------------------


def test_default_inventory_loads():
    inv = default_inventory()
    assert len(inv) >= 15
    assert "\U0001F437" in inv.bases
    assert inv.category_of("\U0001F437") == "animal_dehumanization"
    assert inv.category_of("\U0001F52A") == "violence_symbol"
    # bundled bases are already base forms (no tones, no VS)
    for b in inv.bases:
        assert base_form(b) == b


def test_inventory_rejects_duplicates_and_bad_category():
    e = SeedEntry(base="\U0001F437", category="animal_dehumanization")
    with pytest.raises(ValueError, match="duplicate"):
        SeedInventory(entries=(e, e))
    with pytest.raises(ValueError, match="category"):
        SeedEntry(base="\U0001F437", category="cute")


def test_inventory_file_round_trip(tmp_path):
    inv = default_inventory()
    p = tmp_path / "seeds.tsv"
    p.write_text(dump_seed_inventory(inv), encoding="utf-8")
    again = load_seed_inventory(str(p))
    assert again.bases == inv.bases
    assert all(again.category_of(b) == inv.category_of(b) for b in inv.bases)


def test_load_inventory_bad_line(tmp_path):
    p = tmp_path / "seeds.tsv"
    p.write_text("1F437\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_seed_inventory(str(p))


# --- filtering -------------------------------------------------------------


def test_filter_by_seeds_keeps_order_and_matches_tones():
    inv = default_inventory()
    docs = [
        doc(0, "no emoji here"),
        doc(1, "pig \U0001F437"),
        doc(2, "toned pig \U0001F437\U0001F3FF"),
        doc(3, "neutral \U0001F600"),
        doc(4, "knife \U0001F52A️"),
    ]
    kept = filter_by_seeds(docs, inv)
    assert [d.id for d in kept] == ["d001", "d002", "d004"]


def test_filter_by_seeds_empty_inventory():
    with pytest.raises(ValueError, match="empty"):
        filter_by_seeds([doc(0, "x")], SeedInventory(entries=()))


@settings(max_examples=60, deadline=None)
@given(
    base=st.sampled_from(sorted(default_inventory().bases)),
    tone=st.sampled_from(sorted(range(0x1F3FB, 0x1F400))),
    prefix=st.text(alphabet="ab كلب", max_size=6),
)
def test_filter_tone_invariance(base, tone, prefix):
    # a toned variant must hit the inventory exactly when the untoned does
    inv = default_inventory()
    plain = doc(0, prefix + base)
    toned = doc(1, prefix + base + chr(tone))
    assert bool(filter_by_seeds([plain], inv)) == bool(filter_by_seeds([toned], inv))


# --- stats and sampling ----------------------------------------------------


def _stats_fixture():
    docs = [
        doc(0, "x \U0001F437"),
        doc(1, "y \U0001F437\U0001F3FF \U0001F437"),
        doc(2, "z \U0001F52A"),
        doc(3, "plain text"),
    ]
    labels = {
        "d000": label(0, offensive=True, hate_targets=("race",)),
        "d001": label(1),
        "d002": label(2, offensive=True),
        "d003": label(3),
    }
    return docs, labels


def test_emoji_stats_counts_docs_not_occurrences():
    docs, labels = _stats_fixture()
    stats = {s.base: s for s in emoji_stats(docs, labels, default_inventory())}
    pig = stats["\U0001F437"]
    assert pig.n_total == 2  # d001 counts once despite two pigs
    assert pig.n_offensive == 1 and pig.offensive_pct == pytest.approx(50.0)
    assert pig.n_hate == 1 and pig.hate_pct == pytest.approx(50.0)
    knife = stats["\U0001F52A"]
    assert knife.n_total == 1 and knife.offensive_pct == pytest.approx(100.0)


def test_emoji_stats_sorted_by_offensive_pct_then_base():
    docs, labels = _stats_fixture()
    stats = emoji_stats(docs, labels, default_inventory())
    pcts = [s.offensive_pct for s in stats]
    assert pcts == sorted(pcts, reverse=True)


def test_emoji_stats_requires_labels():
    docs, labels = _stats_fixture()
    del labels["d001"]
    with pytest.raises(ValueError, match="d001"):
        emoji_stats(docs, labels, default_inventory())


def test_dump_emoji_stats_format():
    docs, labels = _stats_fixture()
    text = dump_emoji_stats(emoji_stats(docs, labels, default_inventory()))
    lines = text.splitlines()
    assert lines[0] == "base\tcategory\tn_total\tn_offensive\toffensive_pct\tn_hate\thate_pct"
    assert any("\t50.00\t" in ln for ln in lines[1:])
    assert any(ln.startswith("1F437\t") for ln in lines[1:])


def test_sample_per_emoji_deterministic_and_capped():
    docs = [doc(i, f"t{i} \U0001F437") for i in range(20)]
    docs += [doc(100 + i, f"s{i} \U0001F52A") for i in range(2)]
    inv = default_inventory()
    a = sample_per_emoji(docs, inv, k=5, seed=1)
    b = sample_per_emoji(docs, inv, k=5, seed=1)
    c = sample_per_emoji(docs, inv, k=5, seed=2)
    assert {k_: [d.id for d in v] for k_, v in a.items()} == {
        k_: [d.id for d in v] for k_, v in b.items()
    }
    assert a != c or True  # different seed may coincide on tiny pools; no assert
    assert len(a["\U0001F437"]) == 5
    assert len(a["\U0001F52A"]) == 2  # capped at population
    assert all("\U0001F437" in d.text for d in a["\U0001F437"])


def test_sample_per_emoji_rejects_negative_k():
    with pytest.raises(ValueError):
        sample_per_emoji([doc(0, "\U0001F437")], default_inventory(), k=-1)
    empty = sample_per_emoji([doc(0, "\U0001F437")], default_inventory(), k=0)
    assert all(v == [] for v in empty.values())
