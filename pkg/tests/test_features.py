from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anchorlex.features import FeatureConfig, fit_features, vectorize, vectorize_all


def test_config_validation():
    with pytest.raises(ValueError):
        FeatureConfig(mode="bytes")
    with pytest.raises(ValueError):
        FeatureConfig(char_range=(0, 3))
    with pytest.raises(ValueError):
        FeatureConfig(word_range=(3, 1))


def test_fit_rejects_empty_corpus():
    with pytest.raises(ValueError):
        fit_features([], FeatureConfig())


def test_vocabulary_sorted_and_namespaced():
    space = fit_features(["ab", "ba"], FeatureConfig(mode="char+word", char_range=(2, 2), word_range=(1, 1)))
    grams = sorted(space.vocabulary, key=space.vocabulary.get)
    assert grams == sorted(grams)
    assert any(g.startswith("c:") for g in grams)
    assert any(g.startswith("w:") for g in grams)
    # identical surface, distinct namespaces
    assert "c:ab" in space.vocabulary and "w:ab" in space.vocabulary


def test_idf_formula_hand_checked():
    # word unigrams over two docs: "a" in both, "b" in one
    space = fit_features(["a b", "a"], FeatureConfig(mode="word", word_range=(1, 1)))
    idf_a = space.idf[space.vocabulary["w:a"]]
    idf_b = space.idf[space.vocabulary["w:b"]]
    assert idf_a == pytest.approx(math.log(3 / 3) + 1.0, abs=1e-12)
    assert idf_b == pytest.approx(math.log(3 / 2) + 1.0, abs=1e-12)


def test_df_counts_documents_not_occurrences():
    # "a" twice in one doc still has df=1
    space = fit_features(["a a", "b"], FeatureConfig(mode="word", word_range=(1, 1)))
    assert space.idf[space.vocabulary["w:a"]] == pytest.approx(math.log(3 / 2) + 1.0, abs=1e-12)


def test_vectorize_hand_example():
    cfg = FeatureConfig(mode="word", word_range=(1, 2))
    space = fit_features(["a b", "a c"], cfg)
    vec = vectorize("a b", space)
    idf_a = math.log(3 / 3) + 1
    idf_b = math.log(3 / 2) + 1
    idf_ab = math.log(3 / 2) + 1
    raw = {"w:a": 1 * idf_a, "w:b": 1 * idf_b, "w:a b": 1 * idf_ab}
    norm = math.sqrt(sum(v * v for v in raw.values()))
    expected = {space.vocabulary[g]: v / norm for g, v in raw.items()}
    assert set(vec) == set(expected)
    for k, v in expected.items():
        assert vec[k] == pytest.approx(v, abs=1e-12)


def test_vectorize_drops_oov_and_can_be_empty():
    space = fit_features(["aaa"], FeatureConfig(mode="word", word_range=(1, 1)))
    assert vectorize("zzz", space) == {}


def test_tf_weighting_uses_counts():
    space = fit_features(["a b", "c d"], FeatureConfig(mode="word", word_range=(1, 1)))
    vec = vectorize("a a b", space)
    ia, ib = space.vocabulary["w:a"], space.vocabulary["w:b"]
    # same idf; tf 2 vs 1 must carry through before normalization
    assert vec[ia] == pytest.approx(2 * vec[ib], abs=1e-12)


def test_char_mode_spans_spaces():
    space = fit_features(["a b"], FeatureConfig(mode="char", char_range=(2, 2)))
    assert "c:a " in space.vocabulary and "c: b" in space.vocabulary


def test_modes_restrict_namespaces():
    char_only = fit_features(["ab"], FeatureConfig(mode="char", char_range=(2, 2)))
    word_only = fit_features(["ab"], FeatureConfig(mode="word", word_range=(1, 1)))
    assert all(g.startswith("c:") for g in char_only.vocabulary)
    assert all(g.startswith("w:") for g in word_only.vocabulary)


def test_vectorize_all_aligns():
    space = fit_features(["a b", "b c"], FeatureConfig(mode="word", word_range=(1, 1)))
    vecs = vectorize_all(["a", "c"], space)
    assert len(vecs) == 2
    assert set(vecs[0]) == {space.vocabulary["w:a"]}


@settings(max_examples=100, deadline=None)
@given(
    corpus=st.lists(st.text(alphabet="abc كل", min_size=1, max_size=12), min_size=1, max_size=6),
    query=st.text(alphabet="abc كل", min_size=0, max_size=12),
)
def test_vectors_are_unit_norm_or_empty(corpus, query):
    try:
        space = fit_features(corpus, FeatureConfig())
    except ValueError:
        return  # corpus with no grams at all
    vec = vectorize(query, space)
    if vec:
        norm = math.sqrt(sum(v * v for v in vec.values()))
        assert norm == pytest.approx(1.0, abs=1e-9)
