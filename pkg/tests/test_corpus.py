from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chronolex.corpus import (
    CorpusManifest,
    DocumentRef,
    LoadedDocument,
    SlicingConfig,
    build_slices,
    build_vocabulary,
    load_lemma_table,
    load_manifest,
    normalize_token,
    resolve_lemma_chains,
    tokenize,
)
from chronolex.errors import EmptyCorpus, EmptyVocabulary, InfeasibleSlicing
from oracles import hash_count


def manifest_for(docs: list[LoadedDocument], slicing: SlicingConfig) -> CorpusManifest:
    return CorpusManifest(
        corpus_id="t",
        language="english",
        documents=[DocumentRef(year=d.year, path="unused") for d in docs],
        slicing=slicing,
    )


def doc(year: int, n_tokens: int) -> LoadedDocument:
    return LoadedDocument(year=year, tokens=["x"] * n_tokens)


# ----------------------------------------------------------- normalize_token


def test_normalize_english_lowercases():
    assert normalize_token("Heart", "english") == "heart"


def test_normalize_english_idempotent_on_normalized_input():
    assert normalize_token("heart", "english") == "heart"


def test_normalize_german_lemma_lookup():
    assert normalize_token("Herzens", "german", {"herzens": "herz"}) == "herz"


def test_normalize_german_identity_when_absent():
    assert normalize_token("Und", "german", {"herzens": "herz"}) == "und"


@given(st.text(min_size=1, max_size=20))
def test_normalize_idempotent_english(token):
    once = normalize_token(token, "english")
    assert normalize_token(once, "english") == once


@given(
    st.text(min_size=1, max_size=12),
    st.dictionaries(
        st.text(min_size=1, max_size=6), st.text(min_size=1, max_size=6), max_size=8
    ),
)
def test_normalize_idempotent_german_with_resolved_table(token, raw_table):
    table = resolve_lemma_chains({k.lower(): v.lower() for k, v in raw_table.items()})
    once = normalize_token(token, "german", table)
    assert normalize_token(once, "german", table) == once


def test_lemma_chain_resolution_reaches_fixpoint():
    table = resolve_lemma_chains({"a": "b", "b": "c"})
    assert table == {"a": "c", "b": "c"}


def test_lemma_cycle_collapses_deterministically():
    table = resolve_lemma_chains({"b": "a", "a": "b"})
    assert table.get("b") == "a"
    assert "a" not in table  # representative maps to itself


def test_load_lemma_table_rejects_malformed_rows(tmp_path):
    path = tmp_path / "lemmas.tsv"
    path.write_text("Herzens\therz\nbroken-line\n", encoding="utf-8")
    with pytest.raises(ValueError, match="broken-line"):
        load_lemma_table(path)


def test_tokenize_strips_punctuation():
    assert tokenize("Stop, look; listen!") == ["Stop", "look", "listen"]


# --------------------------------------------------------------- build_slices


def test_fixed_span_partition():
    docs = [doc(y, 100) for y in range(1830, 1860)]
    slices = build_slices(manifest_for(docs, SlicingConfig("fixed_span", span_years=10)), docs)
    assert [(s.start_year, s.end_year) for s in slices] == [
        (1830, 1839),
        (1840, 1849),
        (1850, 1859),
    ]
    assert [s.token_count for s in slices] == [1000, 1000, 1000]
    assert [s.label_year for s in slices] == [1830, 1840, 1850]


def test_balanced_greedy_sweep_hand_case():
    # four equal documents at 1900/1910/1920/1930, two target slices:
    # the sweep closes after 1910 and the tail is clipped at the last year
    docs = [doc(y, 500) for y in (1900, 1910, 1920, 1930)]
    slices = build_slices(
        manifest_for(docs, SlicingConfig("balanced", target_slices=2)), docs
    )
    assert [(s.start_year, s.end_year) for s in slices] == [(1900, 1919), (1920, 1930)]
    assert [s.token_count for s in slices] == [1000, 1000]


def test_single_year_corpus_single_slice():
    docs = [doc(1830, 50), doc(1830, 70)]
    slices = build_slices(manifest_for(docs, SlicingConfig("fixed_span", span_years=10)), docs)
    assert len(slices) == 1
    assert slices[0].start_year == 1830
    assert slices[0].token_count == 120


def test_empty_corpus_raises():
    with pytest.raises(EmptyCorpus):
        build_slices(manifest_for([], SlicingConfig("fixed_span", span_years=10)), [])


def test_fixed_span_empty_middle_span_is_infeasible():
    docs = [doc(1830, 10), doc(1855, 10)]
    with pytest.raises(InfeasibleSlicing):
        build_slices(manifest_for(docs, SlicingConfig("fixed_span", span_years=10)), docs)


def test_balanced_huge_gap_is_infeasible():
    docs = [doc(1800, 10), doc(1900, 10)]
    with pytest.raises(InfeasibleSlicing):
        build_slices(manifest_for(docs, SlicingConfig("balanced", target_slices=2)), docs)


def test_heavy_year_is_not_an_error():
    # one year holding far more than the per-slice target closes late but works
    docs = [doc(1900, 10), doc(1910, 5000), doc(1920, 10), doc(1930, 10)]
    slices = build_slices(
        manifest_for(docs, SlicingConfig("balanced", target_slices=3)), docs
    )
    assert sum(s.token_count for s in slices) == 5030


@st.composite
def year_masses(draw):
    n_years = draw(st.integers(min_value=25, max_value=45))
    start = draw(st.integers(min_value=1700, max_value=1950))
    gaps = draw(st.lists(st.integers(1, 2), min_size=n_years - 1, max_size=n_years - 1))
    years = [start]
    for g in gaps:
        years.append(years[-1] + g)
    masses = draw(
        st.lists(st.integers(1000, 2000), min_size=n_years, max_size=n_years)
    )
    return list(zip(years, masses))


@settings(max_examples=40, deadline=None)
@given(year_masses(), st.integers(min_value=2, max_value=5))
def test_balanced_slices_partition_and_stay_roughly_even(pairs, target):
    docs = [doc(year, mass) for year, mass in pairs]
    slices = build_slices(
        manifest_for(docs, SlicingConfig("balanced", target_slices=target)), docs
    )
    # contiguity and coverage of the document-year range
    assert slices[0].start_year == min(y for y, _ in pairs)
    assert slices[-1].end_year == max(y for y, _ in pairs)
    for prev, nxt in zip(slices, slices[1:]):
        assert nxt.start_year == prev.end_year + 1
    # per-year mass here is well under a quarter of the total, so slice masses
    # stay within a factor of three of each other
    masses = [s.token_count for s in slices]
    assert max(masses) <= 3 * min(masses)
    spans = [s.end_year - s.start_year + 1 for s in slices]
    assert all(span <= 50 for span in spans)


@settings(max_examples=40, deadline=None)
@given(year_masses())
def test_fixed_span_contiguous_cover(pairs):
    docs = [doc(year, mass) for year, mass in pairs]
    slices = build_slices(manifest_for(docs, SlicingConfig("fixed_span", span_years=10)), docs)
    assert slices[0].start_year == min(y for y, _ in pairs)
    assert slices[-1].end_year >= max(y for y, _ in pairs)
    for prev, nxt in zip(slices, slices[1:]):
        assert nxt.start_year == prev.end_year + 1
        assert prev.end_year - prev.start_year + 1 == 10
    assert sum(s.token_count for s in slices) == sum(m for _, m in pairs)


# ------------------------------------------------------------ build_vocabulary


def test_vocabulary_counts_and_ids():
    vocab = build_vocabulary("a a b".split(), min_count=1)
    assert dict(vocab.items()) == {"a": 2, "b": 1}
    assert vocab.id_of("a") == 0
    assert vocab.id_of("b") == 1


def test_vocabulary_threshold_filters():
    vocab = build_vocabulary("a a b".split(), min_count=2)
    assert dict(vocab.items()) == {"a": 2}


def test_vocabulary_empty_raises():
    with pytest.raises(EmptyVocabulary):
        build_vocabulary(["a", "b"], min_count=3)


def test_vocabulary_ties_break_lexicographically():
    vocab = build_vocabulary("b a c a b c".split(), min_count=1)
    assert vocab.words == ["a", "b", "c"]


def test_vocabulary_matches_hash_count_oracle_at_scale():
    rng = random.Random(5)
    words = [f"tok{i:03d}" for i in range(400)]
    tokens = rng.choices(words, weights=range(1, 401), k=1_000_000)
    vocab = build_vocabulary(tokens, min_count=10)
    expected = {w: c for w, c in hash_count(tokens).items() if c >= 10}
    assert dict(vocab.items()) == expected
    order = sorted(expected.items(), key=lambda wc: (-wc[1], wc[0]))
    assert vocab.words == [w for w, _ in order]


def test_vocabulary_deterministic_under_permutation():
    tokens = "c a b a c b a x".split()
    shuffled = tokens[:]
    random.Random(0).shuffle(shuffled)
    v1 = build_vocabulary(tokens, min_count=1)
    v2 = build_vocabulary(shuffled, min_count=1)
    assert v1.words == v2.words
    assert v1.counts == v2.counts


# ------------------------------------------------------------------- manifest


def test_load_manifest_roundtrip(tmp_path):
    (tmp_path / "d1.txt").write_text("Alpha beta!", encoding="utf-8")
    manifest_path = tmp_path / "m.json"
    manifest_path.write_text(
        json.dumps(
            {
                "corpus_id": "demo",
                "language": "english",
                "slicing": {"mode": "fixed_span", "span_years": 10},
                "documents": [{"year": 1900, "path": "d1.txt"}],
            }
        ),
        encoding="utf-8",
    )
    manifest = load_manifest(manifest_path)
    assert manifest.corpus_id == "demo"
    assert manifest.documents[0].path == tmp_path / "d1.txt"
    # manifest-only invocation loads and normalizes the documents itself
    slices = build_slices(manifest)
    assert [(s.start_year, s.end_year, s.token_count) for s in slices] == [(1900, 1909, 2)]
    assert all(s.label_year == s.start_year for s in slices)


def test_manifest_rejects_english_lemma_table(tmp_path):
    manifest_path = tmp_path / "m.json"
    manifest_path.write_text(
        json.dumps(
            {
                "corpus_id": "demo",
                "language": "english",
                "slicing": {"mode": "fixed_span", "span_years": 10},
                "documents": [{"year": 1900, "path": "d1.txt"}],
                "lemma_table": "l.tsv",
            }
        ),
        encoding="utf-8",
    )
    with pytest.raises(ValueError, match="lemma table"):
        load_manifest(manifest_path)


def test_manifest_rejects_out_of_range_year(tmp_path):
    manifest_path = tmp_path / "m.json"
    manifest_path.write_text(
        json.dumps(
            {
                "corpus_id": "demo",
                "language": "english",
                "slicing": {"mode": "fixed_span", "span_years": 10},
                "documents": [{"year": 999, "path": "d1.txt"}],
            }
        ),
        encoding="utf-8",
    )
    with pytest.raises(ValueError, match="999"):
        load_manifest(manifest_path)


def test_slicing_config_rejects_out_of_bound_span():
    with pytest.raises(ValueError):
        SlicingConfig("fixed_span", span_years=5).validate()
    with pytest.raises(ValueError):
        SlicingConfig("fixed_span", span_years=60).validate()
