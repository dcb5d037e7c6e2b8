from __future__ import annotations

import hashlib
import threading

import numpy as np
import pytest

from chronolex.corpus import TimeSlice, Vocabulary
from chronolex.embed import cosine
from chronolex.emotion import VadScore
from chronolex.errors import ConsistencyError, UnknownCorpus, UnknownWord
from chronolex.store import ModelStore, SliceArtifacts

PARAMS = {"d": 3, "top_k": 2, "context_k": 2, "min_count": 1}


def vocab_from(words: list[str]) -> Vocabulary:
    return Vocabulary(words=words, counts=[10 - i for i in range(len(words))], min_count=1)


def make_artifacts(slice_id: int, words: list[str], vectors: np.ndarray, year: int = 1900) -> SliceArtifacts:
    n = len(words)
    emotions = {i: VadScore(4.0 + i, 5.0, 6.0 - 0.5 * i) for i in range(n)}
    top, ctx = {}, {}
    for i in range(n):
        others = [
            (j, cosine(vectors[i], vectors[j]))
            for j in range(n)
            if j != i
        ]
        others.sort(key=lambda jc: (-jc[1], words[jc[0]]))
        top[i] = others[:2]
        ctx[i] = [(j, 1.0 + j) for j, _ in others[:2]]
    return SliceArtifacts(
        slice_meta=TimeSlice(
            slice_id=slice_id,
            label_year=year + slice_id * 10,
            start_year=year + slice_id * 10,
            end_year=year + slice_id * 10 + 9,
            token_count=100,
        ),
        vocabulary=vocab_from(words),
        vectors=vectors.astype(np.float32),
        emotions=emotions,
        top_similar=top,
        contexts=ctx,
    )


@pytest.fixture
def small_store(tmp_path):
    store = ModelStore(tmp_path / "s.store")
    store.add_corpus("c1", "english", PARAMS)
    rng = np.random.default_rng(1)
    words0 = ["alpha", "beta", "gamma", "delta", "eps"]
    store.write_slice("c1", make_artifacts(0, words0, rng.standard_normal((5, 3))))
    words1 = ["alpha", "beta", "zeta"]
    store.write_slice("c1", make_artifacts(1, words1, rng.standard_normal((3, 3))))
    return store


# ------------------------------------------------------------------ round trip


def test_round_trip_is_field_exact(small_store):
    loaded = ModelStore.load(small_store.path)
    assert loaded.corpora() == ["c1"]
    assert loaded.params("c1") == PARAMS
    assert [s.slice_id for s in loaded.slices("c1")] == [0, 1]
    for key in ((("c1", 0)), (("c1", 1))):
        assert loaded._words[key] == small_store._words[key]
        assert loaded._vectors[key].tobytes() == small_store._vectors[key].tobytes()
        assert loaded._emotions[key] == small_store._emotions[key]
        assert loaded._top_similar[key] == small_store._top_similar[key]
        assert loaded._contexts[key] == small_store._contexts[key]


def test_rewrite_same_slice_is_idempotent(tmp_path):
    store = ModelStore(tmp_path / "s.store")
    store.add_corpus("c1", "english", PARAMS)
    rng = np.random.default_rng(2)
    artifacts = make_artifacts(0, ["a", "b", "c"], rng.standard_normal((3, 3)))
    store.write_slice("c1", artifacts)
    first = (tmp_path / "s.store").read_bytes()
    store.write_slice("c1", artifacts)
    assert (tmp_path / "s.store").read_bytes() == first


def test_concurrent_slice_writes_no_corruption(tmp_path):
    store = ModelStore(tmp_path / "s.store")
    store.add_corpus("c1", "english", PARAMS)
    rng = np.random.default_rng(3)
    jobs = [
        make_artifacts(i, [f"w{i}{j}" for j in range(4)], rng.standard_normal((4, 3)))
        for i in range(8)
    ]
    checksums = {
        a.slice_meta.slice_id: hashlib.sha256(a.vectors.tobytes()).hexdigest() for a in jobs
    }
    threads = [
        threading.Thread(target=store.write_slice, args=("c1", a)) for a in jobs
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    loaded = ModelStore.load(store.path)
    assert [s.slice_id for s in loaded.slices("c1")] == list(range(8))
    for sid, digest in checksums.items():
        assert hashlib.sha256(loaded._vectors[("c1", sid)].tobytes()).hexdigest() == digest


def test_write_rejects_shape_mismatch(tmp_path):
    store = ModelStore(tmp_path / "s.store")
    store.add_corpus("c1", "english", PARAMS)
    artifacts = make_artifacts(0, ["a", "b"], np.zeros((3, 3)))
    with pytest.raises(ConsistencyError):
        store.write_slice("c1", artifacts)
    # the failed write left nothing behind
    assert store.slices("c1") == []


def test_write_rejects_wrong_dimension(tmp_path):
    store = ModelStore(tmp_path / "s.store")
    store.add_corpus("c1", "english", PARAMS)
    with pytest.raises(ConsistencyError):
        store.write_slice("c1", make_artifacts(0, ["a", "b"], np.zeros((2, 5))))


def test_write_rejects_overfull_cache(tmp_path):
    store = ModelStore(tmp_path / "s.store")
    store.add_corpus("c1", "english", PARAMS)
    artifacts = make_artifacts(0, ["a", "b", "c"], np.eye(3))
    artifacts.top_similar = {0: [(1, 0.5), (2, 0.4), (1, 0.3)]}
    with pytest.raises(ConsistencyError):
        store.write_slice("c1", artifacts)


def test_write_to_unknown_corpus(tmp_path):
    store = ModelStore(tmp_path / "s.store")
    with pytest.raises(UnknownCorpus):
        store.write_slice("nope", make_artifacts(0, ["a"], np.zeros((1, 3))))


# -------------------------------------------------------------------- queries


def test_self_similarity_is_one(small_store):
    series = small_store.similarity_on_the_fly("c1", "alpha", "alpha")
    assert len(series) == 2
    for _, value in series:
        assert value == pytest.approx(1.0, abs=1e-12)


def test_similarity_skips_missing_slices(small_store):
    series = small_store.similarity_on_the_fly("c1", "alpha", "zeta")
    assert [slc.slice_id for slc, _ in series] == [1]


def test_similarity_disjoint_coverage_empty(small_store):
    series = small_store.similarity_on_the_fly("c1", "gamma", "zeta")
    assert series == []


def test_similarity_unknown_word_names_offender(small_store):
    with pytest.raises(UnknownWord) as err:
        small_store.similarity_on_the_fly("c1", "alpha", "missing")
    assert err.value.word == "missing"


def test_similarity_unknown_corpus(small_store):
    with pytest.raises(UnknownCorpus):
        small_store.similarity_on_the_fly("cX", "alpha", "beta")


def test_cached_neighbors_match_on_the_fly(small_store):
    for slc in small_store.slices("c1"):
        words, _ = small_store.slice_words("c1", slc.slice_id)
        for word in words:
            for neighbor, cached in small_store.top_similar_rows("c1", slc.slice_id, word):
                live = small_store.similarity_on_the_fly("c1", word, neighbor)
                live_here = dict((s.slice_id, v) for s, v in live)[slc.slice_id]
                assert abs(live_here - cached) <= 1e-6


def test_reference_words_single_slice_matches_cache(tmp_path):
    store = ModelStore(tmp_path / "one.store")
    store.add_corpus("c1", "english", PARAMS)
    rng = np.random.default_rng(7)
    store.write_slice("c1", make_artifacts(0, ["a", "b", "c", "d"], rng.standard_normal((4, 3))))
    assert store.get_reference_words("c1", "a", 2) == store.top_similar_rows("c1", 0, "a")


def test_reference_words_ranked_by_best_cosine(tmp_path):
    store = ModelStore(tmp_path / "two.store")
    store.add_corpus("c1", "english", PARAMS)
    a0 = make_artifacts(0, ["a", "b", "c"], np.eye(3))
    a0.top_similar = {0: [(1, 0.6), (2, 0.2)], 1: [], 2: []}
    store.write_slice("c1", a0)
    a1 = make_artifacts(1, ["a", "b", "c"], np.eye(3))
    a1.top_similar = {0: [(1, 0.9), (2, 0.1)], 1: [], 2: []}
    store.write_slice("c1", a1)
    assert store.get_reference_words("c1", "a", 2) == [("b", 0.9), ("c", 0.2)]


def test_frequency_series(small_store):
    series = small_store.frequency_series("c1", "alpha")
    assert [slc.slice_id for slc, _ in series] == [0, 1]
    for _, value in series:
        assert value == 10 / 100


def test_emotion_series_omits_missing(small_store):
    series = small_store.emotion_series("c1", "gamma")
    assert [slc.slice_id for slc, _ in series] == [0]
    assert series[0][1] == VadScore(6.0, 5.0, 5.0)


def test_context_series(small_store):
    series = small_store.context_series("c1", "alpha", 2)
    assert len(series) == 2
    for _, rows in series:
        assert all(isinstance(w, str) for w, _ in rows)


def test_normalize_query_english(small_store):
    assert small_store.normalize_query("c1", "Alpha") == "alpha"


def test_normalize_query_german_uses_lemma_table(tmp_path):
    store = ModelStore(tmp_path / "g.store")
    store.add_corpus("g1", "german", PARAMS, lemma_table={"herzens": "herz"})
    assert store.normalize_query("g1", "Herzens") == "herz"
    assert store.normalize_query("g1", "Anderes") == "anderes"


# -------------------------------------------------------------- serialization


def test_vector_block_is_float32_little_endian(small_store):
    blob = small_store.path.read_bytes()
    mat = small_store._vectors[("c1", 0)]
    assert mat.astype("<f4").tobytes() in blob


def test_load_rejects_bad_magic(tmp_path):
    bad = tmp_path / "bad.store"
    bad.write_bytes(b"NOTSTORE" + b"\x00" * 64)
    with pytest.raises(ValueError, match="magic"):
        ModelStore.load(bad)


def test_csv_export_import_round_trip(small_store, tmp_path):
    out = tmp_path / "csvdump"
    small_store.export_csv(out)
    rebuilt = ModelStore.import_csv(out)
    assert rebuilt.corpora() == small_store.corpora()
    for key in small_store._vectors:
        assert rebuilt._vectors[key].tobytes() == small_store._vectors[key].tobytes()
    assert rebuilt._emotions == small_store._emotions
    assert rebuilt._top_similar == small_store._top_similar


def test_vector_storage_beats_pairwise_storage():
    # the reason vectors are stored at all: O(V d) beats O(V^2) pair scores
    v, d = 5000, 100
    rng = np.random.default_rng(0)
    vectors = rng.standard_normal((v, d)).astype(np.float32)
    vector_bytes = len(vectors.tobytes())
    pair_count = v * (v - 1) // 2
    pairwise_bytes = pair_count * 4  # float32 per unordered pair
    assert vector_bytes < pairwise_bytes


def test_add_corpus_clears_previous_slices(tmp_path):
    store = ModelStore(tmp_path / "s.store")
    store.add_corpus("c1", "english", PARAMS)
    rng = np.random.default_rng(5)
    store.write_slice("c1", make_artifacts(0, ["a", "b"], rng.standard_normal((2, 3))))
    store.write_slice("c1", make_artifacts(1, ["a", "b"], rng.standard_normal((2, 3))))
    store.add_corpus("c1", "english", PARAMS)
    store.write_slice("c1", make_artifacts(0, ["a", "b"], rng.standard_normal((2, 3))))
    assert [s.slice_id for s in store.slices("c1")] == [0]
