"""Single-file model store: slice vocabularies, vectors, emotions, cached neighbors.

Storing per-slice word vectors instead of pre-computed pairwise similarities
keeps the file small: similarity between arbitrary words is computed on the fly
from stored vectors, and only each word's top-K neighbors (the automatically
picked reference words) and top context words are cached.

File layout (all integers little-endian):

    bytes 0..7    magic ``CHRXSTOR``
    bytes 8..11   format version (uint32, currently 1)
    bytes 12..19  directory offset (uint64)
    bytes 20..27  directory length (uint64)
    bytes 28..    table blocks, back to back, in directory order
    directory     UTF-8 JSON: list of {name, kind, offset, length, meta}

Two block kinds exist. ``json`` blocks hold one logical table as a JSON list
of rows (corpora, slices, words, emotions, top_similar, contexts, lemmas).
``f32`` blocks hold one slice's vector matrix as rows * dim consecutive 32-bit
little-endian IEEE-754 floats; ``meta`` records corpus_id, slice_id, rows, dim.

Writes are one slice at a time and atomic (the whole file is rewritten to a
temp file and renamed); re-writing a slice replaces it idempotently. Serving
is read-only, so loaded stores are safe under concurrent readers.
"""

from __future__ import annotations

import csv
import json
import os
import struct
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from chronolex.corpus import TimeSlice, Vocabulary, normalize_token
from chronolex.embed import cosine
from chronolex.emotion import VadScore
from chronolex.errors import ConsistencyError, EmptySlice, UnknownCorpus, UnknownWord

MAGIC = b"CHRXSTOR"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sIQQ")

JSON_TABLES = ("corpora", "slices", "words", "emotions", "top_similar", "contexts", "lemmas")


@dataclass(frozen=True)
class CommitReceipt:
    corpus_id: str
    slice_id: int
    word_count: int
    path: Path | None


@dataclass
class SliceArtifacts:
    """Everything one pipeline slice contributes, validated as a unit."""

    slice_meta: TimeSlice
    vocabulary: Vocabulary
    vectors: np.ndarray
    emotions: Mapping[int, VadScore]
    top_similar: Mapping[int, Sequence[tuple[int, float]]]
    contexts: Mapping[int, Sequence[tuple[int, float]]]


class ModelStore:
    """In-memory logical tables with an atomic single-file persistence layer."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._corpora: dict[str, dict] = {}
        self._slices: dict[str, dict[int, TimeSlice]] = {}
        self._words: dict[tuple[str, int], tuple[list[str], list[int]]] = {}
        self._vectors: dict[tuple[str, int], np.ndarray] = {}
        self._emotions: dict[tuple[str, int], dict[int, tuple[float, float, float]]] = {}
        self._top_similar: dict[tuple[str, int], dict[int, list[tuple[int, float]]]] = {}
        self._contexts: dict[tuple[str, int], dict[int, list[tuple[int, float]]]] = {}
        self._lemmas: dict[str, dict[str, str]] = {}
        self._word_index: dict[tuple[str, int], dict[str, int]] = {}

    # ------------------------------------------------------------------ write

    def add_corpus(
        self,
        corpus_id: str,
        language: str,
        params: Mapping[str, object],
        lemma_table: Mapping[str, str] | None = None,
    ) -> None:
        """Register (or re-register) a corpus; prior slice data for it is dropped."""
        with self._lock:
            self._corpora[corpus_id] = {"language": language, "params": dict(params)}
            self._slices[corpus_id] = {}
            self._lemmas.pop(corpus_id, None)
            if lemma_table:
                self._lemmas[corpus_id] = dict(lemma_table)
            for table in (
                self._words,
                self._vectors,
                self._emotions,
                self._top_similar,
                self._contexts,
                self._word_index,
            ):
                for key in [k for k in table if k[0] == corpus_id]:
                    del table[key]
            self._commit_locked()

    def write_slice(self, corpus_id: str, artifacts: SliceArtifacts) -> CommitReceipt:
        """Validate and commit one slice atomically; re-runs overwrite in place."""
        if corpus_id not in self._corpora:
            raise UnknownCorpus(corpus_id)
        self._validate_artifacts(corpus_id, artifacts)
        slc = artifacts.slice_meta
        key = (corpus_id, slc.slice_id)
        vectors = np.ascontiguousarray(artifacts.vectors, dtype=np.float32)
        words = list(artifacts.vocabulary.words)
        counts = [int(c) for c in artifacts.vocabulary.counts]
        emotions = {int(w): tuple(float(x) for x in s.as_tuple()) for w, s in artifacts.emotions.items()}
        top = {int(w): [(int(n), float(c)) for n, c in rows] for w, rows in artifacts.top_similar.items()}
        ctx = {int(w): [(int(n), float(c)) for n, c in rows] for w, rows in artifacts.contexts.items()}
        with self._lock:
            self._slices[corpus_id][slc.slice_id] = slc
            self._words[key] = (words, counts)
            self._word_index.pop(key, None)
            self._vectors[key] = vectors
            self._emotions[key] = emotions
            self._top_similar[key] = top
            self._contexts[key] = ctx
            self._commit_locked()
        return CommitReceipt(corpus_id, slc.slice_id, len(words), self.path)

    def _validate_artifacts(self, corpus_id: str, artifacts: SliceArtifacts) -> None:
        vocab_size = len(artifacts.vocabulary)
        vectors = artifacts.vectors
        params = self._corpora[corpus_id]["params"]
        if vectors.ndim != 2 or vectors.shape[0] != vocab_size:
            raise ConsistencyError(
                f"vector matrix shape {vectors.shape} does not match vocabulary size {vocab_size}"
            )
        d = params.get("d")
        if d is not None and vectors.shape[1] != d:
            raise ConsistencyError(
                f"vector dimension {vectors.shape[1]} does not match corpus d={d}"
            )
        for table_name, mapping in (
            ("emotions", artifacts.emotions),
            ("top_similar", artifacts.top_similar),
            ("contexts", artifacts.contexts),
        ):
            bad = [w for w in mapping if not (0 <= int(w) < vocab_size)]
            if bad:
                raise ConsistencyError(f"{table_name} references out-of-range word ids {bad[:5]}")
        for name, mapping, cap_key in (
            ("top_similar", artifacts.top_similar, "top_k"),
            ("contexts", artifacts.contexts, "context_k"),
        ):
            cap = params.get(cap_key)
            for word_id, rows in mapping.items():
                if cap is not None and len(rows) > cap:
                    raise ConsistencyError(
                        f"{name} for word {word_id} has {len(rows)} rows, cap is {cap}"
                    )
                if any(not (0 <= int(n) < vocab_size) for n, _ in rows):
                    raise ConsistencyError(f"{name} for word {word_id} names unknown ids")

    # ------------------------------------------------------------- inspection

    def corpora(self) -> list[str]:
        return sorted(self._corpora)

    def has_corpus(self, corpus_id: str) -> bool:
        return corpus_id in self._corpora

    def _require_corpus(self, corpus_id: str) -> None:
        if corpus_id not in self._corpora:
            raise UnknownCorpus(corpus_id)

    def language(self, corpus_id: str) -> str:
        self._require_corpus(corpus_id)
        return self._corpora[corpus_id]["language"]

    def params(self, corpus_id: str) -> dict:
        self._require_corpus(corpus_id)
        return dict(self._corpora[corpus_id]["params"])

    def slices(self, corpus_id: str) -> list[TimeSlice]:
        self._require_corpus(corpus_id)
        return [self._slices[corpus_id][sid] for sid in sorted(self._slices[corpus_id])]

    def slice_words(self, corpus_id: str, slice_id: int) -> tuple[list[str], list[int]]:
        return self._words[(corpus_id, slice_id)]

    def word_id(self, corpus_id: str, slice_id: int, word: str) -> int | None:
        key = (corpus_id, slice_id)
        if key not in self._words:
            return None
        index = self._word_index.get(key)
        if index is None:
            words, _ = self._words[key]
            index = {w: i for i, w in enumerate(words)}
            self._word_index[key] = index
        return index.get(word)

    def vectors(self, corpus_id: str, slice_id: int) -> np.ndarray:
        return self._vectors[(corpus_id, slice_id)]

    def normalize_query(self, corpus_id: str, raw: str) -> str:
        """Apply the corpus's token normalization to a query word."""
        self._require_corpus(corpus_id)
        return normalize_token(raw, self.language(corpus_id), self._lemmas.get(corpus_id))

    def _slices_with_word(self, corpus_id: str, word: str) -> list[tuple[TimeSlice, int]]:
        found = []
        for slc in self.slices(corpus_id):
            wid = self.word_id(corpus_id, slc.slice_id, word)
            if wid is not None:
                found.append((slc, wid))
        return found

    def _require_word(self, corpus_id: str, word: str) -> list[tuple[TimeSlice, int]]:
        found = self._slices_with_word(corpus_id, word)
        if not found:
            raise UnknownWord(word, f"not found in any slice of corpus {corpus_id!r}")
        return found

    # ---------------------------------------------------------------- queries

    def similarity_on_the_fly(
        self, corpus_id: str, word1: str, word2: str
    ) -> list[tuple[TimeSlice, float]]:
        """Cosine of stored vectors in every slice holding both words.

        Disjoint slice coverage yields an empty series; a word missing from the
        whole corpus raises UnknownWord naming that word.
        """
        hits1 = dict((slc.slice_id, wid) for slc, wid in self._require_word(corpus_id, word1))
        hits2 = dict((slc.slice_id, wid) for slc, wid in self._require_word(corpus_id, word2))
        series = []
        for slc in self.slices(corpus_id):
            if slc.slice_id in hits1 and slc.slice_id in hits2:
                mat = self._vectors[(corpus_id, slc.slice_id)]
                value = cosine(
                    mat[hits1[slc.slice_id]].astype(np.float64),
                    mat[hits2[slc.slice_id]].astype(np.float64),
                )
                series.append((slc, value))
        return series

    def frequency_series(self, corpus_id: str, word: str) -> list[tuple[TimeSlice, float]]:
        series = []
        for slc, wid in self._require_word(corpus_id, word):
            if slc.token_count == 0:
                raise EmptySlice(f"slice {slc.slice_id} has zero tokens")
            _, counts = self._words[(corpus_id, slc.slice_id)]
            series.append((slc, counts[wid] / slc.token_count))
        return series

    def emotion_series(self, corpus_id: str, word: str) -> list[tuple[TimeSlice, VadScore]]:
        """Stored per-slice VAD values; slices without an induced value are omitted."""
        series = []
        for slc, wid in self._require_word(corpus_id, word):
            vad = self._emotions.get((corpus_id, slc.slice_id), {}).get(wid)
            if vad is not None:
                series.append((slc, VadScore(*vad)))
        return series

    def context_series(
        self, corpus_id: str, word: str, k: int | None = None
    ) -> list[tuple[TimeSlice, list[tuple[str, float]]]]:
        """Cached top context words per slice, already ranked by PPMI."""
        series = []
        for slc, wid in self._require_word(corpus_id, word):
            rows = self._contexts.get((corpus_id, slc.slice_id), {}).get(wid, [])
            words, _ = self._words[(corpus_id, slc.slice_id)]
            named = [(words[cid], score) for cid, score in rows]
            series.append((slc, named[:k] if k is not None else named))
        return series

    def top_similar_rows(
        self, corpus_id: str, slice_id: int, word: str
    ) -> list[tuple[str, float]]:
        wid = self.word_id(corpus_id, slice_id, word)
        if wid is None:
            raise UnknownWord(word, f"not in slice {slice_id} of corpus {corpus_id!r}")
        words, _ = self._words[(corpus_id, slice_id)]
        rows = self._top_similar.get((corpus_id, slice_id), {}).get(wid, [])
        return [(words[nid], score) for nid, score in rows]

    def get_reference_words(self, corpus_id: str, word: str, k: int) -> list[tuple[str, float]]:
        """Union of cached neighbors across slices, ranked by their best cosine."""
        if k < 1:
            raise ValueError("k must be >= 1")
        best: dict[str, float] = {}
        for slc, wid in self._require_word(corpus_id, word):
            words, _ = self._words[(corpus_id, slc.slice_id)]
            rows = self._top_similar.get((corpus_id, slc.slice_id), {}).get(wid, [])
            for nid, score in rows:
                name = words[nid]
                if name not in best or score > best[name]:
                    best[name] = score
        ranked = sorted(best.items(), key=lambda ws: (-ws[1], ws[0]))
        return ranked[:k]

    # ------------------------------------------------------------ persistence

    def _commit_locked(self) -> None:
        if self.path is not None:
            self._write_file_locked(self.path)

    def save(self, path: str | Path | None = None) -> Path:
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("no path bound to this store and none given")
        with self._lock:
            self._write_file_locked(target)
        return target

    def _write_file_locked(self, target: Path) -> None:
        payload = self._serialize()
        tmp = target.with_name(target.name + ".tmp")
        with open(tmp, "wb") as f:
            f.write(payload)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, target)

    def _table_rows(self) -> dict[str, list]:
        rows: dict[str, list] = {name: [] for name in JSON_TABLES}
        for cid in sorted(self._corpora):
            entry = self._corpora[cid]
            rows["corpora"].append([cid, entry["language"], entry["params"]])
        for cid in sorted(self._slices):
            for sid in sorted(self._slices[cid]):
                slc = self._slices[cid][sid]
                rows["slices"].append(
                    [cid, sid, slc.label_year, slc.start_year, slc.end_year, slc.token_count]
                )
        for cid, sid in sorted(self._words):
            words, counts = self._words[(cid, sid)]
            for wid, (word, count) in enumerate(zip(words, counts)):
                rows["words"].append([cid, sid, wid, word, count])
        for cid, sid in sorted(self._emotions):
            table = self._emotions[(cid, sid)]
            for wid in sorted(table):
                v, a, d = table[wid]
                rows["emotions"].append([cid, sid, wid, v, a, d])
        for name, source in (("top_similar", self._top_similar), ("contexts", self._contexts)):
            for cid, sid in sorted(source):
                table = source[(cid, sid)]
                for wid in sorted(table):
                    for rank, (other, score) in enumerate(table[wid], start=1):
                        rows[name].append([cid, sid, wid, rank, other, score])
        for cid in sorted(self._lemmas):
            for surface in sorted(self._lemmas[cid]):
                rows["lemmas"].append([cid, surface, self._lemmas[cid][surface]])
        return rows

    def _serialize(self) -> bytes:
        blocks: list[tuple[dict, bytes]] = []
        for name, rows in self._table_rows().items():
            data = json.dumps(rows, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")
            blocks.append(({"name": name, "kind": "json", "meta": {}}, data))
        for cid, sid in sorted(self._vectors):
            mat = self._vectors[(cid, sid)]
            data = mat.astype("<f4", copy=False).tobytes(order="C")
            meta = {"corpus_id": cid, "slice_id": sid, "rows": int(mat.shape[0]), "dim": int(mat.shape[1])}
            blocks.append(({"name": f"vectors:{cid}:{sid}", "kind": "f32", "meta": meta}, data))

        body = bytearray()
        directory = []
        offset = _HEADER.size
        for head, data in blocks:
            directory.append({**head, "offset": offset, "length": len(data)})
            body.extend(data)
            offset += len(data)
        dir_bytes = json.dumps(directory, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")
        header = _HEADER.pack(MAGIC, FORMAT_VERSION, offset, len(dir_bytes))
        return header + bytes(body) + dir_bytes

    @classmethod
    def load(cls, path: str | Path) -> "ModelStore":
        path = Path(path)
        blob = path.read_bytes()
        if len(blob) < _HEADER.size:
            raise ValueError(f"{path}: too short to be a model store")
        magic, version, dir_offset, dir_length = _HEADER.unpack_from(blob, 0)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic, not a model store file")
        if version != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported store version {version}")
        directory = json.loads(blob[dir_offset : dir_offset + dir_length].decode("utf-8"))

        store = cls()
        tables: dict[str, list] = {name: [] for name in JSON_TABLES}
        for entry in directory:
            data = blob[entry["offset"] : entry["offset"] + entry["length"]]
            if entry["kind"] == "json":
                tables[entry["name"]] = json.loads(data.decode("utf-8"))
            elif entry["kind"] == "f32":
                meta = entry["meta"]
                mat = np.frombuffer(data, dtype="<f4").reshape(meta["rows"], meta["dim"]).copy()
                store._vectors[(meta["corpus_id"], meta["slice_id"])] = mat
            else:
                raise ValueError(f"{path}: unknown block kind {entry['kind']!r}")

        for cid, language, params in tables["corpora"]:
            store._corpora[cid] = {"language": language, "params": params}
            store._slices.setdefault(cid, {})
        for cid, sid, label, start, end, tokens in tables["slices"]:
            store._slices[cid][sid] = TimeSlice(
                slice_id=sid, label_year=label, start_year=start, end_year=end, token_count=tokens
            )
        for cid, sid, wid, word, count in tables["words"]:
            words, counts = store._words.setdefault((cid, sid), ([], []))
            if wid != len(words):
                raise ValueError(f"{path}: words table ids not dense for {(cid, sid)}")
            words.append(word)
            counts.append(count)
        for cid, sid, wid, v, a, d in tables["emotions"]:
            store._emotions.setdefault((cid, sid), {})[wid] = (v, a, d)
        for name, target in (("top_similar", store._top_similar), ("contexts", store._contexts)):
            for cid, sid, wid, rank, other, score in tables[name]:
                rows = target.setdefault((cid, sid), {}).setdefault(wid, [])
                if rank != len(rows) + 1:
                    raise ValueError(f"{path}: {name} ranks not contiguous for {(cid, sid, wid)}")
                rows.append((other, score))
        for cid, surface, lemma in tables["lemmas"]:
            store._lemmas.setdefault(cid, {})[surface] = lemma
        return store

    # -------------------------------------------------------------- csv dumps

    def export_csv(self, directory: str | Path) -> list[Path]:
        """Write every logical table as a CSV file for inspection."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        rows = self._table_rows()
        headers = {
            "corpora": ["corpus_id", "language", "params"],
            "slices": ["corpus_id", "slice_id", "label_year", "start_year", "end_year", "token_count"],
            "words": ["corpus_id", "slice_id", "word_id", "word", "count"],
            "emotions": ["corpus_id", "slice_id", "word_id", "valence", "arousal", "dominance"],
            "top_similar": ["corpus_id", "slice_id", "word_id", "rank", "neighbor_id", "cosine"],
            "contexts": ["corpus_id", "slice_id", "word_id", "rank", "context_id", "ppmi"],
            "lemmas": ["corpus_id", "surface", "lemma"],
        }
        for name in JSON_TABLES:
            path = directory / f"{name}.csv"
            with open(path, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f)
                writer.writerow(headers[name])
                for row in rows[name]:
                    if name == "corpora":
                        row = [row[0], row[1], json.dumps(row[2], sort_keys=True)]
                    writer.writerow(row)
            written.append(path)
        path = directory / "vectors.csv"
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["corpus_id", "slice_id", "word_id", "values"])
            for cid, sid in sorted(self._vectors):
                for wid, vec in enumerate(self._vectors[(cid, sid)]):
                    writer.writerow([cid, sid, wid, " ".join(np.format_float_positional(x) for x in vec)])
        written.append(path)
        return written

    @classmethod
    def import_csv(cls, directory: str | Path) -> "ModelStore":
        """Rebuild a store from an export_csv dump."""
        directory = Path(directory)
        store = cls()

        def read(name: str) -> Iterable[list[str]]:
            with open(directory / f"{name}.csv", encoding="utf-8", newline="") as f:
                reader = csv.reader(f)
                next(reader)
                yield from reader

        for cid, language, params in read("corpora"):
            store._corpora[cid] = {"language": language, "params": json.loads(params)}
            store._slices.setdefault(cid, {})
        for cid, sid, label, start, end, tokens in read("slices"):
            store._slices[cid][int(sid)] = TimeSlice(
                slice_id=int(sid), label_year=int(label), start_year=int(start),
                end_year=int(end), token_count=int(tokens),
            )
        for cid, sid, wid, word, count in read("words"):
            words, counts = store._words.setdefault((cid, int(sid)), ([], []))
            words.append(word)
            counts.append(int(count))
        for cid, sid, wid, v, a, d in read("emotions"):
            store._emotions.setdefault((cid, int(sid)), {})[int(wid)] = (float(v), float(a), float(d))
        for name, target in (("top_similar", store._top_similar), ("contexts", store._contexts)):
            for cid, sid, wid, rank, other, score in read(name):
                target.setdefault((cid, int(sid)), {}).setdefault(int(wid), []).append(
                    (int(other), float(score))
                )
        for cid, surface, lemma in read("lemmas"):
            store._lemmas.setdefault(cid, {})[surface] = lemma
        grouped: dict[tuple[str, int], list[np.ndarray]] = {}
        for cid, sid, wid, values in read("vectors"):
            vec = np.array([np.float32(x) for x in values.split()], dtype=np.float32)
            grouped.setdefault((cid, int(sid)), []).append(vec)
        for key, vecs in grouped.items():
            store._vectors[key] = np.vstack(vecs)
        return store
