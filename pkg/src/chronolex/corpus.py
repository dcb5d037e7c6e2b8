"""Corpus ingestion: manifests, token normalization, temporal slicing, vocabularies.

A corpus is described by a JSON manifest (one corpus id, a language, a list of
plain-text documents tagged with years, and a slicing configuration). Documents
are normalized per language, partitioned into year slices of roughly similar
token mass, and each slice gets its own count-filtered vocabulary.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from chronolex.errors import EmptyCorpus, EmptyVocabulary, InfeasibleSlicing

LANGUAGES = ("english", "german")
SLICING_MODES = ("fixed_span", "balanced")

MIN_DOCUMENT_YEAR = 1000
MAX_DOCUMENT_YEAR = 2100

# Punctuation is replaced by whitespace before splitting; word characters
# (including umlauts etc.) and whitespace survive.
DEFAULT_STRIP_PATTERN = r"[^\w\s]+"


@dataclass
class SlicingConfig:
    mode: str
    span_years: int | None = None
    target_slices: int | None = None
    min_span_years: int = 10
    max_span_years: int = 50

    def validate(self) -> None:
        if self.mode not in SLICING_MODES:
            raise ValueError(f"slicing.mode must be one of {SLICING_MODES}, got {self.mode!r}")
        if not (1 <= self.min_span_years <= self.max_span_years):
            raise ValueError("slicing span bounds must satisfy 1 <= min <= max")
        if self.mode == "fixed_span":
            if self.span_years is None:
                raise ValueError("fixed_span slicing requires slicing.span_years")
            if not (self.min_span_years <= self.span_years <= self.max_span_years):
                raise ValueError(
                    f"slicing.span_years must lie in [{self.min_span_years}, "
                    f"{self.max_span_years}], got {self.span_years}"
                )
        else:
            if self.target_slices is None or self.target_slices < 1:
                raise ValueError("balanced slicing requires slicing.target_slices >= 1")


@dataclass
class DocumentRef:
    year: int
    path: Path


@dataclass
class CorpusManifest:
    corpus_id: str
    language: str
    documents: list[DocumentRef]
    slicing: SlicingConfig
    lemma_table_path: Path | None = None

    def validate(self) -> None:
        if not self.corpus_id:
            raise ValueError("corpus_id must be non-empty")
        if self.language not in LANGUAGES:
            raise ValueError(f"language must be one of {LANGUAGES}, got {self.language!r}")
        for doc in self.documents:
            if not (MIN_DOCUMENT_YEAR <= doc.year <= MAX_DOCUMENT_YEAR):
                raise ValueError(
                    f"document year {doc.year} outside [{MIN_DOCUMENT_YEAR}, {MAX_DOCUMENT_YEAR}]"
                )
        if self.language == "english" and self.lemma_table_path is not None:
            raise ValueError("english manifests must not carry a lemma table")
        self.slicing.validate()


def load_manifest(path: str | Path) -> CorpusManifest:
    """Read and validate a corpus manifest; document paths resolve relative to it."""
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    base = path.parent
    slicing_raw = raw.get("slicing", {})
    slicing = SlicingConfig(
        mode=slicing_raw.get("mode", ""),
        span_years=slicing_raw.get("span_years"),
        target_slices=slicing_raw.get("target_slices"),
        min_span_years=slicing_raw.get("min_span_years", 10),
        max_span_years=slicing_raw.get("max_span_years", 50),
    )
    documents = [
        DocumentRef(year=int(d["year"]), path=base / d["path"])
        for d in raw.get("documents", [])
    ]
    lemma_table = raw.get("lemma_table")
    manifest = CorpusManifest(
        corpus_id=raw.get("corpus_id", ""),
        language=raw.get("language", ""),
        documents=documents,
        slicing=slicing,
        lemma_table_path=(base / lemma_table) if lemma_table else None,
    )
    manifest.validate()
    return manifest


def load_lemma_table(path: str | Path) -> dict[str, str]:
    """Load a two-column TSV of surface -> lemma mappings.

    Keys and values are lowercased and mapping chains are resolved to their
    final lemma (cycles collapse onto their lexicographically smallest member),
    so a single lookup is always a fixpoint and normalization stays idempotent.
    """
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ValueError(f"{path}:{lineno}: expected 'surface<TAB>lemma', got {line!r}")
            table[parts[0].lower()] = parts[1].lower()
    return resolve_lemma_chains(table)


def resolve_lemma_chains(table: Mapping[str, str]) -> dict[str, str]:
    """Collapse surface->lemma chains so every mapped value maps to itself."""
    resolved: dict[str, str] = {}
    for key in table:
        if key in resolved:
            continue
        path: list[str] = []
        seen: set[str] = set()
        cur = key
        while cur in table and cur not in seen and cur not in resolved:
            seen.add(cur)
            path.append(cur)
            cur = table[cur]
        if cur in resolved:
            final = resolved[cur]
        elif cur in seen:
            cycle = path[path.index(cur):]
            final = min(cycle)
        else:
            final = cur
        for node in path:
            resolved[node] = final
    return {k: v for k, v in resolved.items() if k != v}


def normalize_token(raw: str, language: str, lemma_table: Mapping[str, str] | None = None) -> str:
    """Normalize one token: lowercase for English, lowercase + lemma lookup for German."""
    lowered = raw.lower()
    if language == "german" and lemma_table is not None:
        return lemma_table.get(lowered, lowered)
    return lowered


def tokenize(text: str, strip_pattern: str = DEFAULT_STRIP_PATTERN) -> list[str]:
    """Whitespace-tokenize after replacing punctuation with spaces."""
    return re.sub(strip_pattern, " ", text).split()


@dataclass
class LoadedDocument:
    year: int
    tokens: list[str]


def load_documents(
    manifest: CorpusManifest, strip_pattern: str = DEFAULT_STRIP_PATTERN
) -> list[LoadedDocument]:
    """Read, tokenize, and normalize every document in the manifest."""
    lemma_table = None
    if manifest.lemma_table_path is not None:
        lemma_table = load_lemma_table(manifest.lemma_table_path)
    docs = []
    for ref in manifest.documents:
        text = Path(ref.path).read_text(encoding="utf-8")
        tokens = [
            normalize_token(tok, manifest.language, lemma_table)
            for tok in tokenize(text, strip_pattern)
        ]
        docs.append(LoadedDocument(year=ref.year, tokens=tokens))
    return docs


@dataclass
class TimeSlice:
    slice_id: int
    label_year: int
    start_year: int
    end_year: int
    token_count: int

    def contains_year(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year


def build_slices(
    manifest: CorpusManifest, documents: Sequence[LoadedDocument] | None = None
) -> list[TimeSlice]:
    """Partition document years into ordered, contiguous time slices.

    fixed_span mode lays consecutive spans of ``span_years`` from the earliest
    document year; balanced mode sweeps years greedily, closing a slice once it
    holds at least (total tokens / target_slices) tokens, subject to the
    min/max span bounds. Span bounds dominate; mass balance is best-effort.
    Documents are loaded from the manifest when not supplied.
    """
    if documents is None:
        documents = load_documents(manifest)
    if not documents:
        raise EmptyCorpus("manifest lists no documents")
    year_mass: dict[int, int] = {}
    for doc in documents:
        year_mass[doc.year] = year_mass.get(doc.year, 0) + len(doc.tokens)
    years = sorted(year_mass)
    cfg = manifest.slicing
    if cfg.mode == "fixed_span":
        spans = _fixed_spans(years, cfg)
    else:
        spans = _balanced_spans(years, year_mass, cfg)
    slices = []
    for i, (start, end) in enumerate(spans):
        mass = sum(m for y, m in year_mass.items() if start <= y <= end)
        slices.append(
            TimeSlice(slice_id=i, label_year=start, start_year=start, end_year=end, token_count=mass)
        )
    return slices


def _fixed_spans(years: list[int], cfg: SlicingConfig) -> list[tuple[int, int]]:
    span = cfg.span_years
    assert span is not None
    spans = []
    start = years[0]
    last_year = years[-1]
    year_set = set(years)
    while start <= last_year:
        end = start + span - 1
        if not any(y in year_set for y in range(start, end + 1)):
            raise InfeasibleSlicing(
                f"fixed span {start}-{end} contains no documents; "
                "every produced slice needs at least one document"
            )
        spans.append((start, end))
        start = end + 1
    return spans


def _balanced_spans(
    years: list[int], year_mass: Mapping[int, int], cfg: SlicingConfig
) -> list[tuple[int, int]]:
    assert cfg.target_slices is not None
    total = sum(year_mass.values())
    threshold = total / cfg.target_slices
    min_span, max_span = cfg.min_span_years, cfg.max_span_years
    last_year = years[-1]

    spans: list[tuple[int, int]] = []
    start = years[0]
    acc = 0
    for i, year in enumerate(years):
        acc += year_mass[year]
        if i + 1 == len(years):
            break
        next_start = years[i + 1]
        span_if_closed = next_start - start
        # span the current slice reaches if it also swallows the next year group
        if i + 2 < len(years):
            span_if_kept = years[i + 2] - start
        else:
            span_if_kept = last_year - start + 1
        if span_if_closed > max_span:
            raise InfeasibleSlicing(
                f"gap before year {next_start} forces a slice of {span_if_closed} years "
                f"(max {max_span})"
            )
        if (acc >= threshold or span_if_kept > max_span) and span_if_closed >= min_span:
            spans.append((start, next_start - 1))
            start = next_start
            acc = 0
    spans.append((start, last_year))

    # Best-effort tail repair: fold an undersized final slice into its
    # predecessor when the merged span still respects the max bound.
    if len(spans) >= 2:
        tail_start, tail_end = spans[-1]
        tail_mass = sum(m for y, m in year_mass.items() if tail_start <= y <= tail_end)
        tail_span = tail_end - tail_start + 1
        prev_start = spans[-2][0]
        if (tail_mass < threshold / 2 or tail_span < min_span) and (
            tail_end - prev_start + 1 <= max_span
        ):
            spans[-2:] = [(prev_start, tail_end)]
    return spans


def docs_in_slice(slc: TimeSlice, documents: Sequence[LoadedDocument]) -> list[LoadedDocument]:
    return [d for d in documents if slc.contains_year(d.year)]


class Vocabulary:
    """Bijective word <-> dense-id interning with per-slice counts.

    Ids are assigned in descending count order, ties broken lexicographically,
    so identical input always yields an identical mapping.
    """

    def __init__(self, words: list[str], counts: list[int], min_count: int):
        self.words = words
        self.counts = counts
        self.min_count = min_count
        self.index = {w: i for i, w in enumerate(words)}

    @classmethod
    def from_tokens(cls, tokens: Iterable[str], min_count: int) -> "Vocabulary":
        if min_count < 1:
            raise ValueError("min_count must be >= 1")
        counter = Counter(tokens)
        kept = [(w, c) for w, c in counter.items() if c >= min_count]
        if not kept:
            raise EmptyVocabulary(f"no word reaches min_count={min_count}")
        kept.sort(key=lambda wc: (-wc[1], wc[0]))
        words = [w for w, _ in kept]
        counts = [c for _, c in kept]
        return cls(words, counts, min_count)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def id_of(self, word: str) -> int:
        return self.index[word]

    def word_of(self, word_id: int) -> str:
        return self.words[word_id]

    def count_of(self, word: str) -> int:
        return self.counts[self.index[word]]

    def items(self) -> Iterable[tuple[str, int]]:
        return zip(self.words, self.counts)


def build_vocabulary(tokens: Iterable[str], min_count: int) -> Vocabulary:
    """Count the token stream and keep words occurring at least min_count times."""
    return Vocabulary.from_tokens(tokens, min_count)
