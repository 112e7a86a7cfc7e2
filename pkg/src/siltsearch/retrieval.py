"""BM25 scoring and top-k search over an :class:`~siltsearch.index.IndexReader`.

Scores use the non-negative IDF variant::

    idf(t)   = ln(1 + (N - df + 0.5) / (df + 0.5))
    score(d) = sum over query terms t of
               idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))

A term repeated in the query contributes once per occurrence. The tf
saturation factor is formed before scaling by idf so that mathematically
tied documents (k1 = 0, or equal tf and dl) also tie in floating point.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .analysis import AnalyzerConfig, RawText, analyze_terms
from .errors import AnalyzerMismatchError, UndefinedStatisticsError


@dataclass(frozen=True)
class BM25Params:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if not (self.k1 >= 0) or math.isinf(self.k1):
            raise ValueError(f"k1 must be a finite value >= 0, got {self.k1}")
        if not (0.0 <= self.b <= 1.0):
            raise ValueError(f"b must lie in [0, 1], got {self.b}")


@dataclass(frozen=True)
class Query:
    """An analyzed query. Build with :meth:`parse` so the terms and the
    fingerprint come from the same analyzer."""

    raw: RawText
    terms: tuple[str, ...]
    fingerprint: str

    @classmethod
    def parse(cls, raw: RawText, config: AnalyzerConfig) -> Query:
        return cls(raw, tuple(analyze_terms(raw, config, at_query_time=True)), config.fingerprint)

    @property
    def is_empty(self) -> bool:
        return not self.terms


class ScoredDoc(NamedTuple):
    doc_id: str
    score: float


class SearchResults(list):
    """List of :class:`ScoredDoc`; ``empty_query`` is set when analysis left
    no terms to search for."""

    def __init__(self, hits=(), empty_query: bool = False):
        super().__init__(hits)
        self.empty_query = empty_query


def idf(N: int, df: int) -> float:
    if N < 1:
        raise UndefinedStatisticsError("idf is undefined for an empty collection")
    if not 0 <= df <= N:
        raise ValueError(f"df={df} outside [0, N={N}]")
    return math.log1p((N - df + 0.5) / (df + 0.5))


def term_score(tf, dl, avgdl: float, params: BM25Params, idf_value: float):
    """Per-term BM25 contribution. Accepts scalars or numpy arrays for tf/dl."""
    if np.ndim(tf) == 0 and np.ndim(dl) == 0:
        if tf == 0:
            return 0.0
        norm = params.k1 * (1.0 - params.b + params.b * dl / avgdl)
        return idf_value * (tf * (params.k1 + 1.0) / (tf + norm))
    tf = np.asarray(tf, dtype=np.float64)
    dl = np.asarray(dl, dtype=np.float64)
    if avgdl > 0:
        norm = params.k1 * (1.0 - params.b + params.b * dl / avgdl)
    else:
        # only reachable with dl == 0, where tf is 0 as well
        norm = np.full(np.broadcast(tf, dl).shape, params.k1 * (1.0 - params.b))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = idf_value * (tf * (params.k1 + 1.0) / (tf + norm))
    return np.where(tf > 0, out, 0.0)


def _check_fingerprint(query: Query, reader) -> None:
    if query.fingerprint != reader.analyzer_fingerprint:
        raise AnalyzerMismatchError(reader.analyzer_fingerprint, query.fingerprint)


def score_document(query: Query, doc_ordinal: int, reader, params: BM25Params = BM25Params()) -> float:
    _check_fingerprint(query, reader)
    stats = reader.stats()
    dl = int(stats.doc_lengths[doc_ordinal])
    total = 0.0
    for term in query.terms:
        plist = reader.postings(term)
        i = int(np.searchsorted(plist.ordinals, doc_ordinal))
        if i < len(plist) and plist.ordinals[i] == doc_ordinal:
            total += term_score(int(plist.tfs[i]), dl, stats.avgdl, params,
                                idf(stats.doc_count, len(plist)))
    return total


def score_all(query: Query, reader, params: BM25Params = BM25Params()) -> np.ndarray:
    """Term-at-a-time accumulation of BM25 scores for every document."""
    _check_fingerprint(query, reader)
    stats = reader.stats()
    scores = np.zeros(stats.doc_count, dtype=np.float64)
    if stats.doc_count == 0:
        return scores
    contribs = {}
    for term in query.terms:
        # added once per occurrence, in query order, so sums are reproducible
        if term not in contribs:
            plist = reader.postings(term)
            contribs[term] = (plist.ordinals, term_score(
                plist.tfs, stats.doc_lengths[plist.ordinals], stats.avgdl, params,
                idf(stats.doc_count, len(plist)) if len(plist) else 0.0))
        ordinals, contrib = contribs[term]
        scores[ordinals] += contrib
    return scores


def search(reader, query: Query, k: int = 10, params: BM25Params = BM25Params()) -> SearchResults:
    """Return the ``k`` best documents with a positive score, ordered by
    score descending then doc_id ascending."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_fingerprint(query, reader)
    if query.is_empty:
        return SearchResults(empty_query=True)
    scores = score_all(query, reader, params)
    matched = np.flatnonzero(scores > 0)
    best = heapq.nsmallest(
        k,
        ((-scores[i], reader.doc_id(i)) for i in matched.tolist()),
    )
    return SearchResults(ScoredDoc(doc_id, float(-neg)) for neg, doc_id in best)


def search_text(reader, text: RawText, config: AnalyzerConfig, k: int = 10,
                params: BM25Params = BM25Params()) -> SearchResults:
    return search(reader, Query.parse(text, config), k, params)

