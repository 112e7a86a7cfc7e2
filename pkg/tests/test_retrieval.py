import math

import pytest

from siltsearch import (
    AnalyzerConfig,
    BM25Params,
    Query,
    analyze_terms,
    build_index,
    idf,
    score_document,
    search,
    term_score,
)
from siltsearch.errors import AnalyzerMismatchError, UndefinedStatisticsError

from oracles import bm25_brute_force, rank_brute_force

DEFAULTS = BM25Params()


class TestIdf:
    def test_half_of_two(self):
        assert idf(2, 1) == pytest.approx(math.log(2), abs=1e-12)
        assert idf(2, 1) == pytest.approx(0.693147, abs=1e-6)

    def test_single_doc(self):
        assert idf(1, 1) == pytest.approx(math.log(4 / 3), abs=1e-12)
        assert idf(1, 1) == pytest.approx(0.287682, abs=1e-6)

    def test_absent_term_is_max(self):
        assert idf(5, 0) == pytest.approx(math.log(1 + 5.5 / 0.5))
        assert all(idf(5, 0) > idf(5, df) for df in range(1, 6))

    def test_empty_collection(self):
        with pytest.raises(UndefinedStatisticsError):
            idf(0, 0)

    def test_df_out_of_range(self):
        with pytest.raises(ValueError):
            idf(3, 4)


class TestTermScore:
    def test_zero_tf(self):
        assert term_score(0, 7, 5.0, DEFAULTS, 2.0) == 0.0

    def test_tf1_at_average_length_is_idf(self):
        assert term_score(1, 4, 4.0, DEFAULTS, 0.9) == pytest.approx(0.9, abs=1e-15)

    def test_b_zero_ignores_length(self):
        p = BM25Params(1.2, 0.0)
        assert term_score(3, 1, 10.0, p, 1.0) == term_score(3, 50, 10.0, p, 1.0)

    def test_hand_value(self):
        # idf * tf(k1+1) / (tf + k1(1-b+b*dl/avgdl)), tf=2 dl=6 avgdl=4
        expected = 0.5 * 2 * 2.2 / (2 + 1.2 * (0.25 + 0.75 * 1.5))
        assert term_score(2, 6, 4.0, DEFAULTS, 0.5) == pytest.approx(expected, rel=1e-15)

    def test_vectorized_matches_scalar(self):
        import numpy as np

        tfs, dls = [0, 1, 2, 5], [3, 3, 8, 1]
        vec = term_score(np.array(tfs), np.array(dls), 4.0, DEFAULTS, 1.3)
        for v, tf, dl in zip(vec, tfs, dls):
            assert v == pytest.approx(term_score(tf, dl, 4.0, DEFAULTS, 1.3), rel=1e-15)

    def test_params_validated(self):
        with pytest.raises(ValueError):
            BM25Params(k1=-0.1)
        with pytest.raises(ValueError):
            BM25Params(b=1.5)


def _doc_terms(index_docs, config):
    return {d.doc_id: analyze_terms(d.text(), config) for d in index_docs}


class TestScoreDocument:
    def test_no_match_is_zero(self, small_index, plain_config):
        q = Query.parse("ዩንጂ", plain_config)
        assert score_document(q, 0, small_index) == 0.0

    def test_single_term(self, small_index, plain_config):
        q = Query.parse("ቡድ", plain_config)
        s = small_index.stats()
        expected = term_score(1, 3, s.avgdl, DEFAULTS, idf(3, 2))
        assert score_document(q, 0, small_index) == expected

    def test_two_terms_against_brute_force(self, small_index, small_corpus, plain_config):
        q = Query.parse("ፋግ ኦሪሽ", plain_config)
        oracle = bm25_brute_force(_doc_terms(small_corpus, plain_config), q.terms)
        for ordinal, doc_id in enumerate(small_index.doc_ids()):
            assert score_document(q, ordinal, small_index) == pytest.approx(
                oracle.get(doc_id, 0.0), rel=1e-12
            )

    def test_query_multiplicity(self, small_index, plain_config):
        once = score_document(Query.parse("ፋግ", plain_config), 0, small_index)
        twice = score_document(Query.parse("ፋግ ፋግ", plain_config), 0, small_index)
        assert twice == pytest.approx(2 * once, rel=1e-15)

    def test_fingerprint_mismatch(self, small_index):
        q = Query.parse("ፋግ", AnalyzerConfig())
        with pytest.raises(AnalyzerMismatchError):
            score_document(q, 0, small_index)
        with pytest.raises(AnalyzerMismatchError):
            search(small_index, q, 5)


class TestSearch:
    def test_empty_query(self, small_index, plain_config):
        hits = search(small_index, Query.parse("፣ ። «»", plain_config), 5)
        assert hits == [] and hits.empty_query

    def test_no_match_is_not_empty_query(self, small_index, plain_config):
        hits = search(small_index, Query.parse("ሰላም", plain_config), 5)
        assert hits == [] and not hits.empty_query

    def test_k_larger_than_matches(self, small_index, small_corpus, plain_config):
        q = Query.parse("ፋግ ቡድ", plain_config)
        hits = search(small_index, q, 100)
        oracle = rank_brute_force(bm25_brute_force(_doc_terms(small_corpus, plain_config), q.terms), 100)
        assert [h.doc_id for h in hits] == [d for d, _ in oracle]
        assert len(hits) == 3

    def test_truncation(self, small_index, plain_config):
        hits = search(small_index, Query.parse("ፋግ ቡድ", plain_config), 1)
        assert len(hits) == 1

    def test_tie_break_by_doc_id(self, tmp_path, plain_config):
        from siltsearch import Document

        docs = [Document("z", "ፋግ x"), Document("a", "ፋግ y"), Document("m", "ፋግ w")]
        r = build_index(docs, tmp_path, plain_config)
        hits = search(r, Query.parse("ፋግ", plain_config), 10)
        assert [h.doc_id for h in hits] == ["a", "m", "z"]
        assert hits[0].score == hits[1].score == hits[2].score

    def test_bad_k(self, small_index, plain_config):
        with pytest.raises(ValueError):
            search(small_index, Query.parse("ፋግ", plain_config), 0)

    def test_all_empty_documents(self, tmp_path, plain_config):
        from siltsearch import Document

        r = build_index([Document("a", "።"), Document("b", "")], tmp_path, plain_config)
        assert search(r, Query.parse("ፋግ", plain_config), 5) == []

    def test_empty_index(self, tmp_path, plain_config):
        r = build_index([], tmp_path, plain_config)
        assert search(r, Query.parse("ፋግ", plain_config), 5) == []
