import json

import numpy as np
import pytest

from siltsearch import AnalyzerConfig, Document, build_index, open_reader, open_writer
from siltsearch.errors import (
    CommitError,
    ConcurrentWriterError,
    DuplicateDocumentError,
    IndexExistsError,
    NoValidIndexError,
    UnsupportedVersionError,
    WriterClosedError,
)
from siltsearch.index import IndexWriter


def test_fresh_writer_is_empty(tmp_path, plain_config):
    w = open_writer(tmp_path / "idx", plain_config)
    assert w.stats().doc_count == 0
    w.abort()


def test_second_writer_is_refused(tmp_path, plain_config):
    w = open_writer(tmp_path, plain_config)
    with pytest.raises(ConcurrentWriterError):
        open_writer(tmp_path, plain_config)
    w.abort()
    open_writer(tmp_path, plain_config).abort()


def test_no_writer_over_committed_index(tmp_path, plain_config):
    open_writer(tmp_path, plain_config).commit()
    with pytest.raises(IndexExistsError):
        open_writer(tmp_path, plain_config)


def test_add_document_counts(tmp_path, plain_config):
    w = open_writer(tmp_path, plain_config)
    assert w.add("x", "ፋግ ፋግ ቡድ") == 0
    assert list(w.postings("ፋግ")) == [(0, 2)]
    assert list(w.postings("ቡድ")) == [(0, 1)]
    assert w.stats().doc_lengths.tolist() == [3]
    w.abort()


def test_empty_document_gets_ordinal(tmp_path, plain_config):
    w = open_writer(tmp_path, plain_config)
    assert w.add("e", "፣ ። «»") == 0
    assert w.add("f", "ፋግ") == 1
    assert w.stats().doc_lengths.tolist() == [0, 1]
    assert w.vocabulary() == ["ፋግ"]
    w.abort()


def test_shared_term(small_index):
    plist = small_index.postings("ፋግ")
    assert plist.ordinals.tolist() == [0, 1] and plist.df == 2


def test_duplicate_doc_id(tmp_path, plain_config):
    w = open_writer(tmp_path, plain_config)
    w.add("x", "ፋግ")
    with pytest.raises(DuplicateDocumentError):
        w.add("x", "ቡድ")
    w.abort()


def test_title_indexed_with_body(tmp_path, plain_config):
    w = open_writer(tmp_path, plain_config)
    w.add_document(Document("x", "ቡድ", title="ፋግ"))
    assert w.vocabulary() == sorted(["ፋግ", "ቡድ"], key=lambda t: t.encode())
    assert w.stats().doc_lengths.tolist() == [2]
    w.abort()


def test_synonyms_count_in_dl(tmp_path):
    cfg = AnalyzerConfig(synonyms=[["ፋግ", "ቡድ"]])
    w = open_writer(tmp_path, cfg)
    w.add("x", "ፋግ ኦሪሽ")
    assert w.stats().doc_lengths.tolist() == [3]
    assert list(w.postings("ቡድ")) == [(0, 1)]
    w.abort()


def test_commit_empty(tmp_path, plain_config):
    open_writer(tmp_path, plain_config).commit()
    r = open_reader(tmp_path)
    assert r.stats().doc_count == 0 and r.stats().avgdl == 0.0
    assert r.vocabulary() == []


def test_roundtrip(tmp_path, small_corpus, plain_config):
    w = open_writer(tmp_path, plain_config)
    for d in small_corpus:
        w.add_document(d)
    w.commit()
    r = open_reader(tmp_path)
    assert r.stats().doc_count == 3
    assert r.stats() == w.stats()
    assert r.vocabulary() == w.vocabulary()
    for term in w.vocabulary():
        assert r.postings(term) == w.postings(term)
    assert r.doc_ids() == ["a", "b", "c"]
    assert r.analyzer_fingerprint == plain_config.fingerprint


def test_writer_closed_after_commit(tmp_path, plain_config):
    w = open_writer(tmp_path, plain_config)
    w.commit()
    with pytest.raises(WriterClosedError):
        w.add("x", "ፋግ")
    assert not (tmp_path / "lock").exists()


def test_context_manager_commits(tmp_path, plain_config):
    with open_writer(tmp_path, plain_config) as w:
        w.add("x", "ፋግ")
    assert open_reader(tmp_path).doc_count == 1


def test_crash_before_manifest(tmp_path, plain_config, monkeypatch):
    def boom(self, manifest):
        raise OSError("disk full")

    monkeypatch.setattr(IndexWriter, "_write_manifest", boom)
    w = open_writer(tmp_path, plain_config)
    w.add("x", "ፋግ")
    with pytest.raises(CommitError):
        w.commit()
    assert (tmp_path / "postings").exists()
    with pytest.raises(NoValidIndexError):
        open_reader(tmp_path)


def test_empty_directory(tmp_path):
    with pytest.raises(NoValidIndexError):
        open_reader(tmp_path)


def test_tampered_version(tmp_path, small_corpus, plain_config):
    build_index(small_corpus, tmp_path, plain_config)
    m = json.loads((tmp_path / "manifest").read_text())
    m["format_version"] = 99
    (tmp_path / "manifest").write_text(json.dumps(m))
    with pytest.raises(UnsupportedVersionError):
        open_reader(tmp_path)


def test_corrupt_manifest(tmp_path, small_corpus, plain_config):
    build_index(small_corpus, tmp_path, plain_config)
    (tmp_path / "manifest").write_text("{not json")
    with pytest.raises(NoValidIndexError):
        open_reader(tmp_path)


def test_truncated_postings(tmp_path, small_corpus, plain_config):
    build_index(small_corpus, tmp_path, plain_config)
    data = (tmp_path / "postings").read_bytes()
    (tmp_path / "postings").write_bytes(data[:-1])
    with pytest.raises(NoValidIndexError):
        open_reader(tmp_path)


def test_unknown_term(small_index):
    assert len(small_index.postings("nope")) == 0
    assert small_index.document_frequency("nope") == 0


def test_df_two_of_three(small_index):
    assert small_index.postings("ኦሪሽ").df == 2


def test_stats_arithmetic(tmp_path, plain_config):
    docs = [Document("a", "x y"), Document("b", "x y z"), Document("c", "p q r s t")]
    r = build_index(docs, tmp_path, plain_config)
    s = r.stats()
    assert (s.doc_count, s.total_token_count) == (3, 10)
    assert s.avgdl == 10 / 3
    assert s.doc_lengths.tolist() == [2, 3, 5]


def test_on_disk_layout(tmp_path, small_corpus, plain_config):
    build_index(small_corpus, tmp_path, plain_config)
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["doclens", "manifest", "postings", "terms"]
    dl = np.frombuffer((tmp_path / "doclens").read_bytes(), dtype="<u4")
    assert dl.tolist() == [3, 3, 5]
    m = json.loads((tmp_path / "manifest").read_text(encoding="utf-8"))
    assert m["doc_count"] == 3 and m["total_token_count"] == 11 and m["doc_ids"] == ["a", "b", "c"]
    r = open_reader(tmp_path)
    assert r.vocabulary() == sorted(r.vocabulary(), key=lambda t: t.encode("utf-8"))


def test_postings_delta_encoding(tmp_path, plain_config):
    docs = [Document(f"d{i}", "ፋግ" if i in (2, 5, 300) else "x") for i in range(301)]
    r = build_index(docs, tmp_path, plain_config)
    # deltas 2, 3, 295 -> 295 needs two bytes; each tf needs one
    assert r._terms["ፋግ"][2] - r._terms["ፋግ"][1] == 7
    assert r.postings("ፋግ").ordinals.tolist() == [2, 5, 300]
