"""Write-once inverted index with on-disk persistence.

Directory layout::

    manifest   JSON: format version, analyzer fingerprint, counts, doc ids,
               size and CRC32 of every data file. Written last; its presence
               defines a committed index.
    terms      per term, in UTF-8 byte order: varint(len) term-bytes
               varint(df) varint(byte offset into postings)
    postings   per term: df pairs of varint(ordinal delta) varint(tf)
    doclens    little-endian uint32 document lengths, by ordinal
    lock       present while a writer is live
"""

from __future__ import annotations

import json
import logging
import os
import zlib
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator, NamedTuple, Optional

import numpy as np

from . import varint
from .analysis import AnalyzerConfig, RawText, analyze
from .errors import (
    CommitError,
    ConcurrentWriterError,
    DuplicateDocumentError,
    IndexExistsError,
    IndexIOError,
    NoValidIndexError,
    UnsupportedVersionError,
    WriterClosedError,
)

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
MANIFEST = "manifest"
TERMS = "terms"
POSTINGS = "postings"
DOCLENS = "doclens"
LOCK = "lock"
DATA_FILES = (TERMS, POSTINGS, DOCLENS)


@dataclass(frozen=True)
class Document:
    doc_id: str
    body: RawText
    title: Optional[RawText] = None

    def __post_init__(self):
        if not isinstance(self.doc_id, str) or not self.doc_id:
            raise ValueError("doc_id must be a non-empty string")

    def text(self) -> RawText:
        if self.title is None:
            return self.body
        if isinstance(self.body, str) and isinstance(self.title, str):
            return self.title + "\n" + self.body
        title = self.title.encode("utf-8") if isinstance(self.title, str) else bytes(self.title)
        body = self.body.encode("utf-8") if isinstance(self.body, str) else bytes(self.body)
        return title + b"\n" + body


class Posting(NamedTuple):
    doc_ordinal: int
    term_frequency: int


class PostingList:
    """Postings for one term, sorted by ordinal; ``len()`` is the term's df."""

    __slots__ = ("term", "ordinals", "tfs")

    def __init__(self, term: str, ordinals, tfs):
        self.term = term
        self.ordinals = np.asarray(ordinals, dtype=np.int64)
        self.tfs = np.asarray(tfs, dtype=np.int64)
        self.ordinals.flags.writeable = False
        self.tfs.flags.writeable = False

    @property
    def df(self) -> int:
        return int(self.ordinals.size)

    def __len__(self) -> int:
        return int(self.ordinals.size)

    def __iter__(self) -> Iterator[Posting]:
        for o, tf in zip(self.ordinals.tolist(), self.tfs.tolist()):
            yield Posting(o, tf)

    def __eq__(self, other):
        if not isinstance(other, PostingList):
            return NotImplemented
        return (
            self.term == other.term
            and np.array_equal(self.ordinals, other.ordinals)
            and np.array_equal(self.tfs, other.tfs)
        )

    def __repr__(self):
        return f"PostingList({self.term!r}, {list(self)!r})"


class IndexStats:
    __slots__ = ("doc_count", "total_token_count", "doc_lengths")

    def __init__(self, doc_lengths):
        self.doc_lengths = np.asarray(doc_lengths, dtype=np.int64)
        self.doc_lengths.flags.writeable = False
        self.doc_count = int(self.doc_lengths.size)
        self.total_token_count = int(self.doc_lengths.sum())

    @property
    def avgdl(self) -> float:
        if self.doc_count == 0:
            return 0.0
        return self.total_token_count / self.doc_count

    def __eq__(self, other):
        if not isinstance(other, IndexStats):
            return NotImplemented
        return np.array_equal(self.doc_lengths, other.doc_lengths)

    def __repr__(self):
        return (
            f"IndexStats(N={self.doc_count}, total={self.total_token_count}, "
            f"avgdl={self.avgdl:.4f})"
        )


def _utf8_key(term: str) -> bytes:
    return term.encode("utf-8")


def _checksum(data: bytes) -> dict:
    return {"size": len(data), "crc32": zlib.crc32(data)}


def _write_durably(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


class IndexWriter:
    """Exclusive, single-use builder for one index directory.

    Use :func:`open_writer` to create one. Documents are analyzed with the
    bound :class:`AnalyzerConfig` on :meth:`add_document`; nothing reaches
    disk until :meth:`commit`.
    """

    def __init__(self, directory, config: AnalyzerConfig, metadata: Optional[dict] = None):
        self.directory = Path(directory)
        self.config = config
        self.metadata = dict(metadata or {})
        self._doc_ids: list[str] = []
        self._ordinal_of: dict[str, int] = {}
        self._doc_lengths: list[int] = []
        self._postings: dict[str, tuple[list[int], list[int]]] = {}
        self._closed = False
        self._acquire()

    def _acquire(self) -> None:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IndexIOError(f"cannot create index directory {self.directory}: {exc}") from exc
        if (self.directory / MANIFEST).exists():
            raise IndexExistsError(
                f"{self.directory} already holds a committed index; incremental updates are not supported"
            )
        try:
            fd = os.open(self.directory / LOCK, os.O_CREAT | os.O_EXCL | os.O_WRONLY, 0o644)
        except FileExistsError:
            raise ConcurrentWriterError(f"{self.directory} is locked by another writer") from None
        except OSError as exc:
            raise IndexIOError(f"cannot lock {self.directory}: {exc}") from exc
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))

    def _release(self) -> None:
        try:
            (self.directory / LOCK).unlink()
        except FileNotFoundError:
            pass

    def _check_open(self) -> None:
        if self._closed:
            raise WriterClosedError("writer is closed")

    @property
    def closed(self) -> bool:
        return self._closed

    def add_document(self, doc: Document) -> int:
        self._check_open()
        if doc.doc_id in self._ordinal_of:
            raise DuplicateDocumentError(doc.doc_id)
        tokens = analyze(doc.text(), self.config, at_query_time=False)
        ordinal = len(self._doc_ids)
        for term, tf in Counter(t.text for t in tokens).items():
            entry = self._postings.get(term)
            if entry is None:
                entry = self._postings[term] = ([], [])
            entry[0].append(ordinal)
            entry[1].append(tf)
        self._doc_ids.append(doc.doc_id)
        self._ordinal_of[doc.doc_id] = ordinal
        self._doc_lengths.append(len(tokens))
        return ordinal

    def add(self, doc_id: str, body: RawText, title: Optional[RawText] = None) -> int:
        return self.add_document(Document(doc_id, body, title))

    # in-memory views, mirroring IndexReader

    @property
    def doc_count(self) -> int:
        return len(self._doc_ids)

    def stats(self) -> IndexStats:
        return IndexStats(self._doc_lengths)

    def vocabulary(self) -> list[str]:
        return sorted(self._postings, key=_utf8_key)

    def postings(self, term: str) -> PostingList:
        ords, tfs = self._postings.get(term, ((), ()))
        return PostingList(term, ords, tfs)

    def doc_ids(self) -> list[str]:
        return list(self._doc_ids)

    def _serialize(self) -> dict[str, bytes]:
        terms = bytearray()
        chunks = []
        offset = 0
        for term in self.vocabulary():
            ords, tfs = self._postings[term]
            pairs = np.empty(2 * len(ords), dtype=np.int64)
            pairs[0::2] = np.diff(ords, prepend=0)
            pairs[1::2] = tfs
            chunk = varint.encode_array(pairs)
            raw = term.encode("utf-8")
            varint.encode(len(raw), terms)
            terms += raw
            varint.encode(len(ords), terms)
            varint.encode(offset, terms)
            chunks.append(chunk)
            offset += len(chunk)
        doclens = np.asarray(self._doc_lengths, dtype="<u4").tobytes()
        return {TERMS: bytes(terms), POSTINGS: b"".join(chunks), DOCLENS: doclens}

    def _manifest(self, files: dict[str, bytes]) -> dict:
        stats = self.stats()
        return {
            "format_version": FORMAT_VERSION,
            "analyzer_fingerprint": self.config.fingerprint,
            "doc_count": stats.doc_count,
            "total_token_count": stats.total_token_count,
            "vocabulary_size": len(self._postings),
            "doc_ids": self._doc_ids,
            "files": {name: _checksum(data) for name, data in files.items()},
            "analyzer": {
                "fold_homophones": self.config.fold_homophones,
                "enable_stemming": self.config.enable_stemming,
                "enable_synonyms": self.config.enable_synonyms,
            },
            "metadata": self.metadata,
        }

    def _write_manifest(self, manifest: dict) -> None:
        blob = json.dumps(manifest, ensure_ascii=False, indent=1, sort_keys=True)
        _write_durably(self.directory / MANIFEST, blob.encode("utf-8"))

    def commit(self) -> None:
        """Write all data files, then the manifest, then drop the lock."""
        self._check_open()
        self._closed = True
        try:
            files = self._serialize()
            for name, data in files.items():
                _write_durably(self.directory / name, data)
            self._write_manifest(self._manifest(files))
        except Exception as exc:
            try:
                (self.directory / MANIFEST).unlink()
            except OSError:
                pass
            raise CommitError(f"commit to {self.directory} failed: {exc}") from exc
        finally:
            self._release()
        log.info(
            "committed %d documents, %d terms to %s",
            len(self._doc_ids), len(self._postings), self.directory,
        )

    def abort(self) -> None:
        if not self._closed:
            self._closed = True
            self._release()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None and not self._closed:
            self.commit()
        else:
            self.abort()
        return False


def open_writer(directory, config: AnalyzerConfig, metadata: Optional[dict] = None) -> IndexWriter:
    return IndexWriter(directory, config, metadata)


class IndexReader:
    """Immutable view of a committed index. Safe to share across threads."""

    def __init__(self, directory):
        self.directory = Path(directory)
        manifest = self._load_manifest()
        self.manifest = manifest
        self.format_version = manifest["format_version"]
        self.analyzer_fingerprint: str = manifest["analyzer_fingerprint"]
        self.metadata: dict = manifest.get("metadata", {})
        self._doc_ids: tuple[str, ...] = tuple(manifest["doc_ids"])
        self._ordinal_of = {d: i for i, d in enumerate(self._doc_ids)}
        data = {name: self._load_file(name, manifest["files"]) for name in DATA_FILES}
        self._postings_buf = data[POSTINGS]
        doc_lengths = np.frombuffer(data[DOCLENS], dtype="<u4").astype(np.int64)
        self._stats = IndexStats(doc_lengths)
        if (
            self._stats.doc_count != manifest["doc_count"]
            or self._stats.total_token_count != manifest["total_token_count"]
            or len(self._ordinal_of) != len(self._doc_ids)
            or len(self._doc_ids) != self._stats.doc_count
        ):
            raise NoValidIndexError(f"{self.directory}: manifest disagrees with data files")
        self._terms = self._parse_terms(data[TERMS])
        if len(self._terms) != manifest["vocabulary_size"]:
            raise NoValidIndexError(f"{self.directory}: vocabulary size mismatch")
        self._decode = lru_cache(maxsize=8192)(self._decode_uncached)

    def _load_manifest(self) -> dict:
        path = self.directory / MANIFEST
        try:
            manifest = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise NoValidIndexError(f"no committed index in {self.directory}") from None
        except (OSError, ValueError) as exc:
            raise NoValidIndexError(f"unreadable manifest in {self.directory}: {exc}") from None
        if not isinstance(manifest, dict) or "format_version" not in manifest:
            raise NoValidIndexError(f"malformed manifest in {self.directory}")
        if manifest["format_version"] != FORMAT_VERSION:
            raise UnsupportedVersionError(
                f"index format version {manifest['format_version']!r} is not supported "
                f"(expected {FORMAT_VERSION})"
            )
        required = ("analyzer_fingerprint", "doc_count", "total_token_count",
                    "vocabulary_size", "doc_ids", "files")
        missing = [k for k in required if k not in manifest]
        if missing:
            raise NoValidIndexError(f"manifest in {self.directory} lacks {', '.join(missing)}")
        return manifest

    def _load_file(self, name: str, files: dict) -> bytes:
        try:
            data = (self.directory / name).read_bytes()
        except OSError as exc:
            raise NoValidIndexError(f"{self.directory}: cannot read {name}: {exc}") from None
        if name not in files or _checksum(data) != files[name]:
            raise NoValidIndexError(f"{self.directory}: {name} is corrupt or truncated")
        return data

    def _parse_terms(self, buf: bytes) -> dict[str, tuple[int, int, int]]:
        entries = []
        pos = 0
        try:
            while pos < len(buf):
                n, pos = varint.decode(buf, pos)
                term = buf[pos:pos + n].decode("utf-8")
                pos += n
                df, pos = varint.decode(buf, pos)
                offset, pos = varint.decode(buf, pos)
                entries.append((term, df, offset))
        except (ValueError, UnicodeDecodeError) as exc:
            raise NoValidIndexError(f"{self.directory}: corrupt term dictionary: {exc}") from None
        terms = {}
        for i, (term, df, offset) in enumerate(entries):
            end = entries[i + 1][2] if i + 1 < len(entries) else len(self._postings_buf)
            terms[term] = (df, offset, end)
        return terms

    def _decode_uncached(self, term: str) -> PostingList:
        entry = self._terms.get(term)
        if entry is None:
            return PostingList(term, (), ())
        df, start, end = entry
        pairs = varint.decode_array(self._postings_buf[start:end]).astype(np.int64)
        if pairs.size != 2 * df:
            raise NoValidIndexError(f"posting list for {term!r} is corrupt")
        return PostingList(term, np.cumsum(pairs[0::2]), pairs[1::2])

    def postings(self, term: str) -> PostingList:
        return self._decode(term)

    def document_frequency(self, term: str) -> int:
        entry = self._terms.get(term)
        return 0 if entry is None else entry[0]

    def stats(self) -> IndexStats:
        return self._stats

    @property
    def doc_count(self) -> int:
        return self._stats.doc_count

    def vocabulary(self) -> list[str]:
        return list(self._terms)

    def doc_id(self, ordinal: int) -> str:
        return self._doc_ids[ordinal]

    def ordinal(self, doc_id: str) -> int:
        return self._ordinal_of[doc_id]

    def doc_ids(self) -> list[str]:
        return list(self._doc_ids)

    def __contains__(self, term) -> bool:
        return term in self._terms

    def __repr__(self):
        return f"IndexReader({str(self.directory)!r}, {self._stats!r})"


def open_reader(directory) -> IndexReader:
    return IndexReader(directory)
