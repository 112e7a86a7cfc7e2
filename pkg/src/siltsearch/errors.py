"""Exception hierarchy shared by all siltsearch modules."""


class SiltSearchError(Exception):
    """Base class for every error raised by this package."""


class InputEncodingError(SiltSearchError, ValueError):
    """Input text is not valid UTF-8."""


class ResourceError(SiltSearchError):
    """An analyzer resource file (stop words, stems, synonyms, fold table) failed to load."""


class IndexStoreError(SiltSearchError):
    """Base for index-level failures."""


class ConcurrentWriterError(IndexStoreError):
    """Another writer holds the lock on the index directory."""


class IndexExistsError(IndexStoreError):
    """The directory already holds a committed index; updates are not supported."""


class DuplicateDocumentError(IndexStoreError):
    def __init__(self, doc_id):
        super().__init__(f"duplicate document id: {doc_id!r}")
        self.doc_id = doc_id


class WriterClosedError(IndexStoreError):
    pass


class CommitError(IndexStoreError):
    """Commit failed; the directory holds no manifest."""


class NoValidIndexError(IndexStoreError):
    pass


class UnsupportedVersionError(IndexStoreError):
    pass


class UndefinedStatisticsError(SiltSearchError, ValueError):
    """Corpus statistics are undefined, e.g. IDF over an empty collection."""


class AnalyzerMismatchError(SiltSearchError):
    def __init__(self, index_fingerprint, query_fingerprint):
        super().__init__(
            f"analyzer fingerprint mismatch: index={index_fingerprint} query={query_fingerprint}"
        )
        self.index_fingerprint = index_fingerprint
        self.query_fingerprint = query_fingerprint


class ExcludedQueryError(SiltSearchError, ValueError):
    """The query has no relevant documents, so recall is undefined."""


class EmptyEvaluationError(SiltSearchError, ValueError):
    """No query could be evaluated."""


class ComparisonError(SiltSearchError, ValueError):
    """Two runs cover different query sets."""


class FormatError(SiltSearchError, ValueError):
    """A qrels, run or queries file line is malformed."""

    def __init__(self, message, lineno=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.lineno = lineno
        self.path = path


class IndexIOError(IndexStoreError):
    """Reading or writing index files failed at the OS level."""
