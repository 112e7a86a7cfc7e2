"""Corpus readers: a directory of ``.txt`` files or a JSON-lines file."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator

from .errors import SiltSearchError
from .index import Document


class CorpusError(SiltSearchError):
    pass


def read_corpus(path) -> Iterator[Document]:
    """Yield documents from ``path``.

    A directory contributes every ``*.txt`` file (sorted by name, doc_id = file
    stem). A ``.jsonl`` file holds one object per line with ``id``, optional
    ``title`` and ``body``.
    """
    path = Path(path)
    if path.is_dir():
        yield from _read_directory(path)
    elif path.is_file() and path.suffix == ".jsonl":
        yield from _read_jsonl(path)
    elif path.exists():
        raise CorpusError(f"{path}: expected a directory of .txt files or a .jsonl file")
    else:
        raise CorpusError(f"{path}: no such corpus")


def _read_directory(path: Path) -> Iterator[Document]:
    for file in sorted(path.glob("*.txt")):
        if not file.is_file():
            continue
        try:
            body = file.read_bytes()
        except OSError as exc:
            raise CorpusError(f"{file}: {exc.strerror or exc}") from None
        try:
            body = body.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusError(f"{file}: not valid UTF-8 ({exc})") from None
        yield Document(file.stem, body)


def _read_jsonl(path: Path) -> Iterator[Document]:
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"{path}: {exc.strerror or exc}") from None
    with fh:
        lineno = 0
        try:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except ValueError as exc:
                    raise CorpusError(f"{path}:{lineno}: invalid JSON ({exc})") from None
                if not isinstance(record, dict):
                    raise CorpusError(f"{path}:{lineno}: record must be a JSON object")
                doc_id = record.get("id")
                if doc_id is None or doc_id == "":
                    raise CorpusError(f"{path}:{lineno}: record has no 'id'")
                body = record.get("body", "")
                title = record.get("title")
                if not isinstance(body, str) or not (title is None or isinstance(title, str)):
                    raise CorpusError(f"{path}:{lineno}: 'title' and 'body' must be strings")
                yield Document(str(doc_id), body, title)
        except UnicodeDecodeError as exc:
            raise CorpusError(f"{path}:{lineno + 1}: not valid UTF-8 ({exc})") from None
