"""Glue for batch experiments: build an index, run a query set, evaluate."""

from __future__ import annotations

import tempfile
from typing import Iterable, Mapping, Optional

from .analysis import AnalyzerConfig
from .evaluation import EvalReport, Qrels, RunResult, evaluate
from .index import Document, IndexReader, open_reader, open_writer
from .retrieval import BM25Params, Query, search


def build_index(documents: Iterable[Document], directory, config: AnalyzerConfig,
                metadata: Optional[dict] = None) -> IndexReader:
    writer = open_writer(directory, config, metadata)
    try:
        for doc in documents:
            writer.add_document(doc)
    except BaseException:
        writer.abort()
        raise
    writer.commit()
    return open_reader(directory)


def run_queries(reader: IndexReader, queries: Mapping[str, str], config: AnalyzerConfig,
                k: int = 1000, params: BM25Params = BM25Params(), tag: str = "siltsearch") -> RunResult:
    """Search every query; each query id gets an entry, possibly empty."""
    run = RunResult(tag=tag)
    for qid, text in queries.items():
        hits = search(reader, Query.parse(text, config), k, params)
        run.set(qid, [(h.doc_id, h.score) for h in hits])
    return run


def evaluate_config(documents: Iterable[Document], queries: Mapping[str, str], qrels: Qrels,
                    config: AnalyzerConfig, k: int = 1000,
                    params: BM25Params = BM25Params()) -> tuple[RunResult, EvalReport]:
    """Index ``documents`` into a scratch directory under ``config`` and evaluate."""
    with tempfile.TemporaryDirectory(prefix="siltsearch-") as tmp:
        reader = build_index(documents, tmp, config)
        run = run_queries(reader, queries, config, k, params)
    return run, evaluate(run, qrels)
