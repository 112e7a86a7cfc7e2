"""Command-line interface.

Exit status: 0 success, 2 usage or input error, 3 internal or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import tempfile
from pathlib import Path

from . import __version__
from .analysis import analysis_stages
from .config import EVAL_DEPTH, SEARCH_DEPTH, ConfigError, EngineConfig
from .corpus import CorpusError, read_corpus
from .errors import (
    AnalyzerMismatchError,
    CommitError,
    ComparisonError,
    ConcurrentWriterError,
    DuplicateDocumentError,
    FormatError,
    IndexExistsError,
    IndexIOError,
    InputEncodingError,
    NoValidIndexError,
    ResourceError,
    UnsupportedVersionError,
)
from .evaluation import Qrels, compare_configs, evaluate, load_queries
from .experiment import build_index, run_queries
from .index import open_reader, open_writer
from .retrieval import Query, search

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INTERNAL = 3

log = logging.getLogger("siltsearch")


class CLIError(Exception):
    def __init__(self, message, status=EXIT_USAGE):
        super().__init__(message)
        self.status = status


def _engine_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("engine configuration")
    g.add_argument("--config", metavar="JSON", help="engine config file; flags override its values")
    g.add_argument("--stopwords", metavar="FILE", help="stop-word list, one term per line")
    g.add_argument("--stem-dict", dest="stem_dict", metavar="FILE", help="surface<TAB>stem dictionary")
    g.add_argument("--synonyms", metavar="FILE", help="comma-separated synonym groups, one per line")
    g.add_argument("--fold-table", dest="fold_table", metavar="FILE", help="fromChar<TAB>toChar overrides")
    g.add_argument("--no-fold", dest="fold_homophones", action="store_const", const=False,
                   help="disable homophone folding")
    g.add_argument("--no-stem", dest="enable_stemming", action="store_const", const=False,
                   help="disable dictionary stemming")
    g.add_argument("--no-synonyms", dest="enable_synonyms", action="store_const", const=False,
                   help="disable index-time synonym expansion")
    g.add_argument("--k1", type=float, help="BM25 term-frequency saturation (default 1.2)")
    g.add_argument("--b", type=float, help="BM25 length normalization (default 0.75)")
    g.add_argument("--k", type=int, help="result depth")
    return p


_OVERRIDES = ("stopwords", "stem_dict", "synonyms", "fold_table", "fold_homophones",
              "enable_stemming", "enable_synonyms", "k1", "b", "k")


def build_parser() -> argparse.ArgumentParser:
    parent = _engine_parent()
    parser = argparse.ArgumentParser(
        prog="siltsearch", description="BM25 search and evaluation for Ethiopic-script text"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[parent], help="build an index from a corpus")
    p.add_argument("corpus", help="directory of .txt files or a .jsonl file")
    p.add_argument("index_dir")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", parents=[parent], help="search an index")
    p.add_argument("index_dir")
    p.add_argument("query", nargs="?", help="query text; omit for an interactive loop on stdin")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("analyze", parents=[parent], help="show every analysis stage for a text")
    p.add_argument("text")
    p.add_argument("--query", dest="at_query_time", action="store_true",
                   help="analyze as a query (no synonym expansion)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("eval", parents=[parent], help="run a query set and evaluate it")
    p.add_argument("index_dir")
    p.add_argument("queries", help="TSV file: query_id<TAB>query text")
    p.add_argument("qrels", help="TREC qrels: query_id 0 doc_id relevance")
    p.add_argument("--output-dir", default=".", help="where run, report and CSV files go")
    p.add_argument("--compare", metavar="JSON",
                   help="second engine config (applied over this one) for a side-by-side report")
    p.add_argument("--compare-index", metavar="DIR", help="index built with the --compare config")
    p.add_argument("--corpus", help="corpus to build the --compare index from when none is given")
    p.set_defaults(func=cmd_eval)
    return parser


def _engine_config(args, base: EngineConfig | None = None) -> EngineConfig:
    cfg = base or EngineConfig()
    if args.config:
        cfg = cfg.merged(_load_json_config(args.config), Path(args.config).parent)
    cfg = cfg.merged({name: getattr(args, name) for name in _OVERRIDES})
    return cfg.validate()


def _load_json_config(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


def _stored_engine(reader) -> EngineConfig:
    stored = reader.metadata.get("engine")
    if not stored:
        return EngineConfig()
    try:
        return EngineConfig.from_dict(stored)
    except ConfigError:
        return EngineConfig()


def _open_index(index_dir):
    try:
        return open_reader(index_dir)
    except (NoValidIndexError, UnsupportedVersionError) as exc:
        raise CLIError(str(exc)) from None


def _check_fingerprint(reader, analyzer) -> None:
    if analyzer.fingerprint != reader.analyzer_fingerprint:
        raise CLIError(
            "analyzer configuration does not match the index\n"
            f"  index fingerprint: {reader.analyzer_fingerprint}\n"
            f"  query fingerprint: {analyzer.fingerprint}"
        )


def cmd_index(args, out) -> int:
    engine = _engine_config(args)
    analyzer = engine.analyzer()
    try:
        writer = open_writer(args.index_dir, analyzer, {"engine": engine.to_dict()})
    except (IndexExistsError, ConcurrentWriterError) as exc:
        raise CLIError(str(exc)) from None
    except IndexIOError as exc:
        raise CLIError(str(exc), EXIT_INTERNAL) from None
    try:
        for doc in read_corpus(args.corpus):
            writer.add_document(doc)
    except DuplicateDocumentError as exc:
        writer.abort()
        raise CLIError(f"duplicate document id: {exc.doc_id}") from None
    except (CorpusError, InputEncodingError) as exc:
        writer.abort()
        raise CLIError(str(exc)) from None
    except BaseException:
        writer.abort()
        raise
    if writer.doc_count == 0:
        log.warning("corpus %s holds no documents; writing an empty index", args.corpus)
    try:
        writer.commit()
    except CommitError as exc:
        raise CLIError(str(exc), EXIT_INTERNAL) from None
    reader = open_reader(args.index_dir)
    stats = reader.stats()
    print(f"documents: {stats.doc_count}", file=out)
    print(f"vocabulary: {len(reader.vocabulary())}", file=out)
    print(f"avgdl: {stats.avgdl:.6f}", file=out)
    return EXIT_OK


def _print_hits(hits, out) -> None:
    if not hits:
        note = " (empty query)" if hits.empty_query else ""
        print(f"0 results{note}", file=out)
        return
    for rank, hit in enumerate(hits, 1):
        print(f"{rank}\t{hit.doc_id}\t{hit.score:.6f}", file=out)


def cmd_search(args, out, stdin=None) -> int:
    reader = _open_index(args.index_dir)
    engine = _engine_config(args, _stored_engine(reader))
    analyzer = engine.analyzer()
    _check_fingerprint(reader, analyzer)
    params = engine.params()
    k = engine.k or SEARCH_DEPTH
    if args.query is not None:
        _print_hits(search(reader, Query.parse(args.query, analyzer), k, params), out)
        return EXIT_OK
    stdin = stdin or sys.stdin
    interactive = stdin.isatty()
    while True:
        if interactive:
            print("query> ", end="", file=sys.stderr, flush=True)
        line = stdin.readline()
        if not line:
            break
        text = line.strip()
        if not text:
            continue
        _print_hits(search(reader, Query.parse(text, analyzer), k, params), out)
        out.flush()
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    engine = _engine_config(args)
    analyzer = engine.analyzer()
    for stage, tokens, active in analysis_stages(args.text, analyzer, args.at_query_time):
        label = stage if active else f"{stage} (off)"
        shown = " ".join(f"+{t.text}" if t.injected else t.text for t in tokens)
        print(f"{label + ':':<18}{shown}".rstrip(), file=out)
    return EXIT_OK


def _write(directory: Path, name: str, text: str) -> None:
    (directory / name).write_text(text, encoding="utf-8")


def cmd_eval(args, out) -> int:
    reader = _open_index(args.index_dir)
    engine = _engine_config(args, _stored_engine(reader))
    analyzer = engine.analyzer()
    _check_fingerprint(reader, analyzer)
    queries = load_queries(args.queries)
    qrels = Qrels.load(args.qrels)
    depth = engine.k or EVAL_DEPTH
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)

    run = run_queries(reader, queries, analyzer, depth, engine.params())
    report = evaluate(run, qrels)
    run.write(outdir / "run.txt")
    _write(outdir, "metrics.csv", report.metrics_csv())
    text = report.table()
    if report.per_query:
        _write(outdir, "curve.csv", report.curve_csv())

    if args.compare:
        other = engine.merged(_load_json_config(args.compare), Path(args.compare).parent).validate()
        other_analyzer = other.analyzer()
        other_run = _compare_run(args, reader, analyzer, other, other_analyzer, queries)
        comparison = compare_configs(run, other_run, qrels, labels=("base", "compare"))
        other_run.write(outdir / "compare_run.txt")
        _write(outdir, "compare_metrics.csv", comparison.after.metrics_csv())
        if comparison.before.per_query:
            _write(outdir, "compare_curve.csv", comparison.after.curve_csv())
            _write(outdir, "comparison.csv", comparison.comparison_csv())
            _write(outdir, "comparison_curve.csv", comparison.curve_csv())
        text += "\n" + comparison.table()

    _write(outdir, "report.txt", text)
    out.write(text)
    if not report.per_query:
        log.warning("no query had relevant documents; nothing was evaluated")
    return EXIT_OK


def _compare_run(args, reader, analyzer, other, other_analyzer, queries):
    depth = other.k or EVAL_DEPTH
    if args.compare_index:
        other_reader = _open_index(args.compare_index)
        _check_fingerprint(other_reader, other_analyzer)
        return run_queries(other_reader, queries, other_analyzer, depth, other.params())
    if other_analyzer.fingerprint == analyzer.fingerprint:
        return run_queries(reader, queries, other_analyzer, depth, other.params())
    if not args.corpus:
        raise CLIError(
            "--compare changes the analyzer; pass --compare-index or --corpus to index it"
        )
    with tempfile.TemporaryDirectory(prefix="siltsearch-") as tmp:
        try:
            other_reader = build_index(read_corpus(args.corpus), tmp, other_analyzer)
        except (CorpusError, DuplicateDocumentError, InputEncodingError) as exc:
            raise CLIError(str(exc)) from None
        return run_queries(other_reader, queries, other_analyzer, depth, other.params())


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return args.func(args, out)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.status
    except (ResourceError, ConfigError, FormatError, InputEncodingError,
            AnalyzerMismatchError, ComparisonError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CommitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
