"""BM25 full-text retrieval for Ethiopic-script (Silt'e) text.

Typical use::

    from siltsearch import AnalyzerConfig, Document, build_index, Query, search

    config = AnalyzerConfig.from_files(stopwords="stopwords.txt")
    reader = build_index(docs, "idx", config)
    hits = search(reader, Query.parse("ፋግ", config), k=10)
"""

__version__ = "0.1.0"

from .analysis import (
    DEFAULT_FOLD_TABLE,
    AnalyzerConfig,
    StemDictionary,
    StopwordList,
    SynonymMap,
    Token,
    analysis_stages,
    analyze,
    analyze_terms,
    expand_synonyms,
    normalize,
    remove_stopwords,
    stem,
    tokenize,
)
from .config import EngineConfig
from .corpus import read_corpus
from .evaluation import (
    RECALL_LEVELS,
    Comparison,
    EvalReport,
    Qrels,
    RunResult,
    average_precision,
    compare_configs,
    evaluate,
    f_measure,
    interpolated_pr_curve,
    load_queries,
    mean_average_precision,
    precision,
    recall,
)
from .experiment import build_index, evaluate_config, run_queries
from .index import (
    Document,
    IndexReader,
    IndexStats,
    IndexWriter,
    Posting,
    PostingList,
    open_reader,
    open_writer,
)
from .resources import fixture_path, resource_path
from .retrieval import (
    BM25Params,
    Query,
    ScoredDoc,
    SearchResults,
    idf,
    score_all,
    score_document,
    search,
    search_text,
    term_score,
)
