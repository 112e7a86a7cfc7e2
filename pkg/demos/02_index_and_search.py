"""
Building an index and ranking with BM25
=======================================

Index the bundled fixture corpus, reopen it from disk and run a few
queries. The raw score vector is a plain numpy array, handy for poking at
how k1 and b reshape a ranking.
"""

import tempfile

import numpy as np

from siltsearch import (
    BM25Params,
    EngineConfig,
    Query,
    build_index,
    fixture_path,
    load_queries,
    open_reader,
    read_corpus,
    score_all,
    search,
)

fx = fixture_path()
config = EngineConfig.load(fx / "full.json").analyzer()
docs = list(read_corpus(fx / "corpus.jsonl"))
queries = load_queries(fx / "queries.tsv")

tmp = tempfile.mkdtemp(prefix="siltsearch-demo-")
build_index(docs, tmp, config)

# everything below reads only what was committed
reader = open_reader(tmp)
stats = reader.stats()
print(f"{stats.doc_count} docs, {len(reader.vocabulary())} terms, avgdl {stats.avgdl:.2f}")

qid, text = next(iter(queries.items()))
query = Query.parse(text, config)
print(f"\n{qid}: {text!r} -> terms {query.terms}")
for rank, hit in enumerate(search(reader, query, k=5), 1):
    print(f"  {rank}  {hit.doc_id}  {hit.score:.4f}")

# b=0 ignores document length; b=1 normalizes fully
for params in (BM25Params(1.2, 0.0), BM25Params(1.2, 0.75), BM25Params(1.2, 1.0)):
    scores = score_all(query, reader, params)
    top = np.argsort(-scores, kind="stable")[:3]
    print(f"k1={params.k1} b={params.b}:", [(reader.doc_id(i), round(float(scores[i]), 3)) for i in top])

# a query whose every word is a stop word has nothing left to match
print("\nempty query flag:", search(reader, Query.parse("አብተቴ አብታይ", config)).empty_query)
