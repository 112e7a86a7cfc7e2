"""
Does stemming and synonym expansion help?
=========================================

Run the fixture queries twice, once with only tokenizing, folding and stop
words, once with the stem dictionary and synonym groups switched on, and
compare MAP, recall and the 11-point interpolated curve. The curves are
saved as a matplotlib figure when matplotlib is installed.
"""

from siltsearch import (
    RECALL_LEVELS,
    EngineConfig,
    Qrels,
    compare_configs,
    evaluate_config,
    fixture_path,
    load_queries,
    read_corpus,
)

fx = fixture_path()
docs = list(read_corpus(fx / "corpus.jsonl"))
queries = load_queries(fx / "queries.tsv")
qrels = Qrels.load(fx / "qrels.txt")

before = EngineConfig.load(fx / "baseline.json")
after = EngineConfig.load(fx / "full.json")

run_before, _ = evaluate_config(docs, queries, qrels, before.analyzer(), 1000, before.params())
run_after, _ = evaluate_config(docs, queries, qrels, after.analyzer(), 1000, after.params())

cmp = compare_configs(run_before, run_after, qrels, labels=("without", "with"))
print(cmp.table())

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(RECALL_LEVELS, cmp.before.mean_curve, "o-", label="without stemming and synonyms")
    ax.plot(RECALL_LEVELS, cmp.after.mean_curve, "s-", label="with stemming and synonyms")
    ax.set_xlabel("recall")
    ax.set_ylabel("interpolated precision")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig("recall_precision.png", dpi=120)
    print("\nwrote recall_precision.png")
