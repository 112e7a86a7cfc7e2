"""Independent reference computations used as test oracles.

Nothing here imports the scoring or index code under test.
"""

import math
from collections import Counter


def bm25_brute_force(doc_terms, query_terms, k1=1.2, b=0.75):
    """Score every document straight from its analyzed term list.

    ``doc_terms`` maps doc_id -> list of terms. Returns doc_id -> score for
    documents sharing at least one term with the query.
    """
    N = len(doc_terms)
    lengths = {d: len(ts) for d, ts in doc_terms.items()}
    avgdl = sum(lengths.values()) / N if N else 0.0
    counts = {d: Counter(ts) for d, ts in doc_terms.items()}
    df = Counter()
    for c in counts.values():
        for t in c:
            df[t] += 1
    scores = {}
    for d, c in counts.items():
        total = 0.0
        matched = False
        for t in query_terms:  # one contribution per query occurrence
            tf = c.get(t, 0)
            if tf == 0:
                continue
            matched = True
            w = math.log1p((N - df[t] + 0.5) / (df[t] + 0.5))
            saturation = tf * (k1 + 1) / (tf + k1 * (1 - b + b * lengths[d] / avgdl))
            total += w * saturation
        if matched:
            scores[d] = total
    return scores


def rank_brute_force(scores, k):
    return sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]


def fold_char_by_char(text, families):
    """Fold using a plain per-character table built from (src_base, dst_base) pairs."""
    table = {}
    for src, dst in families:
        for order in range(7):
            table[chr(src + order)] = chr(dst + order)
    return "".join(table.get(ch, ch) for ch in text)


def ap_by_definition(ranking, relevant):
    """Average of precision@rank over relevant documents (missing ones add 0)."""
    total = 0.0
    for i, doc in enumerate(ranking):
        if doc in relevant:
            prefix = ranking[: i + 1]
            total += sum(1 for d in prefix if d in relevant) / len(prefix)
    return total / len(relevant)


def interpolated_by_definition(ranking, relevant):
    """Eleven-point interpolation over every (recall, precision) point of the ranking."""
    points = []
    for i in range(1, len(ranking) + 1):
        hits = sum(1 for d in ranking[:i] if d in relevant)
        points.append((hits / len(relevant), hits / i))
    curve = []
    for level in range(11):
        eligible = [p for r, p in points if r * 10 >= level - 1e-9]
        curve.append(max(eligible) if eligible else 0.0)
    return curve
