"""Effectiveness metrics for ranked retrieval with binary relevance.

Precision and recall are set-based over the full retrieved list (optionally
cut at ``depth``). Average precision divides by the number of relevant
documents, so unretrieved relevant documents count as zero. Interpolated
precision is reported at the eleven recall levels 0.0, 0.1, ..., 1.0.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ComparisonError, EmptyEvaluationError, ExcludedQueryError, FormatError

RECALL_LEVELS = tuple(i / 10 for i in range(11))
METRICS = ("precision", "recall", "f_measure", "average_precision")


def _natural_key(qid: str):
    return [(0, int(p), "") if p.isdigit() else (1, 0, p) for p in re.split(r"(\d+)", qid) if p]


def sorted_query_ids(qids: Iterable[str]) -> list[str]:
    return sorted(qids, key=lambda q: (_natural_key(q), q))


# -- per-query metrics -----------------------------------------------------------


def precision(retrieved: Iterable[str], relevant: Iterable[str]) -> float:
    """Fraction of retrieved documents that are relevant; 0.0 if nothing was retrieved."""
    retrieved = set(retrieved)
    if not retrieved:
        return 0.0
    return len(retrieved & set(relevant)) / len(retrieved)


def recall(retrieved: Iterable[str], relevant: Iterable[str]) -> float:
    relevant = set(relevant)
    if not relevant:
        raise ExcludedQueryError("recall is undefined without relevant documents")
    return len(set(retrieved) & relevant) / len(relevant)


def f_measure(p: float, r: float) -> float:
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def average_precision(ranking: Sequence[str], relevant: Iterable[str]) -> float:
    relevant = set(relevant)
    if not relevant:
        raise ExcludedQueryError("average precision is undefined without relevant documents")
    hits = 0
    total = 0.0
    for rank, doc in enumerate(ranking, 1):
        if doc in relevant:
            hits += 1
            total += hits / rank
    return total / len(relevant)


def interpolated_pr_curve(ranking: Sequence[str], relevant: Iterable[str]) -> tuple[float, ...]:
    """Eleven-point interpolated precision: at each recall level, the best
    precision observed at that recall or beyond (0.0 where none exists)."""
    relevant = set(relevant)
    n_rel = len(relevant)
    if not n_rel:
        raise ExcludedQueryError("recall levels are undefined without relevant documents")
    # (hits, precision) at every relevant hit; precision can only peak at hits
    points = []
    hits = 0
    for rank, doc in enumerate(ranking, 1):
        if doc in relevant:
            hits += 1
            points.append((hits, hits / rank))
    curve = []
    best = 0.0
    j = len(points) - 1
    for level in range(10, -1, -1):
        # recall >= level/10  <=>  10*hits >= level*n_rel, compared exactly
        while j >= 0 and 10 * points[j][0] >= level * n_rel:
            best = max(best, points[j][1])
            j -= 1
        curve.append(best)
    return tuple(reversed(curve))


# -- judgments and runs ------------------------------------------------------------


class Qrels:
    """Binary relevance judgments keyed by query id then document id."""

    def __init__(self, judgments: Mapping[str, Mapping[str, int]] | None = None):
        self._judgments: dict[str, dict[str, int]] = {}
        for qid, docs in (judgments or {}).items():
            for doc, rel in docs.items():
                self.add(qid, doc, rel)

    def add(self, query_id: str, doc_id: str, relevance: int) -> None:
        self._judgments.setdefault(query_id, {})[doc_id] = 1 if relevance > 0 else 0

    def relevant(self, query_id: str) -> frozenset[str]:
        docs = self._judgments.get(query_id, {})
        return frozenset(d for d, rel in docs.items() if rel)

    def judged(self, query_id: str) -> Mapping[str, int]:
        return dict(self._judgments.get(query_id, {}))

    @property
    def query_ids(self) -> list[str]:
        return sorted_query_ids(self._judgments)

    def __contains__(self, query_id) -> bool:
        return query_id in self._judgments

    def __len__(self):
        return len(self._judgments)

    @classmethod
    def parse(cls, lines: Iterable[str], source=None) -> Qrels:
        qrels = cls()
        for lineno, line in enumerate(lines, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise FormatError("expected 'query_id 0 doc_id relevance'", lineno, source)
            qid, _, doc, rel = parts
            try:
                rel = int(rel)
            except ValueError:
                raise FormatError(f"relevance {rel!r} is not an integer", lineno, source) from None
            qrels.add(qid, doc, rel)
        return qrels

    @classmethod
    def load(cls, path) -> Qrels:
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh, path)

    def dumps(self) -> str:
        out = io.StringIO()
        for qid in self.query_ids:
            for doc in sorted(self._judgments[qid]):
                out.write(f"{qid} 0 {doc} {self._judgments[qid][doc]}\n")
        return out.getvalue()


class RunResult:
    """Ranked output of a system: per query, ``(doc_id, score)`` pairs, rank 1 first."""

    def __init__(self, rankings: Mapping[str, Sequence] | None = None, tag: str = "siltsearch"):
        self.tag = tag
        self._rankings: dict[str, list[tuple[str, float]]] = {}
        for qid, ranking in (rankings or {}).items():
            self.set(qid, ranking)

    def set(self, query_id: str, ranking: Sequence) -> None:
        entries = []
        seen = set()
        for i, item in enumerate(ranking):
            if isinstance(item, str):
                doc, score = item, float(len(ranking) - i)
            else:
                doc, score = item[0], float(item[1])
            if doc in seen:
                raise ValueError(f"duplicate document {doc!r} in ranking for query {query_id!r}")
            seen.add(doc)
            entries.append((doc, score))
        self._rankings[query_id] = entries

    def ranking(self, query_id: str) -> list[str]:
        return [doc for doc, _ in self._rankings.get(query_id, ())]

    def scored(self, query_id: str) -> list[tuple[str, float]]:
        return list(self._rankings.get(query_id, ()))

    @property
    def query_ids(self) -> list[str]:
        return sorted_query_ids(self._rankings)

    def __contains__(self, query_id) -> bool:
        return query_id in self._rankings

    def __len__(self):
        return len(self._rankings)

    @classmethod
    def parse(cls, lines: Iterable[str], source=None) -> RunResult:
        rows: dict[str, list[tuple[int, str, float]]] = {}
        tag = None
        for lineno, line in enumerate(lines, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 6:
                raise FormatError("expected 'query_id Q0 doc_id rank score tag'", lineno, source)
            qid, _, doc, rank, score, tag = parts
            try:
                rank_i, score_f = int(rank), float(score)
            except ValueError:
                raise FormatError("rank must be an integer and score a number", lineno, source) from None
            rows.setdefault(qid, []).append((rank_i, doc, score_f))
        run = cls(tag=tag or "siltsearch")
        for qid, entries in rows.items():
            entries.sort(key=lambda e: e[0])
            try:
                run.set(qid, [(doc, score) for _, doc, score in entries])
            except ValueError as exc:
                raise FormatError(str(exc), None, source) from None
        return run

    @classmethod
    def load(cls, path) -> RunResult:
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh, path)

    def dumps(self) -> str:
        out = io.StringIO()
        for qid in self.query_ids:
            for rank, (doc, score) in enumerate(self._rankings[qid], 1):
                out.write(f"{qid} Q0 {doc} {rank} {score:.6f} {self.tag}\n")
        return out.getvalue()

    def write(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")


def load_queries(path) -> dict[str, str]:
    """Read ``query_id<TAB>query text`` lines, preserving file order."""
    queries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            qid, sep, text = line.partition("\t")
            qid = qid.strip()
            if not sep or not qid:
                raise FormatError("expected 'query_id<TAB>query text'", lineno, path)
            if qid in queries:
                raise FormatError(f"duplicate query id {qid!r}", lineno, path)
            queries[qid] = text
    return queries


# -- reports ------------------------------------------------------------------------


@dataclass(frozen=True)
class QueryEval:
    query_id: str
    retrieved: int
    relevant: int
    relevant_retrieved: int
    precision: float
    recall: float
    f_measure: float
    average_precision: float
    curve: tuple[float, ...]


def evaluate_query(query_id: str, ranking: Sequence[str], relevant: Iterable[str]) -> QueryEval:
    relevant = frozenset(relevant)
    p = precision(ranking, relevant)
    r = recall(ranking, relevant)
    return QueryEval(
        query_id=query_id,
        retrieved=len(ranking),
        relevant=len(relevant),
        relevant_retrieved=len(relevant.intersection(ranking)),
        precision=p,
        recall=r,
        f_measure=f_measure(p, r),
        average_precision=average_precision(ranking, relevant),
        curve=interpolated_pr_curve(ranking, relevant),
    )


@dataclass
class EvalReport:
    per_query: dict[str, QueryEval]
    excluded: list[str] = field(default_factory=list)
    depth: int | None = None

    @property
    def query_ids(self) -> list[str]:
        return list(self.per_query)

    def mean(self, metric: str) -> float:
        if not self.per_query:
            raise EmptyEvaluationError("no evaluable queries")
        return float(np.mean([getattr(q, metric) for q in self.per_query.values()]))

    @property
    def mean_precision(self) -> float:
        return self.mean("precision")

    @property
    def mean_recall(self) -> float:
        return self.mean("recall")

    @property
    def mean_f_measure(self) -> float:
        return self.mean("f_measure")

    @property
    def map(self) -> float:
        return self.mean("average_precision")

    @property
    def mean_curve(self) -> tuple[float, ...]:
        if not self.per_query:
            raise EmptyEvaluationError("no evaluable queries")
        curves = np.array([q.curve for q in self.per_query.values()])
        return tuple(float(v) for v in curves.mean(axis=0))

    def metrics_csv(self) -> str:
        out = io.StringIO()
        out.write("metric,query_id,value\n")
        for qid, q in self.per_query.items():
            for metric in METRICS:
                out.write(f"{metric},{qid},{getattr(q, metric)!r}\n")
        if self.per_query:
            out.write(f"precision,all,{self.mean_precision!r}\n")
            out.write(f"recall,all,{self.mean_recall!r}\n")
            out.write(f"f_measure,all,{self.mean_f_measure!r}\n")
            out.write(f"map,all,{self.map!r}\n")
        return out.getvalue()

    def curve_csv(self) -> str:
        out = io.StringIO()
        out.write("recall_level,precision\n")
        for level, p in zip(RECALL_LEVELS, self.mean_curve):
            out.write(f"{level:.1f},{p!r}\n")
        return out.getvalue()

    def table(self) -> str:
        lines = [
            f"evaluated queries: {len(self.per_query)}"
            f"    excluded (no relevant documents): {len(self.excluded)}"
        ]
        if self.excluded:
            lines.append("excluded: " + " ".join(self.excluded))
        header = f"{'query':<12}{'ret':>6}{'rel':>6}{'relret':>8}{'P':>9}{'R':>9}{'F1':>9}{'AP':>9}"
        lines.append(header)
        lines.append("-" * len(header))
        for qid, q in self.per_query.items():
            lines.append(
                f"{qid:<12}{q.retrieved:>6}{q.relevant:>6}{q.relevant_retrieved:>8}"
                f"{q.precision:>9.4f}{q.recall:>9.4f}{q.f_measure:>9.4f}{q.average_precision:>9.4f}"
            )
        if self.per_query:
            lines.append("-" * len(header))
            lines.append(
                f"{'mean':<12}{'':>6}{'':>6}{'':>8}{self.mean_precision:>9.4f}"
                f"{self.mean_recall:>9.4f}{self.mean_f_measure:>9.4f}{self.map:>9.4f}"
            )
            lines.append("")
            lines.append("interpolated precision")
            lines.append(" ".join(f"{lv:>5.1f}" for lv in RECALL_LEVELS))
            lines.append(" ".join(f"{p:>5.3f}" for p in self.mean_curve))
        return "\n".join(lines) + "\n"


def evaluate(run: RunResult, qrels: Qrels, depth: int | None = None) -> EvalReport:
    """Evaluate every query in ``run``. Queries without relevant documents are
    excluded and listed in ``report.excluded``."""
    per_query = {}
    excluded = []
    for qid in run.query_ids:
        relevant = qrels.relevant(qid)
        if not relevant:
            excluded.append(qid)
            continue
        ranking = run.ranking(qid)
        if depth is not None:
            ranking = ranking[:depth]
        per_query[qid] = evaluate_query(qid, ranking, relevant)
    return EvalReport(per_query, excluded, depth)


def mean_average_precision(run: RunResult, qrels: Qrels, depth: int | None = None) -> float:
    report = evaluate(run, qrels, depth)
    if not report.per_query:
        raise EmptyEvaluationError("no evaluable queries")
    return report.map


@dataclass
class Comparison:
    """Side-by-side evaluation of two runs over the same queries."""

    before: EvalReport
    after: EvalReport
    labels: tuple[str, str] = ("before", "after")

    def delta(self, metric: str) -> dict[str, float]:
        return {
            qid: getattr(self.after.per_query[qid], metric) - getattr(q, metric)
            for qid, q in self.before.per_query.items()
        }

    def mean_delta(self, metric: str) -> float:
        return self.after.mean(metric) - self.before.mean(metric)

    @property
    def curve_delta(self) -> tuple[float, ...]:
        return tuple(a - b for a, b in zip(self.after.mean_curve, self.before.mean_curve))

    def levels_dominated(self) -> int:
        """Recall levels at which ``after`` is at least as precise as ``before``."""
        return sum(a >= b for a, b in zip(self.after.mean_curve, self.before.mean_curve))

    def comparison_csv(self) -> str:
        a, b = self.labels
        out = io.StringIO()
        out.write(f"metric,query_id,{a},{b},delta\n")
        for qid, q in self.before.per_query.items():
            other = self.after.per_query[qid]
            for metric in METRICS:
                x, y = getattr(q, metric), getattr(other, metric)
                out.write(f"{metric},{qid},{x!r},{y!r},{y - x!r}\n")
        if self.before.per_query:
            for metric, name in zip(METRICS, ("precision", "recall", "f_measure", "map")):
                x, y = self.before.mean(metric), self.after.mean(metric)
                out.write(f"{name},all,{x!r},{y!r},{y - x!r}\n")
        return out.getvalue()

    def curve_csv(self) -> str:
        a, b = self.labels
        out = io.StringIO()
        out.write(f"recall_level,{a},{b}\n")
        for level, x, y in zip(RECALL_LEVELS, self.before.mean_curve, self.after.mean_curve):
            out.write(f"{level:.1f},{x!r},{y!r}\n")
        return out.getvalue()

    def table(self) -> str:
        a, b = self.labels
        lines = [
            f"evaluated queries: {len(self.before.per_query)}"
            f"    excluded (no relevant documents): {len(self.before.excluded)}",
            f"{'metric':<12}{a:>12}{b:>12}{'delta':>12}",
        ]
        if self.before.per_query:
            for metric, name in zip(METRICS, ("precision", "recall", "F1", "MAP")):
                x, y = self.before.mean(metric), self.after.mean(metric)
                lines.append(f"{name:<12}{x:>12.4f}{y:>12.4f}{y - x:>+12.4f}")
            lines.append("")
            lines.append(f"{'recall':<12}{a:>12}{b:>12}{'delta':>12}")
            for level, x, y in zip(RECALL_LEVELS, self.before.mean_curve, self.after.mean_curve):
                lines.append(f"{level:<12.1f}{x:>12.4f}{y:>12.4f}{y - x:>+12.4f}")
        return "\n".join(lines) + "\n"


def compare_configs(run_a: RunResult, run_b: RunResult, qrels: Qrels,
                    depth: int | None = None, labels=("before", "after")) -> Comparison:
    if set(run_a.query_ids) != set(run_b.query_ids):
        only_a = sorted(set(run_a.query_ids) - set(run_b.query_ids))
        only_b = sorted(set(run_b.query_ids) - set(run_a.query_ids))
        raise ComparisonError(f"runs cover different queries (only in a: {only_a}, only in b: {only_b})")
    return Comparison(evaluate(run_a, qrels, depth), evaluate(run_b, qrels, depth), tuple(labels))
