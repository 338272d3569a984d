"""Query scoring, top-k ranking and TREC run output.

A document's score is the sum of the weights of the query terms it contains.
Terms absent from the query, or from the corpus, contribute nothing.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from rsjir.errors import CorpusFormatError, DegenerateDocFreq
from rsjir.index import InvertedIndex, term_stats, tokenize
from rsjir.schemes import WeightingScheme


@dataclass(frozen=True)
class Query:
    query_id: str
    raw_text: str
    terms: tuple[str, ...]

    @classmethod
    def parse(cls, query_id: str, raw_text: str) -> "Query":
        # Sorted so per-document sums always add in the same order.
        return cls(query_id, raw_text, tuple(sorted(set(tokenize(raw_text)))))


@dataclass(frozen=True)
class RankedEntry:
    doc_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class RankedList:
    query_id: str
    entries: tuple[RankedEntry, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def term_weight(index: InvertedIndex, term: str, scheme: WeightingScheme) -> float:
    try:
        return scheme.weight(term_stats(index, term))
    except DegenerateDocFreq as exc:
        raise DegenerateDocFreq(f"term {term!r}: {exc}", term=term) from None


def score_document(index: InvertedIndex, doc_ordinal: int, query: Query, scheme: WeightingScheme) -> float:
    score = 0.0
    for term in query.terms:
        if doc_ordinal in index.posting(term):
            score += term_weight(index, term, scheme)
    return score


def _ranked(query_id, scored, k):
    top = heapq.nsmallest(k, scored, key=lambda item: (-item[1], item[0]))
    return RankedList(
        query_id,
        tuple(RankedEntry(doc_id, score, i) for i, (doc_id, score) in enumerate(top, 1)),
    )


def rank(index: InvertedIndex, query: Query, scheme: WeightingScheme, k: int = 10) -> RankedList:
    """Top-k documents with positive score, by score desc then doc_id asc."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    accumulators: dict[int, float] = {}
    for term in query.terms:
        posting = index.posting(term)
        if not posting.df:
            continue
        w = term_weight(index, term, scheme)
        for ordinal in posting.doc_ordinals:
            accumulators[ordinal] = accumulators.get(ordinal, 0.0) + w
    scored = [(index.doc_id(o), s) for o, s in accumulators.items() if s > 0.0]
    return _ranked(query.query_id, scored, k)


def rank_exhaustive(index: InvertedIndex, query: Query, scheme: WeightingScheme, k: int = 10) -> RankedList:
    """Score every document one by one, then sort; the reference for :func:`rank`."""
    scored = []
    for ordinal in range(index.corpus_size):
        s = score_document(index, ordinal, query, scheme)
        if s > 0.0:
            scored.append((index.doc_id(ordinal), s))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return RankedList(
        query.query_id,
        tuple(RankedEntry(d, s, i) for i, (d, s) in enumerate(scored[:k], 1)),
    )


def format_run(ranked: Iterable[RankedList], run_tag: str) -> str:
    lines = []
    for rl in ranked:
        for e in rl.entries:
            lines.append(f"{rl.query_id} Q0 {e.doc_id} {e.rank} {e.score:.6f} {run_tag}\n")
    return "".join(lines)


def write_run(ranked: Sequence[RankedList], run_tag: str, destination) -> None:
    """Write ``<qid> Q0 <doc_id> <rank> <score> <tag>`` lines to a path or stream."""
    text = format_run(ranked, run_tag)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


def read_queries(source: Path | str | TextIO) -> list[Query]:
    """Read ``<query_id>\\t<text>`` lines, skipping blank ones."""
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = Path(source).read_text(encoding="utf-8")
    queries = []
    seen = set()
    for line_no, line in enumerate(raw.splitlines(), 1):
        if not line.strip():
            continue
        qid, sep, text = line.partition("\t")
        qid = qid.strip()
        if not sep or not qid or any(ch.isspace() for ch in qid):
            raise CorpusFormatError("expected '<query_id>\\t<query text>'", line_no)
        if qid in seen:
            raise CorpusFormatError(f"duplicate query id {qid!r}", line_no)
        seen.add(qid)
        queries.append(Query.parse(qid, text))
    return queries
