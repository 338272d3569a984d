"""Tokenization, inverted-index construction and the on-disk index format.

On disk an index is a versioned, line-oriented UTF-8 text file::

    RSJIDX 1
    N 2
    D 0 d1
    D 1 d2
    T a 1 0
    T b 2 0,1
    T c 1 1

Documents appear in ordinal order and terms in lexicographic order, so the
same corpus always serializes to the same bytes.
"""

from __future__ import annotations

import json
import re
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from rsjir.errors import (
    CorpusFormatError,
    DuplicateDocId,
    MalformedIndexFile,
    VersionMismatch,
)
from rsjir.weighting import TermStats

FORMAT_MAGIC = "RSJIDX"
FORMAT_VERSION = "1"

_TOKEN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on every non-alphanumeric character.

    >>> tokenize("The IDF, revisited!")
    ['the', 'idf', 'revisited']
    """
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str

    def __post_init__(self):
        if not self.doc_id or self.doc_id != self.doc_id.strip() or any(
            ch in self.doc_id for ch in "\t\r\n"
        ):
            raise ValueError(
                f"doc_id must be nonempty, without surrounding whitespace or line breaks: {self.doc_id!r}"
            )


@dataclass(frozen=True)
class PostingList:
    term: str
    doc_ordinals: tuple[int, ...]

    @property
    def df(self) -> int:
        return len(self.doc_ordinals)

    def __contains__(self, ordinal) -> bool:
        i = bisect_left(self.doc_ordinals, ordinal)
        return i < len(self.doc_ordinals) and self.doc_ordinals[i] == ordinal


class InvertedIndex:
    """Immutable term -> posting-list map plus the document-id table."""

    def __init__(self, doc_ids: Sequence[str], postings: Mapping[str, Sequence[int]]):
        self._doc_ids = tuple(doc_ids)
        self._postings = {
            term: PostingList(term, tuple(postings[term])) for term in sorted(postings)
        }

    @property
    def corpus_size(self) -> int:
        return len(self._doc_ids)

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return self._doc_ids

    @property
    def vocabulary_size(self) -> int:
        return len(self._postings)

    def terms(self) -> list[str]:
        return list(self._postings)

    def posting(self, term: str) -> PostingList:
        return self._postings.get(term) or PostingList(term, ())

    def postings(self) -> Iterable[PostingList]:
        return self._postings.values()

    def df(self, term: str) -> int:
        pl = self._postings.get(term)
        return pl.df if pl else 0

    def doc_id(self, ordinal: int) -> str:
        return self._doc_ids[ordinal]

    def __eq__(self, other):
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return self._doc_ids == other._doc_ids and list(self._postings.items()) == list(
            other._postings.items()
        )

    def __repr__(self):
        return f"InvertedIndex(N={self.corpus_size}, terms={self.vocabulary_size})"


def build_index(docs: Iterable[Document]) -> InvertedIndex:
    """Build an index; ordinals follow input order, repeats within a doc count once."""
    doc_ids: list[str] = []
    seen: set[str] = set()
    postings: dict[str, list[int]] = {}
    for ordinal, doc in enumerate(docs):
        if doc.doc_id in seen:
            raise DuplicateDocId(f"duplicate doc_id {doc.doc_id!r}")
        seen.add(doc.doc_id)
        doc_ids.append(doc.doc_id)
        for term in set(tokenize(doc.text)):
            postings.setdefault(term, []).append(ordinal)
    return InvertedIndex(doc_ids, postings)


def term_stats(index: InvertedIndex, term: str) -> TermStats:
    """(df, N) for a term; unseen terms get df = 0."""
    return TermStats(index.df(term), index.corpus_size)


def dumps_index(index: InvertedIndex) -> str:
    lines = [f"{FORMAT_MAGIC} {FORMAT_VERSION}", f"N {index.corpus_size}"]
    lines.extend(f"D {i} {doc_id}" for i, doc_id in enumerate(index.doc_ids))
    for pl in index.postings():
        lines.append(f"T {pl.term} {pl.df} {','.join(map(str, pl.doc_ordinals))}")
    return "\n".join(lines) + "\n"


def save_index(index: InvertedIndex, destination) -> None:
    Path(destination).write_text(dumps_index(index), encoding="utf-8")


def _int_field(text, what, line_no):
    if not (text.isascii() and text.isdigit()):
        raise MalformedIndexFile(f"{what} must be a nonnegative integer, got {text!r}", line_no)
    return int(text)


def loads_index(text: str) -> InvertedIndex:
    if not text:
        raise MalformedIndexFile("empty index file", 1)
    lines = text.split("\n")
    if lines[-1] != "":
        raise MalformedIndexFile("file does not end with a newline (truncated?)", len(lines))
    lines.pop()

    header = lines[0].split(" ")
    if len(header) != 2 or header[0] != FORMAT_MAGIC:
        raise MalformedIndexFile(f"expected '{FORMAT_MAGIC} <version>' header", 1)
    if header[1] != FORMAT_VERSION:
        raise VersionMismatch(
            f"unsupported index format version {header[1]!r} (this build reads {FORMAT_VERSION})"
        )
    if len(lines) < 2:
        raise MalformedIndexFile("missing 'N <corpus_size>' line", 2)
    n_line = lines[1].split(" ")
    if len(n_line) != 2 or n_line[0] != "N":
        raise MalformedIndexFile("expected 'N <corpus_size>'", 2)
    corpus_size = _int_field(n_line[1], "corpus size", 2)

    doc_ids = []
    pos = 2
    for ordinal in range(corpus_size):
        line_no = pos + 1
        if pos >= len(lines):
            raise MalformedIndexFile(f"expected {corpus_size} document lines, found {ordinal}", line_no)
        parts = lines[pos].split(" ", 2)
        if len(parts) != 3 or parts[0] != "D":
            raise MalformedIndexFile("expected 'D <ordinal> <doc_id>'", line_no)
        if _int_field(parts[1], "document ordinal", line_no) != ordinal:
            raise MalformedIndexFile(f"document ordinal out of order, expected {ordinal}", line_no)
        if not parts[2] or parts[2] in doc_ids:
            raise MalformedIndexFile(f"empty or duplicate doc_id {parts[2]!r}", line_no)
        doc_ids.append(parts[2])
        pos += 1

    postings: dict[str, list[int]] = {}
    previous_term = None
    for pos in range(pos, len(lines)):
        line_no = pos + 1
        parts = lines[pos].split(" ")
        if len(parts) != 4 or parts[0] != "T":
            raise MalformedIndexFile("expected 'T <term> <df> <ordinals>'", line_no)
        term = parts[1]
        if not term or (previous_term is not None and term <= previous_term):
            raise MalformedIndexFile(f"term {term!r} empty or not in lexicographic order", line_no)
        df = _int_field(parts[2], "df", line_no)
        ordinals = [_int_field(o, "ordinal", line_no) for o in parts[3].split(",")] if parts[3] else []
        if len(ordinals) != df or df == 0:
            raise MalformedIndexFile(f"df {df} does not match {len(ordinals)} ordinals", line_no)
        if any(b <= a for a, b in zip(ordinals, ordinals[1:])):
            raise MalformedIndexFile("ordinals must be strictly increasing", line_no)
        if ordinals[-1] >= corpus_size:
            raise MalformedIndexFile(f"ordinal {ordinals[-1]} >= corpus size {corpus_size}", line_no)
        postings[term] = ordinals
        previous_term = term
    return InvertedIndex(doc_ids, postings)


def load_index(source) -> InvertedIndex:
    try:
        text = Path(source).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedIndexFile(f"not UTF-8 text: {exc}") from None
    return loads_index(text)


def read_corpus(path) -> list[Document]:
    """Read a ``.tsv`` (``id<TAB>text``) or ``.jsonl`` (``{"id", "text"}``) corpus."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in (".tsv", ".jsonl"):
        raise CorpusFormatError(f"unsupported corpus extension {path.suffix!r}; use .tsv or .jsonl")
    docs = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            if suffix == ".tsv":
                doc_id, sep, text = line.partition("\t")
                if not sep:
                    raise CorpusFormatError("expected '<doc_id>\\t<text>'", line_no)
            else:
                try:
                    obj = json.loads(line)
                    doc_id, text = obj["id"], obj["text"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise CorpusFormatError(f"bad JSON document: {exc}", line_no) from None
                if not isinstance(doc_id, str) or not isinstance(text, str):
                    raise CorpusFormatError("'id' and 'text' must be strings", line_no)
            try:
                docs.append(Document(doc_id, text))
            except ValueError as exc:
                raise CorpusFormatError(str(exc), line_no) from None
    return docs
