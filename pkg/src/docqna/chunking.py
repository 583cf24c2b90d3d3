"""Sliding-window text chunking.

Documents are split into character windows of ``chunk_size`` advancing by
``chunk_size - overlap``; the final window is clamped to the document end.
Boundaries are purely character-based (no word or sentence awareness), which
keeps the invariants simple: every character lands in at least one chunk,
consecutive chunks of a document overlap by exactly ``overlap`` characters,
and the number of chunks is ``1`` if ``len <= chunk_size`` else
``1 + ceil((len - chunk_size) / step)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .corpus import Document
from .errors import InvalidParams

DEFAULT_CHUNK_SIZE = 1000
DEFAULT_OVERLAP = 200


@dataclass(frozen=True)
class ChunkParams:
    """Window width and the characters shared between consecutive windows."""

    chunk_size: int = DEFAULT_CHUNK_SIZE
    overlap: int = DEFAULT_OVERLAP

    def __post_init__(self) -> None:
        if self.chunk_size <= 0:
            raise InvalidParams(f"chunk_size must be > 0, got {self.chunk_size}")
        if not 0 <= self.overlap < self.chunk_size:
            raise InvalidParams(
                f"overlap must satisfy 0 <= overlap < chunk_size, "
                f"got overlap={self.overlap}, chunk_size={self.chunk_size}"
            )

    @property
    def step(self) -> int:
        return self.chunk_size - self.overlap


@dataclass(frozen=True)
class Chunk:
    """A contiguous span ``[start, end)`` of a parent document.

    ``text`` equals the parent substring exactly; ``chunk_id`` is dense from
    0 across the whole corpus in load order.
    """

    chunk_id: int
    doc_id: str
    start: int
    end: int
    text: str

    def __post_init__(self) -> None:
        if not 0 <= self.start < self.end:
            raise InvalidParams(
                f"chunk span [{self.start}, {self.end}) is not a valid interval"
            )
        if len(self.text) != self.end - self.start:
            raise InvalidParams("chunk text length does not match its span")


def window_spans(length: int, params: ChunkParams) -> list[tuple[int, int]]:
    """Return the ``(start, end)`` spans of every window over ``length`` chars."""
    if length <= 0:
        raise InvalidParams("length must be positive")
    spans: list[tuple[int, int]] = []
    start = 0
    while True:
        end = min(start + params.chunk_size, length)
        spans.append((start, end))
        if start + params.chunk_size >= length:
            return spans
        start += params.step


def chunk_document(doc: Document, params: ChunkParams | None = None,
                   start_id: int = 0) -> list[Chunk]:
    """Split one document into overlapping chunks.

    Chunk ids are assigned consecutively from ``start_id`` so that corpus
    level chunking can keep ids dense across documents.
    """
    params = params or ChunkParams()
    return [
        Chunk(
            chunk_id=start_id + i,
            doc_id=doc.doc_id,
            start=s,
            end=e,
            text=doc.text[s:e],
        )
        for i, (s, e) in enumerate(window_spans(len(doc.text), params))
    ]


def chunk_corpus(docs: Sequence[Document], params: ChunkParams | None = None) -> list[Chunk]:
    """Chunk every document in corpus order, with chunk_id dense from 0."""
    if not docs:
        raise InvalidParams("cannot chunk an empty document list")
    params = params or ChunkParams()
    chunks: list[Chunk] = []
    for doc in docs:
        chunks.extend(chunk_document(doc, params, start_id=len(chunks)))
    return chunks


class TextChunker(BaseEstimator, TransformerMixin):
    """Stateless transformer mapping documents to overlapping chunks.

    Accepts a sequence of :class:`Document` or of plain strings (strings are
    wrapped as synthetic documents ``text_0``, ``text_1``, ...). ``fit`` only
    validates parameters, so the chunker composes with sklearn pipelines.
    """

    def __init__(self, chunk_size: int = DEFAULT_CHUNK_SIZE,
                 overlap: int = DEFAULT_OVERLAP):
        self.chunk_size = chunk_size
        self.overlap = overlap

    def _params(self) -> ChunkParams:
        return ChunkParams(chunk_size=self.chunk_size, overlap=self.overlap)

    def fit(self, X=None, y=None):
        self._params()
        return self

    def transform(self, X: Iterable[Document | str]) -> list[Chunk]:
        docs = [
            item if isinstance(item, Document)
            else Document(doc_id=f"text_{i}", text=item)
            for i, item in enumerate(X)
        ]
        return chunk_corpus(docs, self._params())
