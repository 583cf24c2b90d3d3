"""End-to-end document QA engine with an sklearn-style surface.

``fit`` ingests a corpus (a data directory or an in-memory document list),
chunks it, embeds every chunk, and builds the vector index; ``answer`` runs
one query through the chain and ``predict`` maps a sequence of queries to
answer strings. Being a ``BaseEstimator``, the engine exposes its knobs via
``get_params``/``set_params`` and composes with the wider ecosystem.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .chunking import ChunkParams, chunk_corpus
from .corpus import Document, load_corpus
from .embedding import EmbeddingProviderConfig
from .errors import InvalidParams
from .index import VectorIndex, build_index, load_index
from .qa import QAConfig, QAResult, qa_chain

# Environment variable naming the remote embedding endpoint; CLI flags win
# over it, it wins over the constructor default.
EMBED_ENDPOINT_ENV = "DOCQNA_EMBED_ENDPOINT"


class DocQAEngine(BaseEstimator):
    """Corpus in, answers out.

    Parameters mirror the pipeline stages: chunking (``chunk_size``,
    ``overlap``), embedding (``provider``, ``dim``, ``embed_endpoint``,
    ``timeout``), retrieval (``top_k``), and answering (``answerer``,
    ``context_budget``, ``generator_endpoint``).

    Fitted attributes: ``documents_``, ``chunks_``, ``index_``.
    """

    def __init__(self, chunk_size: int = 1000, overlap: int = 200,
                 dim: int = 256, top_k: int = 4, context_budget: int = 6000,
                 answerer: str = "extractive", provider: str = "local",
                 embed_endpoint: str | None = None,
                 generator_endpoint: str | None = None,
                 timeout: float = 10.0):
        self.chunk_size = chunk_size
        self.overlap = overlap
        self.dim = dim
        self.top_k = top_k
        self.context_budget = context_budget
        self.answerer = answerer
        self.provider = provider
        self.embed_endpoint = embed_endpoint
        self.generator_endpoint = generator_endpoint
        self.timeout = timeout

    # -- configuration assembly ------------------------------------------

    def chunk_params(self) -> ChunkParams:
        return ChunkParams(chunk_size=self.chunk_size, overlap=self.overlap)

    def provider_config(self) -> EmbeddingProviderConfig:
        endpoint = self.embed_endpoint or os.environ.get(EMBED_ENDPOINT_ENV)
        return EmbeddingProviderConfig(
            kind=self.provider,
            dim=self.dim,
            endpoint_url=endpoint,
            timeout=self.timeout,
        )

    def qa_config(self) -> QAConfig:
        if self.context_budget < self.chunk_size:
            raise InvalidParams(
                f"context_budget ({self.context_budget}) must be >= "
                f"chunk_size ({self.chunk_size})"
            )
        return QAConfig(
            top_k=self.top_k,
            context_budget=self.context_budget,
            answerer=self.answerer,
            generator_endpoint=self.generator_endpoint,
            generator_timeout=self.timeout,
        )

    def _validate(self) -> None:
        self.chunk_params()
        self.provider_config()
        self.qa_config()

    # -- fitting -----------------------------------------------------------

    def fit(self, X: str | Path | Sequence[Document], y=None) -> "DocQAEngine":
        """Ingest a corpus and build the vector index.

        ``X`` is either a corpus directory path or a sequence of
        :class:`Document`.
        """
        self._validate()
        if isinstance(X, (str, Path)):
            docs = load_corpus(X)
        else:
            docs = list(X)
            if not all(isinstance(d, Document) for d in docs):
                raise InvalidParams("fit expects a directory path or Document objects")
        params = self.chunk_params()
        self.documents_ = docs
        self.chunks_ = chunk_corpus(docs, params)
        self.index_ = build_index(self.chunks_, self.provider_config(), params)
        return self

    @classmethod
    def from_index(cls, index: VectorIndex | str | Path, **overrides) -> "DocQAEngine":
        """Wrap a prebuilt (or saved) index in a ready-to-answer engine.

        Chunking and embedding parameters recorded in the index metadata
        seed the engine; keyword overrides win.
        """
        if not isinstance(index, VectorIndex):
            index = load_index(index)
        params: dict = {"dim": index.dim, "provider": index.provider_kind}
        if index.chunk_params is not None:
            params["chunk_size"] = index.chunk_params.chunk_size
            params["overlap"] = index.chunk_params.overlap
            params["context_budget"] = max(6000, index.chunk_params.chunk_size)
        params.update(overrides)
        engine = cls(**params)
        engine._validate()
        engine.documents_ = []
        engine.chunks_ = [e.chunk for e in index.entries]
        engine.index_ = index
        return engine

    # -- answering ---------------------------------------------------------

    def answer(self, query: str) -> QAResult:
        """Run one query through the retrieval chain."""
        check_is_fitted(self, "index_")
        return qa_chain(query, self.index_, self.qa_config(), self.provider_config())

    def predict(self, X: Iterable[str]) -> list[str]:
        """Answer a batch of queries, returning only the answer strings."""
        return [self.answer(q).answer for q in X]

    def save_index(self, path: str | Path) -> None:
        check_is_fitted(self, "index_")
        self.index_.save(path)
