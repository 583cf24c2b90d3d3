"""Retrieval-augmented document question answering.

Pipeline: load a plain-text corpus, split it into overlapping chunks, embed
every chunk, store the vectors in an exact cosine-similarity index, and
answer queries by retrieving the best chunks and extracting (or generating)
an answer from them. The same chain is exposed over HTTP at ``POST /docqna``.
"""

from .chunking import (
    Chunk,
    ChunkParams,
    TextChunker,
    chunk_corpus,
    chunk_document,
)
from .corpus import Document, load_corpus
from .embedding import (
    EmbeddingProviderConfig,
    HashedNgramEmbedder,
    RemoteEmbedder,
    embed_text,
    local_embed,
    remote_embed,
)
from .engine import DocQAEngine
from .errors import (
    AuthFailure,
    CorruptIndex,
    DimensionMismatch,
    DocQAError,
    EmptyCorpus,
    EmptyIndex,
    EmptyQuery,
    GeneratorUnavailable,
    InvalidParams,
    MissingDirectory,
    ProviderUnavailable,
)
from .index import (
    IndexEntry,
    ScoredChunk,
    VectorIndex,
    build_index,
    cosine_similarity,
    load_index,
    save_index,
    top_k,
)
from .qa import (
    QAConfig,
    QAResult,
    assemble_context,
    extractive_answer,
    generative_answer,
    qa_chain,
)
from .service import FAILURE_BODY, ServiceConfig, ServiceState, build_state, run_server

__version__ = "0.1.0"

__all__ = [
    "AuthFailure",
    "Chunk",
    "ChunkParams",
    "CorruptIndex",
    "DimensionMismatch",
    "DocQAEngine",
    "DocQAError",
    "Document",
    "EmbeddingProviderConfig",
    "EmptyCorpus",
    "EmptyIndex",
    "EmptyQuery",
    "FAILURE_BODY",
    "GeneratorUnavailable",
    "HashedNgramEmbedder",
    "IndexEntry",
    "InvalidParams",
    "MissingDirectory",
    "ProviderUnavailable",
    "QAConfig",
    "QAResult",
    "RemoteEmbedder",
    "ScoredChunk",
    "ServiceConfig",
    "ServiceState",
    "TextChunker",
    "VectorIndex",
    "assemble_context",
    "build_index",
    "build_state",
    "chunk_corpus",
    "chunk_document",
    "cosine_similarity",
    "embed_text",
    "extractive_answer",
    "generative_answer",
    "load_corpus",
    "load_index",
    "local_embed",
    "qa_chain",
    "remote_embed",
    "run_server",
    "save_index",
    "top_k",
]
