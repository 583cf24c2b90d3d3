"""The vector store: (chunk, embedding) pairs with exact cosine top-k search.

Search is a deliberate linear scan — corpora here are desk scale, and an
exact scan keeps every ranking property provable (sorted by score
descending, ties broken by ascending chunk_id, results for k a prefix of
results for k+1).

Persistence format (versioned, line-delimited JSON, UTF-8, ``\\n`` line
endings, compact separators ``(",", ":")``, ``ensure_ascii=False``):

* line 1 — header object
  ``{"format":"docqna-index","version":1,"dim":...,"provider_kind":...,
  "chunk_params":{"chunk_size":...,"overlap":...}|null,"entries":N}``
* lines 2..N+1 — one entry object per chunk, in chunk_id order:
  ``{"chunk_id":...,"doc_id":...,"start":...,"end":...,"text":...,
  "vector":[...]}``

JSON floats round-trip float64 bitwise, so ``load(save(x))`` reproduces the
vectors exactly.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chunking import Chunk, ChunkParams
from .embedding import EmbeddingProviderConfig, embed_text
from .errors import (
    CorruptIndex,
    DimensionMismatch,
    EmptyIndex,
    InvalidParams,
)

FORMAT_NAME = "docqna-index"
FORMAT_VERSION = 1

_JSON_SEPARATORS = (",", ":")


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two vectors, clamped to ``[-1, 1]``.

    Defined as 0.0 when either vector has zero norm, so degenerate
    embeddings can never outrank real matches. Each vector is scaled by its
    largest magnitude before the norms are taken, so squaring can neither
    underflow nor overflow even for extreme inputs.
    """
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.ndim != 1 or vb.ndim != 1:
        raise InvalidParams("cosine_similarity expects 1-D vectors")
    if va.shape[0] != vb.shape[0]:
        raise DimensionMismatch(f"vector dims differ: {va.shape[0]} vs {vb.shape[0]}")
    max_a = float(np.max(np.abs(va))) if va.size else 0.0
    max_b = float(np.max(np.abs(vb))) if vb.size else 0.0
    if max_a == 0.0 or max_b == 0.0:
        return 0.0
    ua = va / max_a
    ub = vb / max_b
    norm_a = math.sqrt(float(np.dot(ua, ua)))
    norm_b = math.sqrt(float(np.dot(ub, ub)))
    return max(-1.0, min(1.0, float(np.dot(ua, ub)) / (norm_a * norm_b)))


@dataclass(frozen=True)
class IndexEntry:
    """One chunk together with its embedding vector."""

    chunk: Chunk
    vector: np.ndarray


@dataclass(frozen=True)
class ScoredChunk:
    """A chunk and its cosine similarity to some query vector."""

    chunk: Chunk
    score: float


@dataclass
class VectorIndex:
    """Immutable-after-build collection of index entries, ordered by chunk_id."""

    entries: list[IndexEntry]
    dim: int
    provider_kind: str = "local"
    chunk_params: ChunkParams | None = field(default=None)

    def __post_init__(self) -> None:
        ids = [e.chunk.chunk_id for e in self.entries]
        if ids != list(range(len(ids))):
            raise InvalidParams("index entries must have dense chunk_ids 0..n-1 in order")
        for e in self.entries:
            if e.vector.shape != (self.dim,):
                raise DimensionMismatch(
                    f"entry {e.chunk.chunk_id} has dim {e.vector.shape}, index dim is {self.dim}"
                )

    def __len__(self) -> int:
        return len(self.entries)

    def top_k(self, query_vec, k: int) -> list[ScoredChunk]:
        return top_k(self, query_vec, k)

    def save(self, path: str | Path) -> None:
        save_index(self, path)

    @classmethod
    def load(cls, path: str | Path) -> "VectorIndex":
        return load_index(path)


def build_index(chunks: list[Chunk], provider: EmbeddingProviderConfig | None = None,
                chunk_params: ChunkParams | None = None) -> VectorIndex:
    """Embed every chunk and assemble the index.

    Chunks must arrive densely id'd (0..n-1 in order); the chunking
    parameters, when known, are recorded as index metadata.
    """
    if not chunks:
        raise EmptyIndex("cannot build an index from zero chunks")
    if [c.chunk_id for c in chunks] != list(range(len(chunks))):
        raise InvalidParams("chunks must have dense chunk_ids 0..n-1 in order")
    provider = provider or EmbeddingProviderConfig()
    entries = [IndexEntry(chunk=c, vector=embed_text(c.text, provider)) for c in chunks]
    return VectorIndex(
        entries=entries,
        dim=provider.dim,
        provider_kind=provider.kind,
        chunk_params=chunk_params,
    )


def top_k(index: VectorIndex, query_vec, k: int) -> list[ScoredChunk]:
    """Exact scan: score every entry, return the ``min(k, n)`` best.

    Sorted by score descending; ties broken by ascending chunk_id so the
    ranking is fully deterministic.
    """
    if k < 1:
        raise InvalidParams(f"k must be >= 1, got {k}")
    if not index.entries:
        raise EmptyIndex("top_k on an empty index")
    qv = np.asarray(query_vec, dtype=np.float64)
    if qv.shape != (index.dim,):
        raise DimensionMismatch(f"query dim {qv.shape} does not match index dim {index.dim}")
    scored = [
        ScoredChunk(chunk=e.chunk, score=cosine_similarity(qv, e.vector))
        for e in index.entries
    ]
    scored.sort(key=lambda sc: (-sc.score, sc.chunk.chunk_id))
    return scored[:k]


def _header_dict(index: VectorIndex) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "dim": index.dim,
        "provider_kind": index.provider_kind,
        "chunk_params": (
            {"chunk_size": index.chunk_params.chunk_size, "overlap": index.chunk_params.overlap}
            if index.chunk_params is not None else None
        ),
        "entries": len(index.entries),
    }


def save_index(index: VectorIndex, path: str | Path) -> None:
    """Write the index in the documented line-delimited JSON format.

    The file is written to a temporary sibling and atomically renamed into
    place.
    """
    path = Path(path)
    lines = [json.dumps(_header_dict(index), separators=_JSON_SEPARATORS,
                        ensure_ascii=False, allow_nan=False)]
    for e in index.entries:
        lines.append(json.dumps(
            {
                "chunk_id": e.chunk.chunk_id,
                "doc_id": e.chunk.doc_id,
                "start": e.chunk.start,
                "end": e.chunk.end,
                "text": e.chunk.text,
                "vector": e.vector.tolist(),
            },
            separators=_JSON_SEPARATORS,
            ensure_ascii=False,
            allow_nan=False,
        ))
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def load_index(path: str | Path) -> VectorIndex:
    """Read an index file back, verifying format, counts, and dimensions.

    Raises:
        CorruptIndex: bad magic/version, unparseable lines, truncation,
            or inconsistent chunk metadata.
        DimensionMismatch: an entry vector whose length disagrees with the
            header dimension.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise CorruptIndex(f"{path}: empty index file")

    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CorruptIndex(f"{path}: unparseable header: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
        raise CorruptIndex(f"{path}: not a {FORMAT_NAME} file")
    if header.get("version") != FORMAT_VERSION:
        raise CorruptIndex(f"{path}: unsupported format version {header.get('version')!r}")

    try:
        dim = int(header["dim"])
        declared = int(header["entries"])
        provider_kind = str(header["provider_kind"])
        raw_params = header["chunk_params"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptIndex(f"{path}: malformed header: {exc}") from exc
    chunk_params = None
    if raw_params is not None:
        try:
            chunk_params = ChunkParams(
                chunk_size=raw_params["chunk_size"], overlap=raw_params["overlap"]
            )
        except (KeyError, TypeError, InvalidParams) as exc:
            raise CorruptIndex(f"{path}: malformed chunk_params: {exc}") from exc

    body = lines[1:]
    if len(body) != declared:
        raise CorruptIndex(
            f"{path}: header declares {declared} entries, file holds {len(body)}"
        )

    entries: list[IndexEntry] = []
    for lineno, line in enumerate(body, start=2):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorruptIndex(f"{path}:{lineno}: unparseable entry: {exc}") from exc
        try:
            vector = record["vector"]
            if not isinstance(vector, list):
                raise CorruptIndex(f"{path}:{lineno}: vector is not an array")
            if len(vector) != dim:
                raise DimensionMismatch(
                    f"{path}:{lineno}: entry has {len(vector)} values, header dim is {dim}"
                )
            chunk = Chunk(
                chunk_id=record["chunk_id"],
                doc_id=record["doc_id"],
                start=record["start"],
                end=record["end"],
                text=record["text"],
            )
        except DimensionMismatch:
            raise
        except (KeyError, TypeError, InvalidParams) as exc:
            raise CorruptIndex(f"{path}:{lineno}: malformed entry: {exc}") from exc
        try:
            vec = np.asarray(vector, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise CorruptIndex(f"{path}:{lineno}: non-numeric vector values") from exc
        if not np.all(np.isfinite(vec)):
            raise CorruptIndex(f"{path}:{lineno}: non-finite vector values")
        entries.append(IndexEntry(chunk=chunk, vector=vec))

    try:
        return VectorIndex(
            entries=entries,
            dim=dim,
            provider_kind=provider_kind,
            chunk_params=chunk_params,
        )
    except (InvalidParams, DimensionMismatch) as exc:
        raise CorruptIndex(f"{path}: inconsistent entries: {exc}") from exc
