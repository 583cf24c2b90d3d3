"""The query path: embed, retrieve, assemble context, answer.

Two answerers sit behind one interface. The default is a deterministic
extractive answerer that returns the best sentences of the top-ranked chunk,
so the whole pipeline runs offline and reproducibly. A generative answerer
can be configured instead; it posts the query and assembled context to an
external endpoint and falls back to the extractive answer whenever that
endpoint is unreachable or returns an unusable answer.

Context assembly format: each retrieved chunk is rendered as a block

    [<doc_id> <chunk_id> <score to 4 decimal places>]
    <chunk text>

and blocks are joined by one blank line (``"\\n\\n"``). Blocks are added in
rank order while the assembled string stays within ``context_budget``
characters; the rank-1 chunk is always included, hard-truncated to exactly
``context_budget`` characters if its block alone is too long.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import requests

from .embedding import EmbeddingProviderConfig, embed_text
from .errors import EmptyQuery, GeneratorUnavailable, InvalidParams
from .index import ScoredChunk, VectorIndex, top_k

DEFAULT_TOP_K = 4
DEFAULT_CONTEXT_BUDGET = 6000
MAX_ANSWER_SENTENCES = 3

_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+")
_WORD = re.compile(r"\w+")


@dataclass(frozen=True)
class QAConfig:
    """Retrieval count, context size, and answerer selection."""

    top_k: int = DEFAULT_TOP_K
    context_budget: int = DEFAULT_CONTEXT_BUDGET
    answerer: str = "extractive"
    generator_endpoint: str | None = None
    generator_timeout: float = 10.0

    def __post_init__(self) -> None:
        if self.top_k < 1:
            raise InvalidParams(f"top_k must be >= 1, got {self.top_k}")
        if self.context_budget < 1:
            raise InvalidParams(f"context_budget must be >= 1, got {self.context_budget}")
        if self.answerer not in ("extractive", "generative"):
            raise InvalidParams(f"unknown answerer: {self.answerer!r}")
        if self.answerer == "generative" and not self.generator_endpoint:
            raise InvalidParams("generative answerer requires generator_endpoint")


@dataclass(frozen=True)
class QAResult:
    """Answer text plus the retrieved chunks that support it, in rank order."""

    answer: str
    supporting: list[ScoredChunk] = field(default_factory=list)
    answerer_used: str = "extractive"


def _source_line(sc: ScoredChunk) -> str:
    return f"[{sc.chunk.doc_id} {sc.chunk.chunk_id} {sc.score:.4f}]"


def assemble_context(ranked: list[ScoredChunk], budget: int) -> str:
    """Concatenate ranked chunk blocks without exceeding ``budget`` characters.

    Stops before the first block that would push the assembled string over
    budget. The rank-1 block is always present; if it alone exceeds the
    budget it is truncated to exactly ``budget`` characters.
    """
    if not ranked:
        raise InvalidParams("assemble_context requires at least one ranked chunk")
    if budget < 1:
        raise InvalidParams(f"budget must be >= 1, got {budget}")

    blocks = [f"{_source_line(sc)}\n{sc.chunk.text}" for sc in ranked]
    context = blocks[0]
    if len(context) > budget:
        return context[:budget]
    for block in blocks[1:]:
        candidate = f"{context}\n\n{block}"
        if len(candidate) > budget:
            break
        context = candidate
    return context


def split_sentences(text: str) -> list[str]:
    """Naive sentence split: break after ``.``, ``!`` or ``?`` followed by whitespace."""
    return [s for s in _SENTENCE_BOUNDARY.split(text.strip()) if s]


def _words(text: str) -> set[str]:
    return set(_WORD.findall(text.lower()))


def extractive_answer(query: str, ranked: list[ScoredChunk]) -> str:
    """Return the best sentences of the rank-1 chunk, verbatim.

    Sentences are scored by how many distinct lowercase words they share
    with the query; the top three (ties going to the earlier sentence) are
    joined by single spaces in document order. When no sentence shares a
    word with the query, the chunk's first three sentences are returned.
    """
    if not ranked:
        raise InvalidParams("extractive_answer requires at least one ranked chunk")
    text = ranked[0].chunk.text
    sentences = split_sentences(text)
    if not sentences:
        return text

    query_words = _words(query)
    overlaps = [len(query_words & _words(s)) for s in sentences]
    if all(n == 0 for n in overlaps):
        return " ".join(sentences[:MAX_ANSWER_SENTENCES])

    by_score = sorted(range(len(sentences)), key=lambda i: (-overlaps[i], i))
    chosen = sorted(i for i in by_score[:MAX_ANSWER_SENTENCES] if overlaps[i] > 0)
    return " ".join(sentences[i] for i in chosen)


def generative_answer(query: str, context: str, cfg: QAConfig) -> str:
    """Fetch an answer from the configured generator endpoint.

    One POST with JSON body ``{"query": ..., "context": ...}``; the response
    must be JSON with a non-empty string under ``"answer"``, returned
    verbatim.

    Raises:
        GeneratorUnavailable: network/timeout failure, non-2xx status, or a
            missing/empty answer string.
    """
    if cfg.answerer != "generative" or not cfg.generator_endpoint:
        raise InvalidParams("generative_answer requires a generative QAConfig")
    try:
        resp = requests.post(
            cfg.generator_endpoint,
            json={"query": query, "context": context},
            timeout=cfg.generator_timeout,
        )
    except requests.RequestException as exc:
        raise GeneratorUnavailable(f"generator request failed: {exc}") from exc
    if not 200 <= resp.status_code < 300:
        raise GeneratorUnavailable(f"generator returned HTTP {resp.status_code}")
    try:
        body = resp.json()
    except ValueError as exc:
        raise GeneratorUnavailable("generator response is not valid JSON") from exc
    answer = body.get("answer") if isinstance(body, dict) else None
    if not isinstance(answer, str) or answer == "":
        raise GeneratorUnavailable("generator returned no usable answer")
    return answer


def qa_chain(query: str, index: VectorIndex, cfg: QAConfig | None = None,
             provider: EmbeddingProviderConfig | None = None) -> QAResult:
    """Answer one query against the index.

    The query is trimmed, embedded, and matched against every entry; the
    retrieved chunks are handed to the configured answerer. In generative
    mode any :class:`GeneratorUnavailable` failure falls back to the
    extractive answerer, so the chain never errors solely because the
    generator is down.

    Raises:
        EmptyQuery: the query is empty after trimming whitespace.
    """
    cfg = cfg or QAConfig()
    provider = provider or EmbeddingProviderConfig()
    trimmed = query.strip()
    if not trimmed:
        raise EmptyQuery("query is empty after trimming whitespace")

    query_vec = embed_text(trimmed, provider)
    ranked = top_k(index, query_vec, cfg.top_k)

    if cfg.answerer == "generative":
        context = assemble_context(ranked, cfg.context_budget)
        try:
            return QAResult(
                answer=generative_answer(trimmed, context, cfg),
                supporting=ranked,
                answerer_used="generative",
            )
        except GeneratorUnavailable:
            pass

    return QAResult(
        answer=extractive_answer(trimmed, ranked),
        supporting=ranked,
        answerer_used="extractive",
    )
