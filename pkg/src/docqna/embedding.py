"""Text embedding providers.

Two providers share one contract (text in, L2-normalized float64 vector out):

* ``local`` — a deterministic hashed character-3-gram embedder. The text is
  lowercased, every contiguous 3-character substring is hashed with 64-bit
  FNV-1a (offset basis 0xcbf29ce484222325, prime 0x100000001b3, over the
  UTF-8 bytes of the 3-gram), and a weight of +1 or -1 (sign from bit 63 of
  the hash) is accumulated into bucket ``hash % dim``. The signed counts are
  L2-normalized unless all buckets are zero, in which case the zero vector
  is returned (texts shorter than 3 characters have no 3-grams). Runs
  offline and is bitwise reproducible across processes and platforms.

* ``remote`` — a thin HTTP client for an external embedding service:
  one POST with JSON body ``{"input": <text>}`` and bearer auth, expecting
  a JSON response that is either an array of numbers or an object with an
  ``"embedding"`` array. The vector is re-normalized to unit L2 norm.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import requests
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import (
    AuthFailure,
    DimensionMismatch,
    InvalidParams,
    ProviderUnavailable,
)

DEFAULT_DIM = 256
NGRAM_SIZE = 3

# Environment variable holding the remote provider's API key.
API_KEY_ENV = "DOCQNA_EMBED_KEY"

_FNV64_OFFSET = 0xCBF29CE484222325
_FNV64_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def _fnv1a_64(data: bytes) -> int:
    h = _FNV64_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV64_PRIME) & _MASK64
    return h


@dataclass(frozen=True)
class EmbeddingProviderConfig:
    """Which provider to use and how to reach it.

    ``api_key`` falls back to the ``DOCQNA_EMBED_KEY`` environment variable
    at call time when left unset.
    """

    kind: str = "local"
    dim: int = DEFAULT_DIM
    endpoint_url: str | None = None
    api_key: str | None = None
    timeout: float = 10.0

    def __post_init__(self) -> None:
        if self.kind not in ("local", "remote"):
            raise InvalidParams(f"unknown provider kind: {self.kind!r}")
        if self.dim <= 0:
            raise InvalidParams(f"dim must be > 0, got {self.dim}")
        if self.kind == "remote" and not self.endpoint_url:
            raise InvalidParams("remote provider requires endpoint_url")

    def resolved_api_key(self) -> str | None:
        return self.api_key if self.api_key is not None else os.environ.get(API_KEY_ENV)


def local_embed(text: str, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Embed ``text`` with the hashed character-3-gram scheme.

    Deterministic and pure: the signed bucket counts are integers, and the
    final normalization divides each count by the correctly-rounded square
    root of their exact sum of squares, so identical text always yields a
    bitwise-identical vector.
    """
    if dim <= 0:
        raise InvalidParams(f"dim must be > 0, got {dim}")
    lowered = text.lower()
    counts = [0] * dim
    for i in range(len(lowered) - NGRAM_SIZE + 1):
        h = _fnv1a_64(lowered[i:i + NGRAM_SIZE].encode("utf-8"))
        counts[h % dim] += 1 if (h >> 63) == 0 else -1
    sumsq = sum(c * c for c in counts)
    if sumsq == 0:
        return np.zeros(dim, dtype=np.float64)
    norm = math.sqrt(sumsq)
    return np.array([c / norm for c in counts], dtype=np.float64)


def remote_embed(text: str, cfg: EmbeddingProviderConfig) -> np.ndarray:
    """Fetch an embedding from the configured remote service.

    Raises:
        ProviderUnavailable: network failure, timeout, non-2xx status other
            than 401/403, or an unusable response body.
        AuthFailure: HTTP 401 or 403.
        DimensionMismatch: the service returned a vector whose length
            differs from ``cfg.dim``.
    """
    if cfg.kind != "remote":
        raise InvalidParams("remote_embed requires a remote provider config")
    headers = {}
    api_key = cfg.resolved_api_key()
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    try:
        resp = requests.post(
            cfg.endpoint_url,
            json={"input": text},
            headers=headers,
            timeout=cfg.timeout,
        )
    except requests.RequestException as exc:
        raise ProviderUnavailable(f"embedding request failed: {exc}") from exc

    if resp.status_code in (401, 403):
        raise AuthFailure(f"embedding provider rejected credentials (HTTP {resp.status_code})")
    if not 200 <= resp.status_code < 300:
        raise ProviderUnavailable(f"embedding provider returned HTTP {resp.status_code}")

    try:
        body = resp.json()
    except ValueError as exc:
        raise ProviderUnavailable("embedding response is not valid JSON") from exc

    values = body.get("embedding") if isinstance(body, dict) else body
    if not isinstance(values, list) or not all(isinstance(v, (int, float)) for v in values):
        raise ProviderUnavailable("embedding response contains no numeric array")
    if len(values) != cfg.dim:
        raise DimensionMismatch(
            f"embedding provider returned {len(values)} values, expected {cfg.dim}"
        )

    vec = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(vec)):
        raise ProviderUnavailable("embedding response contains non-finite values")
    norm = float(np.linalg.norm(vec))
    return vec / norm if norm > 0.0 else vec


def embed_text(text: str, provider: EmbeddingProviderConfig | None = None) -> np.ndarray:
    """Embed ``text`` with the configured provider (local by default)."""
    provider = provider or EmbeddingProviderConfig()
    if provider.kind == "local":
        return local_embed(text, provider.dim)
    return remote_embed(text, provider)


class HashedNgramEmbedder(BaseEstimator, TransformerMixin):
    """Stateless transformer producing hashed-3-gram embeddings.

    ``transform`` maps an iterable of strings to a float64 array of shape
    ``(n_texts, dim)`` with unit-norm rows (or zero rows for texts without
    3-grams), in the spirit of a hashing vectorizer: no fitting, no
    vocabulary, deterministic output.
    """

    def __init__(self, dim: int = DEFAULT_DIM):
        self.dim = dim

    def fit(self, X=None, y=None):
        if self.dim <= 0:
            raise InvalidParams(f"dim must be > 0, got {self.dim}")
        return self

    def transform(self, X: Iterable[str]) -> np.ndarray:
        return np.array([local_embed(text, self.dim) for text in X], dtype=np.float64)

    def embed(self, text: str) -> np.ndarray:
        return local_embed(text, self.dim)

    def provider_config(self) -> EmbeddingProviderConfig:
        return EmbeddingProviderConfig(kind="local", dim=self.dim)


class RemoteEmbedder(BaseEstimator, TransformerMixin):
    """Transformer mirror of :func:`remote_embed` for pipeline use."""

    def __init__(self, endpoint_url: str | None = None, dim: int = DEFAULT_DIM,
                 api_key: str | None = None, timeout: float = 10.0):
        self.endpoint_url = endpoint_url
        self.dim = dim
        self.api_key = api_key
        self.timeout = timeout

    def provider_config(self) -> EmbeddingProviderConfig:
        return EmbeddingProviderConfig(
            kind="remote",
            dim=self.dim,
            endpoint_url=self.endpoint_url,
            api_key=self.api_key,
            timeout=self.timeout,
        )

    def fit(self, X=None, y=None):
        self.provider_config()
        return self

    def transform(self, X: Iterable[str]) -> np.ndarray:
        cfg = self.provider_config()
        return np.array([remote_embed(text, cfg) for text in X], dtype=np.float64)

    def embed(self, text: str) -> np.ndarray:
        return remote_embed(text, self.provider_config())
