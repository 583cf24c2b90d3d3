import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from docqna import (
    AuthFailure,
    DimensionMismatch,
    EmbeddingProviderConfig,
    HashedNgramEmbedder,
    InvalidParams,
    ProviderUnavailable,
    RemoteEmbedder,
    embed_text,
    local_embed,
    remote_embed,
)
from conftest import DATA_DIR
from oracles import cosine_plain, hashed_ngram_embed


class TestLocalEmbed:
    def test_deterministic_bitwise(self):
        first = local_embed("abc")
        second = local_embed("abc")
        assert first.tolist() == second.tolist()

    def test_unit_norm(self):
        vec = local_embed("what does the document tell us?")
        assert abs(np.linalg.norm(vec) - 1.0) <= 1e-9

    def test_empty_text_zero_vector(self):
        vec = embed_text("")
        assert vec.shape == (256,)
        assert not vec.any()

    def test_too_short_for_ngrams_zero_vector(self):
        assert not local_embed("aa", 256).any()

    def test_self_cosine_is_one(self):
        vec = local_embed("any text with enough characters")
        assert abs(cosine_plain(vec.tolist(), vec.tolist()) - 1.0) <= 1e-9

    def test_case_insensitive(self):
        assert local_embed("ABC").tolist() == local_embed("abc").tolist()

    def test_bag_of_ngrams_semantics(self):
        # "abab" and "baba" have the same 3-gram multiset {aba, bab}
        assert local_embed("abab").tolist() == local_embed("baba").tolist()

    def test_golden_vector(self):
        # Reference vector generated by the independent oracle; bitwise
        # equality guards against any drift in constants or accumulation.
        golden = json.loads((DATA_DIR / "golden_embedding.json").read_text())
        vec = local_embed(golden["text"], golden["dim"])
        assert vec.tolist() == golden["vector"]

    def test_matches_oracle_reimplementation(self):
        for text in ["", "ab", "abc", "Hello, World!", "ünïcode tèxt"]:
            assert local_embed(text, 64).tolist() == hashed_ngram_embed(text, 64)

    def test_related_text_scores_higher(self):
        # Ordering computed independently with the oracle embedder.
        base = hashed_ngram_embed("elevator scheduling", 256)
        related = hashed_ngram_embed("elevator scheduling algorithms", 256)
        unrelated = hashed_ngram_embed("constitutional amendment", 256)
        assert cosine_plain(base, related) > cosine_plain(base, unrelated)

        prod_base = local_embed("elevator scheduling", 256)
        prod_related = local_embed("elevator scheduling algorithms", 256)
        prod_unrelated = local_embed("constitutional amendment", 256)
        assert (cosine_plain(prod_base.tolist(), prod_related.tolist())
                > cosine_plain(prod_base.tolist(), prod_unrelated.tolist()))

    def test_invalid_dim(self):
        with pytest.raises(InvalidParams):
            local_embed("text", 0)

    @settings(max_examples=100, deadline=None)
    @given(text=st.text(max_size=200), dim=st.sampled_from([16, 64, 256]))
    def test_norm_is_unit_or_zero(self, text, dim):
        vec = local_embed(text, dim)
        norm = np.linalg.norm(vec)
        assert norm == 0.0 or abs(norm - 1.0) <= 1e-9

    @settings(max_examples=100, deadline=None)
    @given(text=st.text(max_size=200))
    def test_lowercase_invariance(self, text):
        assert local_embed(text, 64).tolist() == local_embed(text.lower(), 64).tolist()


class TestProviderConfig:
    def test_remote_requires_endpoint(self):
        with pytest.raises(InvalidParams):
            EmbeddingProviderConfig(kind="remote")

    def test_unknown_kind(self):
        with pytest.raises(InvalidParams):
            EmbeddingProviderConfig(kind="cloud")

    def test_bad_dim(self):
        with pytest.raises(InvalidParams):
            EmbeddingProviderConfig(dim=-1)

    def test_api_key_from_environment(self, monkeypatch):
        monkeypatch.setenv("DOCQNA_EMBED_KEY", "sekret")
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url="http://x", dim=2)
        assert cfg.resolved_api_key() == "sekret"

    def test_explicit_api_key_wins(self, monkeypatch):
        monkeypatch.setenv("DOCQNA_EMBED_KEY", "fromenv")
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url="http://x",
                                      dim=2, api_key="explicit")
        assert cfg.resolved_api_key() == "explicit"


class TestRemoteEmbed:
    def test_three_four_five_normalization(self, http_stub, monkeypatch):
        monkeypatch.setenv("DOCQNA_EMBED_KEY", "k123")
        url, received = http_stub(payload=[3.0, 4.0])
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url=url, dim=2)
        vec = remote_embed("hello", cfg)
        assert vec.tolist() == [0.6, 0.8]
        assert json.loads(received[0]["body"]) == {"input": "hello"}
        assert received[0]["headers"]["Authorization"] == "Bearer k123"

    def test_embedding_key_in_object_accepted(self, http_stub):
        url, _ = http_stub(payload={"embedding": [0.0, 5.0]})
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url=url, dim=2)
        assert remote_embed("x", cfg).tolist() == [0.0, 1.0]

    def test_http_500_maps_to_provider_unavailable(self, http_stub):
        url, _ = http_stub(status=500, payload={"oops": True})
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url=url, dim=2)
        with pytest.raises(ProviderUnavailable):
            remote_embed("x", cfg)

    def test_wrong_length_maps_to_dimension_mismatch(self, http_stub):
        url, _ = http_stub(payload=[0.1] * 255)
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url=url, dim=256)
        with pytest.raises(DimensionMismatch):
            remote_embed("x", cfg)

    @pytest.mark.parametrize("status", [401, 403])
    def test_auth_failure(self, http_stub, status):
        url, _ = http_stub(status=status, payload={"error": "denied"})
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url=url, dim=2)
        with pytest.raises(AuthFailure):
            remote_embed("x", cfg)

    def test_non_json_response(self, http_stub):
        url, _ = http_stub(raw=b"<html>oops</html>", content_type="text/html")
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url=url, dim=2)
        with pytest.raises(ProviderUnavailable):
            remote_embed("x", cfg)

    def test_non_numeric_array(self, http_stub):
        url, _ = http_stub(payload=["a", "b"])
        cfg = EmbeddingProviderConfig(kind="remote", endpoint_url=url, dim=2)
        with pytest.raises(ProviderUnavailable):
            remote_embed("x", cfg)

    def test_connection_refused(self):
        cfg = EmbeddingProviderConfig(
            kind="remote", endpoint_url="http://127.0.0.1:9/none", dim=2, timeout=0.5,
        )
        with pytest.raises(ProviderUnavailable):
            remote_embed("x", cfg)

    def test_requires_remote_kind(self):
        with pytest.raises(InvalidParams):
            remote_embed("x", EmbeddingProviderConfig(kind="local"))


class TestEmbedderEstimators:
    def test_transform_shape_and_rows(self):
        embedder = HashedNgramEmbedder(dim=64)
        matrix = embedder.fit_transform(["first text", "second text"])
        assert matrix.shape == (2, 64)
        assert matrix[0].tolist() == local_embed("first text", 64).tolist()

    def test_get_params(self):
        assert HashedNgramEmbedder(dim=32).get_params() == {"dim": 32}

    def test_embed_single(self):
        embedder = HashedNgramEmbedder()
        assert embedder.embed("abc").shape == (256,)

    def test_remote_embedder_requires_endpoint(self):
        with pytest.raises(InvalidParams):
            RemoteEmbedder().fit()

    def test_remote_embedder_transform(self, http_stub):
        url, _ = http_stub(payload=[1.0, 0.0, 0.0])
        embedder = RemoteEmbedder(endpoint_url=url, dim=3)
        matrix = embedder.transform(["a", "b"])
        assert matrix.shape == (2, 3)
        assert matrix[0].tolist() == [1.0, 0.0, 0.0]
