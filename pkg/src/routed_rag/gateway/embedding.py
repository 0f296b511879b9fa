"""Embedding clients. All of them return unit-norm row vectors."""

from __future__ import annotations

import hashlib
from collections.abc import Sequence
from typing import Protocol

import httpx
import numpy as np

from ..bm25 import terms
from ._http import DEFAULT_MAX_IN_FLIGHT, GatewayError, JsonPoster, ProtocolError

HASH_DIM = 256


class EmbeddingClient(Protocol):
    backend_id: str
    dim: int

    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


def normalize_rows(mat: np.ndarray) -> np.ndarray:
    """L2-normalize rows; all-zero rows become the first basis vector."""
    mat = np.asarray(mat, dtype=np.float64)
    norms = np.linalg.norm(mat, axis=1)
    out = np.zeros_like(mat)
    nz = norms > 0
    out[nz] = mat[nz] / norms[nz, None]
    out[~nz, 0] = 1.0
    return out


def _bucket(feature: str, dim: int) -> int:
    digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") % dim


def hash_features(text: str, dim: int = HASH_DIM) -> np.ndarray:
    """Raw (unnormalized) hashed unigram + bigram term counts."""
    toks = terms(text)
    vec = np.zeros(dim, dtype=np.float64)
    for t in toks:
        vec[_bucket(t, dim)] += 1.0
    for a, b in zip(toks, toks[1:]):
        vec[_bucket(f"{a} {b}", dim)] += 1.0
    return vec


class HashEmbedder:
    def __init__(self, dim: int = HASH_DIM):
        self.dim = dim
        self.backend_id = f"hash:{dim}"
        self.calls = 0

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        self.calls += 1
        if not texts:
            return np.zeros((0, self.dim))
        return normalize_rows(np.stack([hash_features(t, self.dim) for t in texts]))


class RemoteEmbedder:
    """OpenAI-style embeddings endpoint: ``{"model", "input"}`` -> ``data[i].embedding``."""

    def __init__(
        self,
        url: str,
        model: str,
        dim: int,
        *,
        timeout: float = 60.0,
        retries: int = 2,
        max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
        transport: httpx.BaseTransport | None = None,
    ):
        self.dim = dim
        self.model = model
        self.backend_id = f"embed:{model}@{url}"
        self._http = JsonPoster(
            self.backend_id, url, timeout=timeout, retries=retries,
            max_in_flight=max_in_flight, transport=transport,
        )

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        if not texts:
            return np.zeros((0, self.dim))
        body = self._http.post({"model": self.model, "input": list(texts)})
        try:
            rows = sorted(body["data"], key=lambda d: d.get("index", 0))
            mat = np.array([r["embedding"] for r in rows], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(self.backend_id, f"malformed embedding response: {exc!r}") from exc
        if mat.shape != (len(texts), self.dim):
            raise ProtocolError(self.backend_id, f"expected shape {(len(texts), self.dim)}, got {mat.shape}")
        return normalize_rows(mat)


def embed(texts: Sequence[str], client: EmbeddingClient) -> np.ndarray:
    """One unit vector per text, order preserved."""
    try:
        mat = np.asarray(client.embed(list(texts)), dtype=np.float64)
    except GatewayError:
        raise
    except Exception as exc:
        raise GatewayError(client.backend_id, str(exc)) from exc
    if mat.shape != (len(texts), client.dim):
        raise ProtocolError(client.backend_id, f"expected shape {(len(texts), client.dim)}, got {mat.shape}")
    return mat
