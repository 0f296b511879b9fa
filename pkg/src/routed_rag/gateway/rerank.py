from __future__ import annotations

import math
from collections.abc import Sequence
from typing import Protocol

import httpx

from ..bm25 import bm25_scores
from ._http import DEFAULT_MAX_IN_FLIGHT, GatewayError, JsonPoster, ProtocolError


class RerankClient(Protocol):
    backend_id: str

    def score(self, query: str, passages: Sequence[str]) -> list[float]: ...


class Bm25Reranker:
    """Stand-in for a cross-encoder: BM25 with the passages as the corpus."""

    backend_id = "bm25-rerank"

    def score(self, query: str, passages: Sequence[str]) -> list[float]:
        return bm25_scores(passages, query) if passages else []


class RemoteReranker:
    """Rerank endpoint taking ``{"model", "query", "documents"}`` and returning
    ``results: [{"index", "relevance_score"}]``."""

    def __init__(
        self,
        url: str,
        model: str,
        *,
        timeout: float = 60.0,
        retries: int = 2,
        max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
        transport: httpx.BaseTransport | None = None,
    ):
        self.model = model
        self.backend_id = f"rerank:{model}@{url}"
        self._http = JsonPoster(
            self.backend_id, url, timeout=timeout, retries=retries,
            max_in_flight=max_in_flight, transport=transport,
        )

    def score(self, query: str, passages: Sequence[str]) -> list[float]:
        if not passages:
            return []
        body = self._http.post({"model": self.model, "query": query, "documents": list(passages)})
        scores = [math.nan] * len(passages)
        try:
            for r in body["results"]:
                scores[int(r["index"])] = float(r["relevance_score"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ProtocolError(self.backend_id, f"malformed rerank response: {exc!r}") from exc
        return scores


def rerank_scores(query: str, passages: Sequence[str], client: RerankClient) -> list[float]:
    """One finite score per passage, order preserved."""
    passages = list(passages)
    if not passages:
        return []
    try:
        scores = [float(s) for s in client.score(query, passages)]
    except GatewayError:
        raise
    except Exception as exc:
        raise GatewayError(client.backend_id, str(exc)) from exc
    if len(scores) != len(passages) or not all(math.isfinite(s) for s in scores):
        raise ProtocolError(client.backend_id, "reranker returned missing or non-finite scores")
    return scores
