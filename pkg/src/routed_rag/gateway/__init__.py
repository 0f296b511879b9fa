"""Backend-agnostic model access: chat, embeddings, reranking, and a response cache."""

from ._http import GatewayError, ProtocolError
from .cache import ResponseCache, cache_key
from .embedding import EmbeddingClient, HashEmbedder, RemoteEmbedder, embed, hash_features, normalize_rows
from .llm import LlmClient, RemoteChatLlm, ScriptedLlm, chat
from .rerank import Bm25Reranker, RemoteReranker, RerankClient, rerank_scores

__all__ = [
    "GatewayError",
    "ProtocolError",
    "ResponseCache",
    "cache_key",
    "EmbeddingClient",
    "HashEmbedder",
    "RemoteEmbedder",
    "embed",
    "hash_features",
    "normalize_rows",
    "LlmClient",
    "RemoteChatLlm",
    "ScriptedLlm",
    "chat",
    "Bm25Reranker",
    "RemoteReranker",
    "RerankClient",
    "rerank_scores",
]
