"""The web ranking cascade: BM25 pre-rank, embedding rank, rerank."""

from __future__ import annotations

import hashlib
import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..bm25 import bm25_scores
from ..gateway import EmbeddingClient, GatewayError, RerankClient, embed, normalize_rows, rerank_scores
from ..records import Question, SearchResult
from .chunking import DEFAULT_TOKENIZER, Chunk, Tokenizer, chunk_text
from .parsing import DEFAULT_BACKEND, parse_html

log = logging.getLogger(__name__)


class RetrievalError(RuntimeError):
    def __init__(self, backend: str, message: str):
        super().__init__(f"[{backend}] {message}")
        self.backend = backend


@dataclass(frozen=True)
class ScoredChunk:
    chunk: Chunk
    score: float
    stage: str


def _top(chunks: Sequence[Chunk], scores: Sequence[float], k: int, stage: str) -> list[ScoredChunk]:
    order = sorted(range(len(chunks)), key=lambda i: (-scores[i], chunks[i].doc_id, chunks[i].seq))
    return [ScoredChunk(chunks[i], float(scores[i]), stage) for i in order[:k]]


def bm25_prerank(chunks: Sequence[Chunk], query: str, k: int) -> list[ScoredChunk]:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not chunks:
        return []
    return _top(chunks, bm25_scores([c.text for c in chunks], query), k, "prerank")


def embed_rank(
    chunks: Sequence[Chunk], query: str, k: int, embedder: EmbeddingClient
) -> list[ScoredChunk]:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not chunks:
        return []
    try:
        vecs = embed([query] + [c.text for c in chunks], embedder)
    except GatewayError as exc:
        raise RetrievalError(exc.backend, f"embedding failed: {exc}") from exc
    # clients promise unit vectors; renormalizing makes cosine robust to any that don't
    vecs = normalize_rows(vecs)
    sims = vecs[1:] @ vecs[0]
    return _top(chunks, np.clip(sims, -1.0, 1.0).tolist(), k, "rank")


def rerank(
    candidates: Sequence[ScoredChunk], query: str, k: int, reranker: RerankClient
) -> list[ScoredChunk]:
    if not candidates:
        return []
    chunks = [c.chunk for c in candidates]
    try:
        scores = rerank_scores(query, [c.text for c in chunks], reranker)
    except GatewayError as exc:
        raise RetrievalError(exc.backend, f"rerank failed: {exc}") from exc
    return _top(chunks, scores, k, "rerank")


@dataclass
class CascadeConfig:
    prerank_k: int = 50
    rank_k: int = 10
    rerank_k: int = 5
    coarse_chunk: int = 1024
    fine_chunk: int = 256
    prerank: bool = True
    rerank: bool = True
    parser: str = DEFAULT_BACKEND

    def __post_init__(self):
        for name in ("prerank_k", "rank_k", "rerank_k", "coarse_chunk", "fine_chunk"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass
class CascadeTrace:
    """What each stage saw and kept; used for logs and invariant checks."""

    pages_parsed: int = 0
    pages_failed: int = 0
    coarse: list[Chunk] = field(default_factory=list)
    prerank: list[ScoredChunk] | None = None
    fine: list[Chunk] = field(default_factory=list)
    rank: list[ScoredChunk] = field(default_factory=list)
    rerank: list[ScoredChunk] | None = None
    output: list[ScoredChunk] = field(default_factory=list)


def recut(blocks: Sequence[Chunk], size: int, tokenizer: Tokenizer = DEFAULT_TOKENIZER) -> list[Chunk]:
    """Cut coarse blocks into fine chunks that remember their parent block.

    Fine sequence numbers are ``block_seq * per_block + j`` so (doc, seq) stays
    unique per document and sorts in document order.
    """
    out = []
    for b in blocks:
        per_block = -(-b.n_tokens // size)
        out.extend(
            chunk_text(
                b.text, size, doc_id=b.doc_id, seq_start=b.seq * per_block,
                title=b.title, parent=b.key, tokenizer=tokenizer,
            )
        )
    return out


def retrieve_web(
    question: Question | str,
    results: Sequence[SearchResult],
    task_mode: int,
    config: CascadeConfig | None = None,
    *,
    embedder: EmbeddingClient,
    reranker: RerankClient,
    tokenizer: Tokenizer = DEFAULT_TOKENIZER,
    trace: CascadeTrace | None = None,
) -> list[ScoredChunk]:
    """Run the full cascade for one question.

    Task 3 pre-ranks 1024-token blocks with BM25 and re-cuts the survivors;
    tasks 1 and 2 cut page text straight into ranking chunks.
    """
    if task_mode not in (1, 2, 3):
        raise ValueError(f"task_mode must be 1, 2 or 3, got {task_mode}")
    query = question.query if isinstance(question, Question) else question
    cfg = config or CascadeConfig()
    tr = trace if trace is not None else CascadeTrace()
    texts: list[tuple[int, str, str]] = []
    for doc_id, page in enumerate(results):
        parsed = parse_html(page.html, cfg.parser, url=page.page_url)
        if parsed.success:
            tr.pages_parsed += 1
            texts.append((doc_id, page.page_name, parsed.text))
        else:
            tr.pages_failed += 1
            log.debug("skipping unparseable page %s", page.page_url)
    if not texts:
        return []

    if task_mode == 3 and cfg.prerank:
        for doc_id, title, text in texts:
            tr.coarse.extend(chunk_text(text, cfg.coarse_chunk, doc_id=doc_id, title=title, tokenizer=tokenizer))
        tr.prerank = bm25_prerank(tr.coarse, query, cfg.prerank_k)
        tr.fine = recut([s.chunk for s in tr.prerank], cfg.fine_chunk, tokenizer)
    else:
        for doc_id, title, text in texts:
            tr.fine.extend(chunk_text(text, cfg.fine_chunk, doc_id=doc_id, title=title, tokenizer=tokenizer))

    tr.rank = embed_rank(tr.fine, query, cfg.rank_k, embedder) if tr.fine else []
    if cfg.rerank:
        tr.rerank = rerank(tr.rank, query, cfg.rerank_k, reranker)
        tr.output = tr.rerank
    else:
        tr.output = tr.rank[: cfg.rerank_k]
    return tr.output


def text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def golden_records(scored: Sequence[ScoredChunk]) -> list[dict]:
    return [
        {
            "doc_id": s.chunk.doc_id,
            "seq": s.chunk.seq,
            "stage": s.stage,
            "score": f"{s.score:.6f}",
            "text_sha256": text_digest(s.chunk.text),
        }
        for s in scored
    ]


def dump_golden(scored: Sequence[ScoredChunk]) -> str:
    """JSON-lines golden format: doc id, seq, stage, 6-dp score, text digest."""
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in golden_records(scored))
