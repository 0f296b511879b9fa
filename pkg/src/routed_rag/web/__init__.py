"""Web retrieval: HTML parsing, chunking, and the ranking cascade."""

from .chunking import Chunk, Tokenizer, WordTokenizer, chunk_text, tokenize_count, truncate_tokens
from .parsing import BACKENDS, ParsedPage, ParserConfigError, ParserReport, benchmark_parsers, parse_html
from .ranking import (
    CascadeConfig,
    CascadeTrace,
    RetrievalError,
    ScoredChunk,
    bm25_prerank,
    dump_golden,
    embed_rank,
    golden_records,
    rerank,
    retrieve_web,
)

__all__ = [
    "Chunk", "Tokenizer", "WordTokenizer", "chunk_text", "tokenize_count", "truncate_tokens",
    "BACKENDS", "ParsedPage", "ParserConfigError", "ParserReport", "benchmark_parsers", "parse_html",
    "CascadeConfig", "CascadeTrace", "RetrievalError", "ScoredChunk", "bm25_prerank", "dump_golden",
    "embed_rank", "golden_records", "rerank", "retrieve_web",
]
