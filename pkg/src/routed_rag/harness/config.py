from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from ..web.ranking import CascadeConfig

ABLATIONS = ("prerank", "rerank", "entity_match", "time_extract", "fewshot", "cot")

ENV_VARS = {
    "llm_url": "ROUTED_RAG_LLM_URL",
    "llm_model": "ROUTED_RAG_LLM_MODEL",
    "embed_url": "ROUTED_RAG_EMBED_URL",
    "embed_model": "ROUTED_RAG_EMBED_MODEL",
    "rerank_url": "ROUTED_RAG_RERANK_URL",
    "rerank_model": "ROUTED_RAG_RERANK_MODEL",
    "kg_url": "ROUTED_RAG_KG_URL",
    "cache_path": "ROUTED_RAG_CACHE",
}


@dataclass
class RunConfig:
    task: int = 1
    # stage widths
    prerank_k: int = 50
    rank_k: int = 10
    rerank_k: int = 5
    coarse_chunk: int = 1024
    fine_chunk: int = 256
    # ablation switches: False bypasses the stage
    prerank: bool = True
    rerank: bool = True
    entity_match: bool = True
    time_extract: bool = True
    fewshot: bool = True
    cot: bool = True
    # backends
    llm: str = "stub"
    classifier: str = "keyword"
    embedder: str = "hash"
    reranker: str = "bm25"
    parser: str = "density"
    judge: str = "rule"
    stub_script: str | None = None
    llm_url: str | None = None
    llm_model: str = "llama3-70b-instruct"
    embed_url: str | None = None
    embed_model: str = "bge-m3"
    embed_dim: int = 1024
    rerank_url: str | None = None
    rerank_model: str = "bge-reranker-v2-m3"
    kg_url: str | None = None
    fixtures: str | None = None
    cache_path: str | None = None
    request_timeout: float = 60.0
    retries: int = 2
    max_in_flight: int = 8
    # budgets and run control
    total_budget: int = 4096
    workers: int = 0  # 0 = CPU count
    question_timeout: float = 60.0

    def __post_init__(self):
        if self.task not in (1, 2, 3):
            raise ValueError(f"task must be 1, 2 or 3, got {self.task}")
        for name in ("prerank_k", "rank_k", "rerank_k", "coarse_chunk", "fine_chunk", "total_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.llm not in ("stub", "remote") or self.classifier not in ("keyword", "llm"):
            raise ValueError("llm must be stub|remote and classifier keyword|llm")
        if self.embedder not in ("hash", "remote") or self.reranker not in ("bm25", "remote"):
            raise ValueError("embedder must be hash|remote and reranker bm25|remote")
        if self.judge not in ("rule", "llm"):
            raise ValueError("judge must be rule|llm")
        if self.workers < 0 or self.question_timeout <= 0:
            raise ValueError("workers must be >= 0 and question_timeout > 0")

    @property
    def worker_count(self) -> int:
        return self.workers or os.cpu_count() or 1

    def cascade(self) -> CascadeConfig:
        return CascadeConfig(
            prerank_k=self.prerank_k, rank_k=self.rank_k, rerank_k=self.rerank_k,
            coarse_chunk=self.coarse_chunk, fine_chunk=self.fine_chunk,
            prerank=self.prerank, rerank=self.rerank, parser=self.parser,
        )

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {unknown}")
        return cls(**doc)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def with_env(self, environ: dict[str, str] | None = None) -> "RunConfig":
        """Fill unset endpoint/cache settings from environment variables."""
        env = os.environ if environ is None else environ
        doc = asdict(self)
        for key, var in ENV_VARS.items():
            if env.get(var) and doc.get(key) in (None, type(self).__dataclass_fields__[key].default):
                doc[key] = env[var]
        return RunConfig(**doc)

    def to_dict(self) -> dict:
        return asdict(self)
