"""Per-question orchestration: route, retrieve, fuse, generate, post-process, judge."""

from __future__ import annotations

import hashlib
import json
import logging
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..api import (
    build_ner_prompt,
    execute_calls,
    extract_time,
    default_time,
    load_lexicons,
    load_rules,
    match_entities,
    parse_ner_output,
    select_apis,
)
from ..augmentor import API, SOURCE_POLICY, WEB, fuse_references, render_context
from ..evaluator import LlmJudge, RuleJudge, judge_answer, metrics_report
from ..gateway import (
    Bm25Reranker,
    GatewayError,
    HashEmbedder,
    RemoteChatLlm,
    RemoteEmbedder,
    RemoteReranker,
    ResponseCache,
    ScriptedLlm,
    chat,
)
from ..generator import REFUSAL, Answer, Forced, GenerationError, build_prompt, extract_final_answer, generate, post_process
from ..kg import HttpKgClient, LocalKgClient, Registry, default_fixtures_dir, load_fixtures
from ..records import Question, SearchResult
from ..resources import data_path
from ..router import Domain, Dynamism, KeywordBackend, LlmBackend, classify_domain, classify_dynamism
from ..web import CascadeTrace, golden_records, retrieve_web
from .config import RunConfig

log = logging.getLogger(__name__)

PAGES_PER_QUESTION = {1: 5, 2: 5, 3: 50}

# Stage logs, in pipeline order, and which stages read each one's output.
STAGES = (
    "route", "web_prerank", "web_rank", "web_rerank", "ner", "match", "time",
    "plans", "api", "context", "prompt", "raw", "answer",
)
FEEDS = {
    "route": STAGES[1:],
    "web_prerank": ("web_rank",),
    "web_rank": ("web_rerank",),
    "web_rerank": ("context",),
    "ner": ("match",),
    "match": ("plans",),
    "time": ("plans",),
    "plans": ("api",),
    "api": ("context",),
    "context": ("prompt",),
    "prompt": ("raw",),
    "raw": ("answer",),
    "answer": (),
}
ABLATION_STAGE = {
    "prerank": "web_prerank",
    "rerank": "web_rerank",
    "entity_match": "match",
    "time_extract": "time",
    "fewshot": "prompt",
    "cot": "prompt",
}


def downstream(stage: str) -> set[str]:
    """``stage`` plus everything that transitively consumes it."""
    seen, todo = set(), [stage]
    while todo:
        s = todo.pop()
        if s not in seen:
            seen.add(s)
            todo.extend(FEEDS[s])
    return seen


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


@dataclass
class Services:
    classifier: object
    llm: object
    embedder: object
    reranker: object
    kg: object
    judge: object
    cache: ResponseCache | None = None
    registry: Registry = field(default_factory=Registry.default)
    lexicons: dict = field(default_factory=load_lexicons)
    api_rules: list = field(default_factory=load_rules)


def default_stub_script() -> Path:
    return data_path("stub_script.json")


def build_services(config: RunConfig) -> Services:
    net = dict(timeout=config.request_timeout, retries=config.retries, max_in_flight=config.max_in_flight)
    cache = ResponseCache(config.cache_path) if config.cache_path else ResponseCache()
    if config.llm == "stub":
        llm = ScriptedLlm.from_file(config.stub_script or default_stub_script())
    else:
        if not config.llm_url:
            raise ValueError("remote LLM selected but no llm_url configured")
        llm = RemoteChatLlm(config.llm_url, config.llm_model, **net)
    if config.embedder == "hash":
        embedder = HashEmbedder()
    else:
        if not config.embed_url:
            raise ValueError("remote embedder selected but no embed_url configured")
        embedder = RemoteEmbedder(config.embed_url, config.embed_model, config.embed_dim, **net)
    if config.reranker == "bm25":
        reranker = Bm25Reranker()
    else:
        if not config.rerank_url:
            raise ValueError("remote reranker selected but no rerank_url configured")
        reranker = RemoteReranker(config.rerank_url, config.rerank_model, **net)
    classifier = KeywordBackend() if config.classifier == "keyword" else LlmBackend(llm, cache)
    if config.kg_url:
        kg = HttpKgClient(config.kg_url, timeout=config.request_timeout)
    else:
        kg = LocalKgClient(load_fixtures(config.fixtures or default_fixtures_dir()))
    judge = RuleJudge() if config.judge == "rule" else LlmJudge(llm, cache)
    return Services(classifier, llm, embedder, reranker, kg, judge, cache)


class QuestionTimeout(Exception):
    pass


class _Deadline:
    def __init__(self, seconds: float):
        self.end = time.monotonic() + seconds

    def check(self, stage: str) -> None:
        if time.monotonic() > self.end:
            raise QuestionTimeout(f"deadline passed before {stage}")


@dataclass
class QuestionRecord:
    id: str
    query: str
    domain: str = Domain.OPEN.value
    dynamism: str = Dynamism.STATIC.value
    answer: str = REFUSAL
    forced: str = Forced.NONE.value
    verdict: str | None = None
    timed_out: bool = False
    error: str | None = None
    timings: dict[str, float] = field(default_factory=dict)
    stages: dict[str, object] = field(default_factory=lambda: dict.fromkeys(STAGES))
    messages: list[dict] | None = None

    def prediction(self) -> dict:
        return {
            "id": self.id, "prediction": self.answer, "forced": self.forced,
            "domain": self.domain, "dynamism": self.dynamism,
        }

    def to_dict(self) -> dict:
        return {
            "id": self.id, "domain": self.domain, "dynamism": self.dynamism, "answer": self.answer,
            "forced": self.forced, "verdict": self.verdict, "timed_out": self.timed_out,
            "error": self.error, "timings": self.timings, "stages": self.stages,
        }


@dataclass
class RunReport:
    records: list[QuestionRecord]
    metrics: dict | None
    mean_latency: float
    config: dict

    def predictions_jsonl(self) -> str:
        return "".join(json.dumps(r.prediction(), ensure_ascii=False) + "\n" for r in self.records)

    def prompt_log_jsonl(self) -> str:
        return "".join(
            json.dumps({"id": r.id, "messages": r.messages}, ensure_ascii=False) + "\n"
            for r in self.records
        )

    def to_dict(self, *, stages: bool = True) -> dict:
        rows = [r.to_dict() for r in self.records]
        if not stages:
            for row in rows:
                del row["stages"]
        return {"config": self.config, "metrics": self.metrics, "mean_latency": self.mean_latency, "questions": rows}


def _timed(rec: QuestionRecord, name: str):
    class _Timer:
        def __enter__(self):
            self.t0 = time.perf_counter()

        def __exit__(self, *exc):
            rec.timings[name] = rec.timings.get(name, 0.0) + time.perf_counter() - self.t0
            return False

    return _Timer()


def _web(question: Question, pages: Sequence[SearchResult], config: RunConfig, svc: Services, rec: QuestionRecord):
    trace = CascadeTrace()
    pages = list(pages)[: PAGES_PER_QUESTION[config.task]]
    chunks = retrieve_web(
        question.query, pages, config.task, config.cascade(),
        embedder=svc.embedder, reranker=svc.reranker, trace=trace,
    )
    rec.stages["web_prerank"] = None if trace.prerank is None else {
        "coarse": len(trace.coarse), "kept": golden_records(trace.prerank),
    }
    rec.stages["web_rank"] = {"fine": len(trace.fine), "kept": golden_records(trace.rank)}
    rec.stages["web_rerank"] = {
        "reranked": trace.rerank is not None, "kept": golden_records(trace.output),
    }
    return chunks


def _api(question: Question, domain: Domain, config: RunConfig, svc: Services, rec: QuestionRecord, deadline):
    ner_prompt = build_ner_prompt(question, domain)
    reply = chat([{"role": "user", "content": ner_prompt}], svc.llm, svc.cache)
    entities = parse_ner_output(reply)
    rec.stages["ner"] = [[e.name, e.category] for e in entities]
    deadline.check("entity match")
    if config.entity_match:
        entities = match_entities(entities, svc.lexicons.get(domain.value, []))
    rec.stages["match"] = [[e.name, e.category, e.kind, e.canonical] for e in entities]
    spec = extract_time(question.query, question.query_time) if config.time_extract else default_time(question.query_time)
    rec.stages["time"] = {
        "kind": spec.kind, "start": spec.start.isoformat(), "granularity": spec.granularity,
        "provenance": spec.provenance, "end": spec.end.isoformat() if spec.end else None,
    }
    plans = select_apis(domain, entities, spec, question.query, svc.registry, svc.api_rules)
    rec.stages["plans"] = [{"api": p.api, "params": p.params} for p in plans]
    deadline.check("api execution")
    results = execute_calls(plans, svc.kg)
    rec.stages["api"] = [
        {"api": r.api, "success": r.success, "markdown_sha": _sha(r.markdown)} for r in results
    ]
    return results


def answer_question(
    question: Question, pages: Sequence[SearchResult], config: RunConfig, svc: Services
) -> QuestionRecord:
    """Run one question end to end. Failures are recorded on the record, never raised."""
    rec = QuestionRecord(question.id, question.query)
    deadline = _Deadline(config.question_timeout)
    t_start = time.perf_counter()
    try:
        with _timed(rec, "route"):
            domain = classify_domain(question, svc.classifier)
            dynamism = classify_dynamism(question, svc.classifier)
        rec.domain, rec.dynamism = domain.value, dynamism.value
        rec.stages["route"] = [domain.value, dynamism.value]

        sources = SOURCE_POLICY[domain]
        web_chunks, api_results = [], []
        if WEB in sources:
            deadline.check("web retrieval")
            with _timed(rec, "web"):
                web_chunks = _web(question, pages, config, svc, rec)
        if API in sources and config.task in (2, 3):
            deadline.check("api extraction")
            with _timed(rec, "api"):
                api_results = _api(question, domain, config, svc, rec, deadline)

        deadline.check("generation")
        with _timed(rec, "fuse"):
            bundle = fuse_references(domain, web_chunks, api_results, total_budget=config.total_budget)
            context = render_context(bundle)
        rec.stages["context"] = {"items": len(bundle.items), "sha": _sha(context)}
        prompt = build_prompt(question, context, domain, fewshot=config.fewshot, cot=config.cot)
        rec.messages = prompt.messages()
        rec.stages["prompt"] = {"system": prompt.system, "fewshots": len(prompt.fewshots), "sha": _sha(prompt.text())}
        with _timed(rec, "generate"):
            raw = generate(prompt, svc.llm, svc.cache)
        rec.stages["raw"] = raw
        answer = Answer(extract_final_answer(raw, prompt.marker), raw, Forced.NONE, domain, dynamism)
        answer = post_process(answer, domain, dynamism, question.query)
        rec.answer, rec.forced = answer.text, answer.forced.value
    except QuestionTimeout as exc:
        rec.timed_out, rec.error = True, str(exc)
        rec.answer, rec.forced = REFUSAL, Forced.NONE.value
    except GenerationError as exc:
        rec.error = f"generation failed: {exc}"
        rec.answer = REFUSAL
    except Exception as exc:  # one bad question must not sink the run
        log.warning("question %s failed: %s", question.id, exc)
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.answer = REFUSAL
    rec.stages["answer"] = [rec.answer, rec.forced]
    rec.timings["total"] = time.perf_counter() - t_start
    if question.answer:
        rec.verdict = judge_answer(rec.answer, question.answer, svc.judge).value
    return rec


def run_pipeline(
    dataset: Sequence[tuple[Question, Sequence[SearchResult]]],
    config: RunConfig | None = None,
    services: Services | None = None,
) -> RunReport:
    config = config or RunConfig()
    svc = services or build_services(config)
    workers = min(config.worker_count, max(1, len(dataset)))
    if workers == 1:
        records = [answer_question(q, pages, config, svc) for q, pages in dataset]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda item: answer_question(item[0], item[1], config, svc), dataset))
    records.sort(key=lambda r: r.id)  # stable, so duplicate ids keep dataset order
    judged = [
        {"verdict": r.verdict, "domain": r.domain, "dynamism": r.dynamism}
        for r in records if r.verdict is not None
    ]
    metrics = metrics_report(judged) if judged else None
    latency = sum(r.timings["total"] for r in records) / len(records) if records else 0.0
    return RunReport(records, metrics, latency, config.to_dict())
