"""Command-line entry point: ``routed-rag {run,eval,serve-kg,bench-parsers}``."""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
from pathlib import Path

from ..evaluator import RuleJudge, judge_answer, metrics_report
from ..kg import default_fixtures_dir, load_fixtures, serve
from ..resources import data_path
from ..web import BACKENDS, benchmark_parsers
from .config import ABLATIONS, RunConfig
from .dataset import load_dataset
from .pipeline import run_pipeline

log = logging.getLogger("routed_rag")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="routed-rag", description="Routing-based retrieval QA engine.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="answer a dataset, write predictions and a report")
    run.add_argument("--dataset", required=True)
    run.add_argument("--config", help="JSON file mirroring RunConfig")
    run.add_argument("--task", type=int, choices=(1, 2, 3))
    run.add_argument("--llm", choices=("stub", "remote"))
    run.add_argument("--stub-script")
    run.add_argument("--classifier", choices=("keyword", "llm"))
    run.add_argument("--embedder", choices=("hash", "remote"))
    run.add_argument("--reranker", choices=("bm25", "remote"))
    run.add_argument("--parser", choices=sorted(BACKENDS))
    run.add_argument("--judge", choices=("rule", "llm"))
    run.add_argument("--kg-url")
    run.add_argument("--fixtures")
    run.add_argument("--cache", dest="cache_path")
    for name in ("prerank_k", "rank_k", "rerank_k", "coarse_chunk", "fine_chunk", "total_budget", "workers"):
        run.add_argument("--" + name.replace("_", "-"), type=int)
    run.add_argument("--timeout", dest="question_timeout", type=float)
    for name in ABLATIONS:
        run.add_argument("--no-" + name.replace("_", "-"), dest=name, action="store_false", default=None)
    run.add_argument("--out", default="predictions.jsonl", help="predictions file")
    run.add_argument("--report", help="write the full RunReport JSON here")
    run.add_argument("--prompt-log", help="write every generation prompt here (JSON lines)")

    ev = sub.add_parser("eval", help="score predictions against gold answers")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--gold", required=True)

    kg = sub.add_parser("serve-kg", help="serve the mock knowledge graph over HTTP")
    kg.add_argument("--fixtures", default=None)
    kg.add_argument("--host", default="127.0.0.1")
    kg.add_argument("--port", type=int, default=8000)

    bench = sub.add_parser("bench-parsers", help="compare HTML parser backends on a corpus")
    bench.add_argument("--corpus", default=None, help="directory of .html files")
    bench.add_argument("--backends", nargs="+", default=sorted(BACKENDS))
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    doc = RunConfig.from_file(args.config).to_dict() if args.config else RunConfig().to_dict()
    for key in list(doc):
        value = getattr(args, key, None)
        if value is not None:
            doc[key] = value
    if args.stub_script is not None:
        doc["stub_script"] = args.stub_script
    return RunConfig.from_dict(doc).with_env()


def _cmd_run(args) -> int:
    config = _config(args)
    report = run_pipeline(load_dataset(args.dataset), config)
    Path(args.out).write_text(report.predictions_jsonl(), encoding="utf-8")
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), indent=2), encoding="utf-8")
    if args.prompt_log:
        Path(args.prompt_log).write_text(report.prompt_log_jsonl(), encoding="utf-8")
    failed = sum(1 for r in report.records if r.error)
    print(json.dumps({"questions": len(report.records), "failed": failed, "metrics": report.metrics}))
    return 0


def _read_jsonl(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def _cmd_eval(args) -> int:
    preds = {r["id"]: r for r in _read_jsonl(args.pred)}
    rows, judge = [], RuleJudge()
    for g in _read_jsonl(args.gold):
        qid = g.get("interaction_id") or g.get("id")
        if not g.get("answer"):
            continue
        p = preds.get(qid, {})
        rows.append({
            "verdict": judge_answer(p.get("prediction", ""), g["answer"], judge),
            "domain": g.get("domain") or p.get("domain"),
            "dynamism": g.get("static_or_dynamic") or p.get("dynamism"),
        })
    if not rows:
        print("no gold answers to score", file=sys.stderr)
        return 1
    print(json.dumps(metrics_report(rows), indent=2))
    return 0


def _cmd_serve_kg(args) -> int:
    store = load_fixtures(args.fixtures or default_fixtures_dir())
    server = serve(store, (args.host, args.port))
    print(f"mock KG listening on {server.url}", flush=True)

    def _stop(signum, frame):
        raise KeyboardInterrupt

    signal.signal(signal.SIGTERM, _stop)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _cmd_bench(args) -> int:
    root = Path(args.corpus) if args.corpus else data_path("parser_corpus")
    docs = [f.read_text(encoding="utf-8", errors="replace") for f in sorted(Path(root).glob("*.html"))]
    print(json.dumps(benchmark_parsers(docs, args.backends).to_dict(), indent=2))
    return 0


COMMANDS = {"run": _cmd_run, "eval": _cmd_eval, "serve-kg": _cmd_serve_kg, "bench-parsers": _cmd_bench}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
