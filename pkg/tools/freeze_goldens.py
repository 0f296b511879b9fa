"""Freeze derived golden values into tests/golden/.

Run after an intentional behaviour change: ``python3 tools/freeze_goldens.py``.
Each golden is produced by running the shipped implementation once on
bundled inputs; the tests then pin that output.
"""

from __future__ import annotations

import json
from pathlib import Path

from routed_rag.gateway import Bm25Reranker, HashEmbedder
from routed_rag.harness import RunConfig, load_dataset, run_pipeline
from routed_rag.resources import data_path
from routed_rag.web import Chunk, benchmark_parsers, dump_golden, embed_rank, retrieve_web, tokenize_count

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"

SAMPLE = (
    "Retrieval systems answer questions by first finding text that is likely to contain the answer. "
    "A page is parsed, split into chunks, and scored against the question; only the best chunks "
    "reach the model. Token counts, not characters, decide where a chunk ends, so the same page "
    "always yields the same chunks. Punctuation such as commas, periods, and hyphens (like this: "
    "state-of-the-art) counts as separate tokens under the default tokenizer. Numbers like 3.14, "
    "2024-02-28, and 1,024 split on their punctuation too. Non-ASCII words such as café, naïve, "
    "and Zürich are single tokens. "
)
HASH_CORPUS = ["apple stock price today", "banana bread recipe", "apple pie recipe with fresh apples"]
HASH_QUERY = "apple recipe"


def sample_text() -> str:
    text = (SAMPLE * 4).encode("utf-8")[:1024]
    return text.decode("utf-8", errors="ignore")


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    text = sample_text()
    (GOLDEN / "sample_1k.txt").write_text(text, encoding="utf-8")
    (GOLDEN / "sample_1k.count").write_text(f"{tokenize_count(text)}\n")

    chunks = [Chunk(0, i, t, tokenize_count(t)) for i, t in enumerate(HASH_CORPUS)]
    ranked = embed_rank(chunks, HASH_QUERY, 3, HashEmbedder())
    (GOLDEN / "hash_rank_order.json").write_text(
        json.dumps({"corpus": HASH_CORPUS, "query": HASH_QUERY, "order": [s.chunk.seq for s in ranked]}) + "\n"
    )

    dataset = load_dataset(data_path("mini_dataset.jsonl"))
    question, pages = next((q, p) for q, p in dataset if q.id == "q07")
    out = retrieve_web(question, pages, 1, embedder=HashEmbedder(), reranker=Bm25Reranker())
    (GOLDEN / "cascade_q07_mode1.jsonl").write_text(dump_golden(out))

    corpus = [f.read_text(encoding="utf-8") for f in sorted(data_path("parser_corpus").glob("*.html"))]
    report = benchmark_parsers(corpus)
    (GOLDEN / "parser_success.json").write_text(
        json.dumps({r.backend: r.success_rate for r in report.rows}, sort_keys=True) + "\n"
    )

    for task in (1, 2, 3):
        rep = run_pipeline(dataset, RunConfig(task=task, workers=1))
        (GOLDEN / f"predictions_task{task}.jsonl").write_text(rep.predictions_jsonl(), encoding="utf-8")
    print(f"goldens written to {GOLDEN}")


if __name__ == "__main__":
    main()
