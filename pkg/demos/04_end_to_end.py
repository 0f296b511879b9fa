"""Answer the bundled mini-dataset in all three task modes and score it.

Everything runs offline: scripted model, hash embeddings, BM25 reranker,
fixture-backed knowledge graph.

Run: python3 demos/04_end_to_end.py
"""

from routed_rag.harness import RunConfig, load_dataset, run_pipeline
from routed_rag.resources import data_path

dataset = load_dataset(data_path("mini_dataset.jsonl"))
for task in (1, 2, 3):
    report = run_pipeline(dataset, RunConfig(task=task))
    pct = {k: round(100 * v, 1) for k, v in report.metrics["overall"].items() if k != "n"}
    print(f"\ntask {task}: {pct}")
    for r in report.records:
        flag = "" if r.forced == "none" else f"  [{r.forced}]"
        print(f"  {r.id} {r.domain:8} {r.verdict:9} {r.answer[:40]}{flag}")

print("\nablations (task 3 score):")
for name in ("prerank", "rerank", "entity_match", "time_extract", "fewshot", "cot"):
    report = run_pipeline(dataset, RunConfig(task=3, **{name: False}))
    print(f"  w/o {name:13} {100 * report.metrics['overall']['score']:6.1f}")
