"""Walk one 50-page question through the task-3 web cascade.

Shows how many chunks survive each stage: BM25 pre-rank over 1024-token
blocks, embedding rank over 256-token re-cuts, then rerank.

Run: python3 demos/02_web_cascade.py
"""

from routed_rag.gateway import Bm25Reranker, HashEmbedder
from routed_rag.harness import RunConfig, load_dataset
from routed_rag.resources import data_path
from routed_rag.web import CascadeTrace, retrieve_web

dataset = load_dataset(data_path("mini_dataset.jsonl"))
question, pages = next((q, p) for q, p in dataset if len(p) == 50)
print(f"question: {question.query}  ({len(pages)} pages)")

for task in (1, 3):
    trace = CascadeTrace()
    # the pipeline hands tasks 1 and 2 only their first five pages
    use = pages if task == 3 else pages[:5]
    out = retrieve_web(question, use, task, RunConfig(task=task).cascade(),
                       embedder=HashEmbedder(), reranker=Bm25Reranker(), trace=trace)
    pre = "skipped" if trace.prerank is None else f"{len(trace.coarse)} -> {len(trace.prerank)}"
    print(f"\ntask {task}: parsed {trace.pages_parsed} pages, pre-rank {pre}, "
          f"rank {len(trace.fine)} -> {len(trace.rank)}, rerank -> {len(out)}")
    for s in out:
        print(f"  doc {s.chunk.doc_id:2} seq {s.chunk.seq:4}  {s.score:7.3f}  {s.chunk.text[:60]!r}")
