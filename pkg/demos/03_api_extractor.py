"""From question text to mock-KG calls: NER, entity matching, time, API plans.

The NER step normally asks the model; here the scripted stub answers, the
same one the offline pipeline uses, so the questions come from the bundled
mini-dataset it was written for.

Run: python3 demos/03_api_extractor.py
"""

from routed_rag.api import (
    build_ner_prompt, execute_calls, extract_time, load_lexicons, match_entities,
    parse_ner_output, select_apis,
)
from routed_rag.gateway import ScriptedLlm, chat
from routed_rag.harness import load_dataset
from routed_rag.harness.pipeline import default_stub_script
from routed_rag.kg import LocalKgClient, Registry, default_fixtures_dir, load_fixtures
from routed_rag.resources import data_path
from routed_rag.router import KeywordBackend, classify_domain

llm = ScriptedLlm.from_file(default_stub_script())
kg = LocalKgClient(load_fixtures(default_fixtures_dir()))
lexicons = load_lexicons()
dataset = load_dataset(data_path("mini_dataset.jsonl"))

for q, _pages in dataset:
    domain = classify_domain(q, KeywordBackend()).value
    if domain == "open":
        continue
    text, when = q.query, q.query_time
    reply = chat([{"role": "user", "content": build_ner_prompt(q, domain)}], llm)
    entities = match_entities(parse_ner_output(reply), lexicons[domain])
    spec = extract_time(text, when)
    plans = select_apis(domain, entities, spec, text, Registry.default())
    print(f"\n[{domain}] {text}")
    print(f"  entities: {[(e.name, e.canonical) for e in entities]}")
    print(f"  time:     {spec.kind} {spec.start.date()} ({spec.provenance})")
    for res in execute_calls(plans, kg):
        first = res.markdown.splitlines()[0] if res.markdown else ""
        print(f"  {res.api}({res.params}) ok={res.success}  {first[:70]}")
