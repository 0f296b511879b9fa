"""Route a handful of questions to a domain and a dynamism class.

Run: python3 demos/01_routing.py
"""

from routed_rag.router import KeywordBackend, classify_domain, classify_dynamism
from routed_rag.records import Question
from routed_rag.harness import parse_query_time

QUESTIONS = [
    "What was Apple's closing price yesterday?",
    "How many points did the Lakers score last night?",
    "When was Shake It Off released?",
    "Who directed Titanic?",
    "What is the capital of Australia?",
    "What is Taylor Swift's latest album?",
]

backend = KeywordBackend()
when = parse_query_time("02/28/2024, 10:00:00 PT")
for i, text in enumerate(QUESTIONS):
    q = Question(id=str(i), query=text, query_time=when)
    domain = classify_domain(q, backend)
    dyn = classify_dynamism(q, backend)
    print(f"{domain.value:8} {dyn.value:14} {text}")
