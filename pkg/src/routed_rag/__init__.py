"""Routing-based retrieval-augmented question answering.

Questions are routed by domain and dynamism, answered from web pages and a
mock knowledge graph, and scored with the correct/missing/incorrect scheme.
"""

from .harness import RunConfig, load_dataset, run_pipeline
from .records import Question, SearchResult
from .router import Domain, Dynamism

__version__ = "0.1.0"

__all__ = ["RunConfig", "load_dataset", "run_pipeline", "Question", "SearchResult", "Domain", "Dynamism"]
