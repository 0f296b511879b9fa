"""Dataset loading, run configuration, pipeline orchestration, and the CLI."""

from .config import ABLATIONS, RunConfig
from .dataset import DatasetError, load_dataset, parse_query_time
from .pipeline import (
    ABLATION_STAGE,
    STAGES,
    QuestionRecord,
    RunReport,
    Services,
    answer_question,
    build_services,
    downstream,
    run_pipeline,
)

__all__ = [
    "ABLATIONS", "RunConfig", "DatasetError", "load_dataset", "parse_query_time", "ABLATION_STAGE",
    "STAGES", "QuestionRecord", "RunReport", "Services", "answer_question", "build_services",
    "downstream", "run_pipeline",
]
