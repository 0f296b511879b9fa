"""API extraction chain: NER, entity match, time resolution, API selection,
execution, and Markdown rendering."""

from .execution import ApiResult, execute_calls
from .markdown import json_to_markdown
from .matching import Lexicon, NoMatch, canonicalize, load_lexicons, match_entities, match_entity
from .ner import Entity, NotApplicable, build_ner_prompt, parse_ner_output, render_entities
from .selection import ApiCallPlan, ApiRule, load_rules, select_apis, time_param
from .timeparse import TimeSpec, default_time, extract_time

__all__ = [
    "ApiResult", "execute_calls", "json_to_markdown", "Lexicon", "NoMatch", "canonicalize",
    "load_lexicons", "match_entities", "match_entity", "Entity", "NotApplicable", "build_ner_prompt",
    "parse_ner_output", "render_entities", "ApiCallPlan", "ApiRule", "load_rules", "select_apis",
    "time_param", "TimeSpec", "default_time", "extract_time",
]
