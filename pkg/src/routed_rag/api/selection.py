"""Rule-based API selection.

A rule names an API, the entity kinds that fill its parameters, optional
cue phrases (at least one must occur in the question when given), and the
parameters that take the resolved time. Rules live in ``api_rules.json``.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass, field

from ..kg.registry import BadParams, Registry
from ..resources import load_json
from ..router import Domain
from .ner import Entity
from .timeparse import TimeSpec


@dataclass(frozen=True)
class ApiRule:
    domain: str
    api: str
    params: dict[str, str]
    cues: tuple[str, ...] = ()
    time_params: tuple[str, ...] = ()

    def cue_hit(self, question_text: str) -> bool:
        if not self.cues:
            return True
        folded = question_text.casefold()
        return any(
            re.search(r"(?<!\w)" + r"\s+".join(map(re.escape, c.casefold().split())) + r"(?!\w)", folded)
            for c in self.cues
        )


@dataclass(frozen=True)
class ApiCallPlan:
    api: str
    domain: str
    params: dict
    entities: tuple[Entity, ...] = field(default_factory=tuple)


def load_rules(records: list[dict] | None = None) -> list[ApiRule]:
    records = records if records is not None else load_json("api_rules.json")
    return [
        ApiRule(r["domain"], r["api"], dict(r["params"]), tuple(r.get("cues", ())), tuple(r.get("time_params", ())))
        for r in records
    ]


def time_param(spec: TimeSpec) -> str:
    """Day-resolution date filter string for an API parameter."""
    first, last = spec.days
    if spec.kind == "interval" and last != first:
        return f"{first.isoformat()}..{last.isoformat()}"
    return first.isoformat()


def select_apis(
    domain: Domain | str,
    entities: Sequence[Entity],
    time: TimeSpec,
    question_text: str,
    registry: Registry,
    rules: Sequence[ApiRule] | None = None,
) -> list[ApiCallPlan]:
    """Plans for every rule whose entity kinds are present and cues match.

    Only matched entities (with a canonical value) fill parameters. The
    first parameter fans out over every distinct value of its kind; any
    others take the first value.
    """
    domain = Domain(domain)
    if domain is Domain.OPEN:
        return []
    by_kind: dict[str, list[Entity]] = {}
    for e in entities:
        if e.kind and e.canonical:
            bucket = by_kind.setdefault(e.kind, [])
            if all(x.canonical != e.canonical for x in bucket):
                bucket.append(e)
    if not by_kind:
        return []
    plans = []
    for rule in rules if rules is not None else load_rules():
        if rule.domain != domain.value or not rule.cue_hit(question_text):
            continue
        spec = registry.get(rule.api)
        if spec is None or not rule.params:
            continue
        names = list(rule.params)
        if any(rule.params[n] not in by_kind for n in names):
            continue
        head, rest = names[0], names[1:]
        for lead in by_kind[rule.params[head]]:
            used = [lead] + [by_kind[rule.params[n]][0] for n in rest]
            params = {head: lead.canonical, **{n: by_kind[rule.params[n]][0].canonical for n in rest}}
            for tp in rule.time_params:
                params[tp] = time_param(time)
            try:
                spec.validate(params)
            except BadParams:
                continue
            plans.append(ApiCallPlan(rule.api, domain.value, params, tuple(used)))
    return plans
