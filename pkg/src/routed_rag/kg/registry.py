"""API specifications shared by the mock service and the API planner."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType

from ..resources import load_json

_TYPES = {"str": str, "int": int, "float": (int, float), "bool": bool}
CASE_RULES = ("upper", "lower", "fold", "none")


class BadParams(ValueError):
    pass


@dataclass(frozen=True)
class ParamSpec:
    type: str = "str"
    required: bool = True
    case: str = "none"


@dataclass(frozen=True)
class ApiSpec:
    name: str
    domain: str
    params: Mapping[str, ParamSpec]
    description: str = ""
    result: str = ""

    def validate(self, params: object) -> dict:
        """Check ``params`` against the schema and apply case rules.

        Raises BadParams describing the first problem found.
        """
        if not isinstance(params, dict):
            raise BadParams("parameters must be a JSON object")
        unknown = sorted(set(params) - set(self.params))
        if unknown:
            raise BadParams(f"unknown parameter(s) {unknown} for {self.name}")
        out = {}
        for pname, spec in self.params.items():
            if pname not in params or params[pname] is None:
                if spec.required:
                    raise BadParams(f"missing required parameter {pname!r}")
                continue
            value = params[pname]
            expected = _TYPES[spec.type]
            if not isinstance(value, expected) or (spec.type != "bool" and isinstance(value, bool)):
                raise BadParams(f"parameter {pname!r} must be {spec.type}")
            if isinstance(value, str):
                value = value.strip()
                if spec.required and not value:
                    raise BadParams(f"parameter {pname!r} must be nonempty")
                if spec.case == "upper":
                    value = value.upper()
                elif spec.case == "lower":
                    value = value.lower()
                elif spec.case == "fold":
                    value = " ".join(value.casefold().split())
            out[pname] = value
        return out


class Registry:
    def __init__(self, specs: Iterable[ApiSpec]):
        self._specs: dict[str, ApiSpec] = {}
        for spec in specs:
            if spec.name in self._specs:
                raise ValueError(f"duplicate API name {spec.name!r}")
            self._specs[spec.name] = spec

    @classmethod
    def from_records(cls, records: list[dict]) -> "Registry":
        specs = []
        for r in records:
            params = {}
            for pname, p in r.get("params", {}).items():
                if p.get("type", "str") not in _TYPES or p.get("case", "none") not in CASE_RULES:
                    raise ValueError(f"bad parameter spec {pname!r} in {r['name']}")
                params[pname] = ParamSpec(p.get("type", "str"), p.get("required", True), p.get("case", "none"))
            specs.append(
                ApiSpec(r["name"], r["domain"], MappingProxyType(params), r.get("description", ""), r.get("result", ""))
            )
        return cls(specs)

    @classmethod
    def from_file(cls, path: str | Path) -> "Registry":
        return cls.from_records(json.loads(Path(path).read_text(encoding="utf-8")))

    @classmethod
    def default(cls) -> "Registry":
        return _default_registry()

    def get(self, name: str) -> ApiSpec | None:
        return self._specs.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._specs

    def __iter__(self):
        return iter(self._specs.values())

    def for_domain(self, domain: str) -> list[ApiSpec]:
        return [s for s in self._specs.values() if s.domain == domain]


@lru_cache(maxsize=1)
def _default_registry() -> Registry:
    return Registry.from_records(load_json("registry.json"))
