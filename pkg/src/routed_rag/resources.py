"""Access to the JSON/JSONL data shipped inside the package."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    return Path(str(resources.files("routed_rag") / "data" / name))


def load_json(name: str):
    return json.loads(data_path(name).read_text(encoding="utf-8"))
