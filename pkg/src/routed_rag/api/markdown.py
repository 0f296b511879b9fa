"""Render API JSON as Markdown an LLM reads easily.

* objects become ``- key: value`` bullet lists,
* lists of objects sharing one key set become tables (columns in the first
  object's key order),
* other lists become ``- item`` bullets,
* containers three levels down are written inline as compact JSON.
"""

from __future__ import annotations

import json

MAX_DEPTH = 3


def _compact(value) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(",", ":"))


def _scalar(value) -> str:
    if isinstance(value, str):
        return " ".join(value.split()) if "\n" in value else value
    return _compact(value)


def _cell(value) -> str:
    text = _scalar(value) if not isinstance(value, (dict, list)) else _compact(value)
    return text.replace("|", "\\|").replace("\n", " ")


def _uniform_objects(value) -> bool:
    return (
        isinstance(value, list)
        and len(value) > 0
        and all(isinstance(v, dict) and v for v in value)
        and all(set(v) == set(value[0]) for v in value)
    )


def _table(rows: list[dict], indent: str) -> list[str]:
    cols = list(rows[0])
    out = [
        indent + "| " + " | ".join(_cell(c) for c in cols) + " |",
        indent + "|" + "|".join(" --- " for _ in cols) + "|",
    ]
    out.extend(indent + "| " + " | ".join(_cell(r[c]) for c in cols) + " |" for r in rows)
    return out


def _render(value, depth: int, indent: str) -> list[str]:
    if not isinstance(value, (dict, list)):
        return [indent + _scalar(value)]
    if depth >= MAX_DEPTH:
        return [indent + _compact(value)]
    if not value:
        return [indent + _compact(value)]
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and depth + 1 < MAX_DEPTH:
                lines.append(f"{indent}- {k}:")
                lines.extend(_render(v, depth + 1, indent + "  "))
            elif isinstance(v, (dict, list)):
                lines.append(f"{indent}- {k}: {_compact(v)}")
            else:
                lines.append(f"{indent}- {k}: {_scalar(v)}")
        return lines
    if _uniform_objects(value):
        return _table(value, indent)
    lines = []
    for item in value:
        if isinstance(item, (dict, list)) and item and depth + 1 < MAX_DEPTH:
            lines.append(f"{indent}-")
            lines.extend(_render(item, depth + 1, indent + "  "))
        elif isinstance(item, (dict, list)):
            lines.append(f"{indent}- {_compact(item)}")
        else:
            lines.append(f"{indent}- {_scalar(item)}")
    return lines


def json_to_markdown(doc) -> str:
    return "\n".join(_render(doc, 1, ""))
