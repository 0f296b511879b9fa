from __future__ import annotations

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..kg.client import KgClient
from .markdown import json_to_markdown
from .selection import ApiCallPlan

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ApiResult:
    api: str
    raw: object
    markdown: str
    success: bool
    params: dict | None = None


def _run(plan: ApiCallPlan, client: KgClient) -> ApiResult:
    try:
        resp = client.call(plan.domain, plan.api, plan.params)
    except Exception as exc:
        log.warning("API call %s failed: %s", plan.api, exc)
        return ApiResult(plan.api, {"error": "transport", "detail": str(exc)}, "", False, plan.params)
    ok = isinstance(resp, dict) and "error" not in resp and resp.get("result") is not None
    markdown = json_to_markdown(resp["result"]) if ok else ""
    return ApiResult(plan.api, resp, markdown, ok, plan.params)


def execute_calls(plans: Sequence[ApiCallPlan], client: KgClient, max_workers: int = 8) -> list[ApiResult]:
    """One result per plan, in plan order; failures are recorded, not raised."""
    if not plans:
        return []
    if len(plans) == 1:
        return [_run(plans[0], client)]
    with ThreadPoolExecutor(max_workers=min(max_workers, len(plans))) as pool:
        return list(pool.map(lambda p: _run(p, client), plans))
