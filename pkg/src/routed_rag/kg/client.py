from __future__ import annotations

from typing import Protocol

import httpx

from .handlers import handle_call
from .registry import Registry
from .store import KgStore


class KgClient(Protocol):
    def call(self, domain: str, api_name: str, params: dict) -> dict: ...


class LocalKgClient:
    """In-process client; same responses as the HTTP service without a socket."""

    def __init__(self, store: KgStore, registry: Registry | None = None):
        self.store = store
        self.registry = registry or Registry.default()

    def call(self, domain: str, api_name: str, params: dict) -> dict:
        spec = self.registry.get(api_name)
        if spec is None or spec.domain != domain:
            return {"error": "unknown_api"}
        return handle_call(api_name, params, self.store, self.registry)


class HttpKgClient:
    def __init__(self, base_url: str, timeout: float = 30.0, transport: httpx.BaseTransport | None = None):
        self.base_url = base_url.rstrip("/")
        self._http = httpx.Client(timeout=timeout, transport=transport)

    def call(self, domain: str, api_name: str, params: dict) -> dict:
        resp = self._http.post(f"{self.base_url}/api/{domain}/{api_name}", json=params)
        return resp.json()

    def close(self) -> None:
        self._http.close()
