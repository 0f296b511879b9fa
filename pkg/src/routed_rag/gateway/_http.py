from __future__ import annotations

import logging
import threading

import httpx

log = logging.getLogger(__name__)

DEFAULT_MAX_IN_FLIGHT = 8


class GatewayError(RuntimeError):
    """A model backend failed; ``backend`` names which one."""

    def __init__(self, backend: str, message: str):
        super().__init__(f"[{backend}] {message}")
        self.backend = backend


class ProtocolError(GatewayError):
    """The backend answered, but not in the expected wire format."""


class JsonPoster:
    """POSTs JSON with a bounded retry budget and an in-flight limit.

    Retries cover transport errors and 5xx responses only. ``retries`` counts
    extra attempts, so a request is sent at most ``retries + 1`` times.
    """

    def __init__(
        self,
        backend_id: str,
        url: str,
        *,
        timeout: float = 60.0,
        retries: int = 2,
        max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
        headers: dict[str, str] | None = None,
        transport: httpx.BaseTransport | None = None,
    ):
        self.backend_id = backend_id
        self.url = url
        self.retries = max(0, retries)
        self._slots = threading.BoundedSemaphore(max(1, max_in_flight))
        self._client = httpx.Client(timeout=timeout, headers=headers, transport=transport)
        self.attempts = 0
        self._count = threading.Lock()

    def post(self, payload: dict) -> dict:
        last: Exception | None = None
        for attempt in range(self.retries + 1):
            with self._slots:
                with self._count:
                    self.attempts += 1
                try:
                    resp = self._client.post(self.url, json=payload)
                except httpx.HTTPError as exc:
                    last = exc
                    log.warning("%s attempt %d failed: %s", self.backend_id, attempt + 1, exc)
                    continue
            if resp.status_code >= 500:
                last = GatewayError(self.backend_id, f"HTTP {resp.status_code}")
                continue
            if resp.status_code >= 400:
                raise GatewayError(self.backend_id, f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()
            except ValueError as exc:
                raise ProtocolError(self.backend_id, f"response is not JSON: {exc}") from exc
        raise GatewayError(self.backend_id, f"gave up after {self.retries + 1} attempts: {last}")

    def close(self) -> None:
        self._client.close()
