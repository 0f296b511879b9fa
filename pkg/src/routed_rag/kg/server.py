"""HTTP front end for the mock KG: ``POST /api/{domain}/{api_name}``."""

from __future__ import annotations

import json
import logging
import threading
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .handlers import handle_call
from .registry import Registry
from .store import KgStore

log = logging.getLogger(__name__)

MAX_BODY = 1 << 20


def encode(doc: object) -> bytes:
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def _status(doc: dict) -> HTTPStatus:
    err = doc.get("error")
    if err is None:
        return HTTPStatus.OK
    if err == "unknown_api":
        return HTTPStatus.NOT_FOUND
    if err == "bad_params":
        return HTTPStatus.BAD_REQUEST
    return HTTPStatus.INTERNAL_SERVER_ERROR


class _Handler(BaseHTTPRequestHandler):
    server: "KgHTTPServer"
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        log.debug("%s - %s", self.address_string(), fmt % args)

    def _send(self, status: HTTPStatus, doc: dict) -> None:
        body = encode(doc)
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        parts = self.path.split("?", 1)[0].strip("/").split("/")
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(min(length, MAX_BODY)) if length else b""
        if len(parts) != 3 or parts[0] != "api":
            self._send(HTTPStatus.NOT_FOUND, {"error": "not_found"})
            return
        _, domain, api_name = parts
        spec = self.server.registry.get(api_name)
        if spec is None or spec.domain != domain:
            self._send(HTTPStatus.NOT_FOUND, {"error": "unknown_api"})
            return
        try:
            params = json.loads(raw.decode("utf-8")) if raw else {}
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            self._send(HTTPStatus.BAD_REQUEST, {"error": "bad_params", "detail": f"body is not JSON: {exc}"})
            return
        doc = handle_call(api_name, params, self.server.store, self.server.registry)
        self._send(_status(doc), doc)

    def _not_allowed(self):
        self._send(HTTPStatus.METHOD_NOT_ALLOWED, {"error": "method_not_allowed"})

    do_GET = do_PUT = do_DELETE = do_PATCH = _not_allowed


class KgHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], store: KgStore, registry: Registry | None = None):
        self.store = store
        self.registry = registry or Registry.default()
        super().__init__(address, _Handler)

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"


def serve(store: KgStore, bind_address: tuple[str, int] = ("127.0.0.1", 8000),
          registry: Registry | None = None) -> KgHTTPServer:
    """Bind and return the server; call ``serve_forever`` (or use KgService)."""
    try:
        return KgHTTPServer(bind_address, store, registry)
    except OSError as exc:
        raise RuntimeError(f"cannot bind mock KG service to {bind_address}: {exc}") from exc


class KgService:
    """Runs the server on a background thread; usable as a context manager."""

    def __init__(self, store: KgStore, host: str = "127.0.0.1", port: int = 0,
                 registry: Registry | None = None):
        self.server = serve(store, (host, port), registry)
        self._thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        return self.server.url

    def start(self) -> "KgService":
        self._thread.start()
        return self

    def stop(self) -> None:
        self.server.shutdown()
        self.server.server_close()
        self._thread.join(timeout=5)

    def __enter__(self) -> "KgService":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
