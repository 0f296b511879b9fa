"""Fixture-driven mock knowledge-graph API service."""

from .client import HttpKgClient, KgClient, LocalKgClient
from .handlers import HANDLERS, handle_call
from .registry import ApiSpec, BadParams, ParamSpec, Registry
from .server import KgHTTPServer, KgService, serve
from .store import BARS_PER_DAY, TABLE_SCHEMAS, FixtureError, KgStore, default_fixtures_dir, load_fixtures

__all__ = [
    "HttpKgClient", "KgClient", "LocalKgClient", "HANDLERS", "handle_call", "ApiSpec", "BadParams",
    "ParamSpec", "Registry", "KgHTTPServer", "KgService", "serve", "BARS_PER_DAY", "TABLE_SCHEMAS",
    "FixtureError", "KgStore", "default_fixtures_dir", "load_fixtures",
]
