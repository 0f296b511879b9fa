"""API handlers over a KgStore, dispatched by registry name."""

from __future__ import annotations

import json
import logging
from collections.abc import Callable
from datetime import date, datetime, time, timedelta
from zoneinfo import ZoneInfo

from .registry import BadParams, Registry
from .store import KgStore

log = logging.getLogger(__name__)

MARKET_TZ = ZoneInfo("America/New_York")
MARKET_OPEN = time(9, 30)
HISTORY_DAYS = 5

Handler = Callable[[KgStore, dict], object]
HANDLERS: dict[str, Handler] = {}


def handler(name: str):
    def register(fn: Handler) -> Handler:
        HANDLERS[name] = fn
        return fn

    return register


def _bar_record(day: str, minute: int, bar: list) -> dict:
    start = datetime.combine(date.fromisoformat(day), MARKET_OPEN, tzinfo=MARKET_TZ)
    ts = start + timedelta(minutes=minute)
    o, h, l, c, v = bar
    return {
        "datetime": ts.strftime("%Y-%m-%d %H:%M:%S %Z"),
        "open": o, "high": h, "low": l, "close": c, "volume": v,
    }


@handler("get_detailed_price_history")
def detailed_price_history(store: KgStore, p: dict):
    days = store.index["bars"].get(p["ticker_name"])
    if not days:
        return None
    return [_bar_record(d["date"], i, bar) for d in days[-HISTORY_DAYS:] for i, bar in enumerate(d["bars"])]


@handler("get_price_history")
def price_history(store: KgStore, p: dict):
    days = store.index["bars"].get(p["ticker_name"])
    if not days:
        return None
    out = []
    for d in days:
        bars = d["bars"]
        out.append({
            "date": d["date"],
            "open": bars[0][0],
            "high": max(b[1] for b in bars),
            "low": min(b[2] for b in bars),
            "close": bars[-1][3],
            "volume": sum(b[4] for b in bars),
        })
    return out


def _company_field(field: str, default=None) -> Handler:
    def fn(store: KgStore, p: dict):
        rec = store.index["company"].get(p["ticker_name"])
        return None if rec is None else rec.get(field, default)

    return fn


HANDLERS["get_market_capitalization"] = _company_field("market_cap")
HANDLERS["get_dividends_history"] = _company_field("dividends", [])
HANDLERS["get_pe_ratio"] = _company_field("pe_ratio")
HANDLERS["get_company_name"] = _company_field("name")


@handler("get_artist_all_works")
def artist_works(store: KgStore, p: dict):
    rec = store.index["artist"].get(p["artist_name"])
    return None if rec is None else sorted(rec.get("works", []), key=lambda w: (w["year"], w["title"]))


@handler("get_artist_birth_date")
def artist_birth_date(store: KgStore, p: dict):
    rec = store.index["artist"].get(p["artist_name"])
    return None if rec is None else rec.get("birth_date")


@handler("get_members")
def band_members(store: KgStore, p: dict):
    rec = store.index["artist"].get(p["band_name"])
    if rec is None or rec["kind"] != "band":
        return None
    return rec.get("members", [])


@handler("get_song_release_date")
def song_release_date(store: KgStore, p: dict):
    rec = store.index["song"].get(p["song_name"])
    return None if rec is None else rec["release_date"]


@handler("get_song_author")
def song_author(store: KgStore, p: dict):
    rec = store.index["song"].get(p["song_name"])
    return None if rec is None else {"artist": rec["artist"], "writers": rec.get("writers", [])}


@handler("get_movie_info")
def movie_info(store: KgStore, p: dict):
    rec = store.index["movie"].get(p["movie_name"])
    return None if rec is None else dict(rec)


@handler("get_person_info")
def person_info(store: KgStore, p: dict):
    rec = store.index["person"].get(p["person_name"])
    return None if rec is None else dict(rec)


def _date_filter(spec: str | None) -> Callable[[str], bool]:
    if not spec:
        return lambda d: True
    if ".." in spec:
        lo, hi = (s.strip() for s in spec.split("..", 1))
        for s in (lo, hi):
            try:
                date.fromisoformat(s)
            except ValueError:
                raise BadParams(f"bad date range {spec!r}") from None
        return lambda d: lo <= d <= hi
    if len(spec) not in (4, 7, 10) or not spec[:4].isdigit():
        raise BadParams(f"bad date prefix {spec!r}")
    return lambda d: d.startswith(spec)


def _games(table: str) -> Handler:
    def fn(store: KgStore, p: dict):
        team = p["team_name"]
        keep = _date_filter(p.get("date"))
        rows = store.table(table)
        known = any(" ".join(r[side].casefold().split()) == team for r in rows for side in ("home", "away"))
        if not known:
            return None
        return [
            dict(r)
            for r in sorted(rows, key=lambda r: r["date"])
            if team in (" ".join(r["home"].casefold().split()), " ".join(r["away"].casefold().split()))
            and keep(r["date"])
        ]

    return fn


HANDLERS["get_nba_games"] = _games("sports_nba_games")
HANDLERS["get_soccer_games"] = _games("sports_soccer_games")


def handle_call(api_name: str, params: object, store: KgStore, registry: Registry | None = None) -> dict:
    """Dispatch one API call; always returns a JSON-serializable dict.

    ``{"result": value}`` on success (``value`` is null for unknown
    entities), ``{"error": "unknown_api"}`` or ``{"error": "bad_params",
    "detail": ...}`` otherwise.
    """
    registry = registry or Registry.default()
    spec = registry.get(api_name)
    fn = HANDLERS.get(api_name)
    if spec is None or fn is None:
        return {"error": "unknown_api"}
    try:
        clean = spec.validate(params)
        result = fn(store, clean)
    except BadParams as exc:
        return {"error": "bad_params", "detail": str(exc)}
    except Exception:  # a handler bug must not take the service down
        log.exception("handler %s failed", api_name)
        return {"error": "internal"}
    # round-trip detaches the response from the store's records
    return {"result": json.loads(json.dumps(result))}
