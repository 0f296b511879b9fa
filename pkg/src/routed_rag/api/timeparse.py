"""Resolve the first temporal expression in a question against its query time.

The pattern table is ordered and the first pattern that matches anywhere in
the text wins. All results are expressed in the query time's own zone, with
day-level bounds at local midnight. Interval ends are inclusive days.

=====================  =========================================================
phrase                 resolution
=====================  =========================================================
YYYY-MM-DD             that day
Month D, YYYY          that day (full or abbreviated month names)
N days ago             the day N days before
N weeks ago            the Monday-Sunday week containing the day 7N days before
N months ago           the calendar month N months before
N years ago            the calendar year N years before
yesterday/today/...    the day before / same day / day after
last/this/next week    Monday-Sunday week before / containing / after
last/this/next month   calendar month before / containing / after
last/this/next year    calendar year before / containing / after
(nothing)              the query time itself, granularity minute
=====================  =========================================================
"""

from __future__ import annotations

import calendar
import re
from collections.abc import Callable
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta

DEFAULT_PROVENANCE = "default-query-time"


@dataclass(frozen=True)
class TimeSpec:
    kind: str  # instant | interval | default
    start: datetime
    granularity: str  # minute | day | week | month | year
    provenance: str
    end: datetime | None = None

    def __post_init__(self):
        if self.kind == "interval" and (self.end is None or self.end < self.start):
            raise ValueError("interval needs end >= start")

    @property
    def days(self) -> tuple[date, date]:
        return self.start.date(), (self.end or self.start).date()


# spelled out: calendar.month_name follows the process locale
_MONTH_NAMES = (
    "january february march april may june july august september october november december"
).split()
_MONTHS = {name: i for i, full in enumerate(_MONTH_NAMES, 1) for name in (full, full[:3])}
_MONTHS["sept"] = 9
_NUMBER_WORDS = {
    "a": 1, "an": 1, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5, "six": 6,
    "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11, "twelve": 12,
}
_MONTH_RE = "|".join(sorted(_MONTHS, key=len, reverse=True))
_NUM_RE = r"\d+|" + "|".join(sorted(_NUMBER_WORDS, key=len, reverse=True))


def _shift_month(d: date, months: int) -> tuple[int, int]:
    idx = d.year * 12 + (d.month - 1) + months
    return idx // 12, idx % 12 + 1


def _month_span(year: int, month: int) -> tuple[date, date]:
    return date(year, month, 1), date(year, month, calendar.monthrange(year, month)[1])


def _week_span(d: date) -> tuple[date, date]:
    monday = d - timedelta(days=d.weekday())
    return monday, monday + timedelta(days=6)


def _year_span(year: int) -> tuple[date, date]:
    return date(year, 1, 1), date(year, 12, 31)


_Resolved = tuple[str, date, date | None]  # granularity, first day, last day (None = instant)
_Resolver = Callable[[re.Match, date], _Resolved | None]


def _iso(m: re.Match, _today: date) -> _Resolved | None:
    try:
        return "day", date(int(m[1]), int(m[2]), int(m[3])), None
    except ValueError:
        return None


def _month_day_year(m: re.Match, _today: date) -> _Resolved | None:
    try:
        return "day", date(int(m[3]), _MONTHS[m[1].lower()], int(m[2])), None
    except ValueError:
        return None


def _ago(m: re.Match, today: date) -> _Resolved:
    raw = m[1].lower()
    n = _NUMBER_WORDS[raw] if raw in _NUMBER_WORDS else int(raw)
    unit = m[2].lower()
    if unit == "day":
        return "day", today - timedelta(days=n), None
    if unit == "week":
        return ("week", *_week_span(today - timedelta(weeks=n)))
    if unit == "month":
        return ("month", *_month_span(*_shift_month(today, -n)))
    return ("year", *_year_span(today.year - n))


def _day_offset(offset: int) -> _Resolver:
    return lambda m, today: ("day", today + timedelta(days=offset), None)


_REL = {"last": -1, "previous": -1, "this": 0, "next": 1}


def _relative(m: re.Match, today: date) -> _Resolved:
    step = _REL[m[1].lower()]
    unit = m[2].lower()
    if unit == "week":
        return ("week", *_week_span(today + timedelta(weeks=step)))
    if unit == "month":
        return ("month", *_month_span(*_shift_month(today, step)))
    return ("year", *_year_span(today.year + step))


PATTERNS: list[tuple[str, re.Pattern[str], _Resolver]] = [
    ("iso-date", re.compile(r"(?<!\d)(\d{4})-(\d{1,2})-(\d{1,2})(?!\d)"), _iso),
    (
        "month-day-year",
        re.compile(rf"\b({_MONTH_RE})\.?\s+(\d{{1,2}})(?:st|nd|rd|th)?,?\s+(\d{{4}})\b", re.I),
        _month_day_year,
    ),
    ("ago", re.compile(rf"\b({_NUM_RE})\s+(day|week|month|year)s?\s+ago\b", re.I), _ago),
    ("yesterday", re.compile(r"\byesterday\b", re.I), _day_offset(-1)),
    ("today", re.compile(r"\btoday\b", re.I), _day_offset(0)),
    ("tomorrow", re.compile(r"\btomorrow\b", re.I), _day_offset(1)),
    ("relative-period", re.compile(r"\b(last|previous|this|next)\s+(week|month|year)\b", re.I), _relative),
]


def default_time(query_time: datetime) -> TimeSpec:
    return TimeSpec("default", query_time, "minute", DEFAULT_PROVENANCE)


def extract_time(question_text: str, query_time: datetime) -> TimeSpec:
    if query_time.tzinfo is None:
        raise ValueError("query_time must be timezone-aware")
    tz = query_time.tzinfo
    today = query_time.date()
    for _name, pattern, resolve in PATTERNS:
        for m in pattern.finditer(question_text):
            try:
                resolved = resolve(m, today)
            except (ValueError, OverflowError):
                resolved = None  # "99999 years ago" leaves the calendar
            if resolved is None:
                continue  # e.g. 2024-02-30: keep scanning
            granularity, first, last = resolved
            start = datetime.combine(first, time(0), tzinfo=tz)
            if last is None:
                return TimeSpec("instant", start, granularity, m[0])
            end = datetime.combine(last, time(0), tzinfo=tz)
            return TimeSpec("interval", start, granularity, m[0], end)
    return default_time(query_time)
