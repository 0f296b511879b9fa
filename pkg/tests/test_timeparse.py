from datetime import datetime, timedelta, timezone
from zoneinfo import ZoneInfo

import pytest
from hypothesis import given
from hypothesis import strategies as st

from routed_rag.api import TimeSpec, extract_time

EST = timezone(timedelta(hours=-5))
QT = datetime(2024, 2, 28, 10, 0, tzinfo=EST)  # a Wednesday
LA = ZoneInfo("America/Los_Angeles")


def day(y, m, d, tz=EST):
    return datetime(y, m, d, tzinfo=tz)


def instant(y, m, d, phrase, tz=EST):
    return TimeSpec("instant", day(y, m, d, tz), "day", phrase)


def span(a, b, gran, phrase, tz=EST):
    return TimeSpec("interval", day(*a, tz=tz), gran, phrase, day(*b, tz=tz))


# (question, query_time, expected) resolved by hand from the resolution table
VECTORS = [
    ("What was the close yesterday?", QT, instant(2024, 2, 27, "yesterday")),
    ("Any games today?", QT, instant(2024, 2, 28, "today")),
    ("Who plays tomorrow?", QT, instant(2024, 2, 29, "tomorrow")),
    ("How did they do last week?", QT, span((2024, 2, 19), (2024, 2, 25), "week", "last week")),
    ("and the previous week?", QT, span((2024, 2, 19), (2024, 2, 25), "week", "previous week")),
    ("Games this week", QT, span((2024, 2, 26), (2024, 3, 3), "week", "this week")),
    ("Games next week", QT, span((2024, 3, 4), (2024, 3, 10), "week", "next week")),
    ("Sales last month", QT, span((2024, 1, 1), (2024, 1, 31), "month", "last month")),
    ("Sales this month", QT, span((2024, 2, 1), (2024, 2, 29), "month", "this month")),
    ("Sales next month", QT, span((2024, 3, 1), (2024, 3, 31), "month", "next month")),
    ("Revenue last year", QT, span((2023, 1, 1), (2023, 12, 31), "year", "last year")),
    ("Revenue this year", QT, span((2024, 1, 1), (2024, 12, 31), "year", "this year")),
    ("Revenue next year", QT, span((2025, 1, 1), (2025, 12, 31), "year", "next year")),
    ("What happened 3 days ago?", QT, instant(2024, 2, 25, "3 days ago")),
    ("What happened two weeks ago?", QT, span((2024, 2, 12), (2024, 2, 18), "week", "two weeks ago")),
    ("Price a month ago", QT, span((2024, 1, 1), (2024, 1, 31), "month", "a month ago")),
    ("Price 12 months ago", QT, span((2023, 2, 1), (2023, 2, 28), "month", "12 months ago")),
    ("Who won 5 years ago?", QT, span((2019, 1, 1), (2019, 12, 31), "year", "5 years ago")),
    ("Close on 2024-01-15", QT, instant(2024, 1, 15, "2024-01-15")),
    ("Close on March 5, 2023", QT, instant(2023, 3, 5, "March 5, 2023")),
    ("Close on Mar 5 2023", QT, instant(2023, 3, 5, "Mar 5 2023")),
    ("Released Jan 31st, 2024?", QT, instant(2024, 1, 31, "Jan 31st, 2024")),
    ("What was it YESTERDAY", QT, instant(2024, 2, 27, "YESTERDAY")),
    # first pattern in table order wins, not first in the text
    ("yesterday, or on 2024-01-15?", QT, instant(2024, 1, 15, "2024-01-15")),
    ("last week compared to today", QT, instant(2024, 2, 28, "today")),
    # impossible dates are skipped and scanning continues
    ("on 2024-02-30 or yesterday", QT, instant(2024, 2, 27, "yesterday")),
    ("on 2024-02-30 or 2024-02-29", QT, instant(2024, 2, 29, "2024-02-29")),
    # year and month boundaries
    ("last month", day(2024, 1, 1), span((2023, 12, 1), (2023, 12, 31), "month", "last month")),
    ("yesterday", day(2024, 1, 1), instant(2023, 12, 31, "yesterday")),
    ("this week", day(2024, 3, 3), span((2024, 2, 26), (2024, 3, 3), "week", "this week")),
    # bounds are local midnight in the query time's own zone, across a DST change
    ("tomorrow", datetime(2024, 3, 10, 1, 0, tzinfo=LA), instant(2024, 3, 11, "tomorrow", tz=LA)),
]


@pytest.mark.parametrize("text,qt,expected", VECTORS, ids=[v[0] for v in VECTORS])
def test_resolution_vectors(text, qt, expected):
    assert extract_time(text, qt) == expected


def test_default_is_query_time():
    spec = extract_time("Who directed Titanic?", QT)
    assert spec == TimeSpec("default", QT, "minute", "default-query-time")


def test_naive_query_time_rejected():
    with pytest.raises(ValueError):
        extract_time("today", datetime(2024, 2, 28))


def test_huge_offsets_fall_through():
    assert extract_time("99999 years ago", QT).kind == "default"


def test_interval_invariant():
    with pytest.raises(ValueError):
        TimeSpec("interval", day(2024, 2, 2), "day", "x", day(2024, 2, 1))


@given(st.text(max_size=80))
def test_pure_and_well_formed(text):
    a, b = extract_time(text, QT), extract_time(text, QT)
    assert a == b
    assert a.start.tzinfo is not None
    if a.kind == "interval":
        assert a.start <= a.end
    if a.kind == "default":
        assert a.start == QT
