"""Regenerate the bundled data files from a fixed seed.

Writes, under src/routed_rag/data/:
  fixtures/*.json       mock knowledge-graph tables
  mini_dataset.jsonl    10 questions with search results
  parser_corpus/*.html  50 pages for the parser benchmark
  stub_script.json      scripted LLM replies for the mini-dataset

Run from the repository root: ``python3 tools/build_fixtures.py``.
"""

from __future__ import annotations

import html
import json
import random
import re
from pathlib import Path

SEED = 20240228
DATA = Path(__file__).resolve().parents[1] / "src" / "routed_rag" / "data"
TRADING_DAYS = ["2024-02-20", "2024-02-21", "2024-02-22", "2024-02-23", "2024-02-26", "2024-02-27"]
QUERY_TIME = "02/28/2024, 10:00:00 PT"

WORDS = """the a of and to in is was for on that with as by at from it this which be are
has had have were its their an or not but also more than other into over after such
city region history council market season report public early later many several
local national river valley north south east west century period system group people
school station museum bridge company village district county area park coast island
road railway library hospital festival building population culture language church
government economy trade industry community tradition architecture climate harbor
agriculture education research network service theatre garden mountain forest
annual record original modern former central major popular general common official
development construction project program committee member family village tower""".split()

MONTHS = "January February March April May June July August September October November December".split()


def sentence(rng: random.Random, n: int | None = None) -> str:
    words = [rng.choice(WORDS) for _ in range(n or rng.randint(8, 16))]
    return " ".join(words).capitalize() + "."


def paragraph(rng: random.Random, sentences: int) -> str:
    return " ".join(sentence(rng) for _ in range(sentences))


def page_html(title: str, paragraphs: list[str], rng: random.Random, chrome: bool = True) -> str:
    nav = ""
    foot = ""
    if chrome:
        links = "".join(f'<li><a href="/{w}">{w.title()}</a></li>' for w in rng.sample(WORDS, 6))
        nav = f'<nav class="navbar"><ul>{links}</ul></nav>'
        foot = '<footer id="footer"><p>Copyright notice and terms of use apply to this site.</p></footer>'
    body = "".join(f"<p>{html.escape(p)}</p>" for p in paragraphs)
    return (
        f"<!DOCTYPE html><html><head><title>{html.escape(title)}</title>"
        f"<script>var tracking = {{id: {rng.randint(1, 9999)}}};</script></head>"
        f"<body>{nav}<article><h1>{html.escape(title)}</h1>{body}</article>{foot}</body></html>"
    )


def search_result(title: str, url: str, paragraphs: list[str], rng: random.Random) -> dict:
    return {
        "page_name": title,
        "page_url": url,
        "page_snippet": paragraphs[0][:160] if paragraphs else "",
        "page_last_modified": f"2024-0{rng.randint(1, 2)}-{rng.randint(10, 27)} 12:00:00",
        "page_result": page_html(title, paragraphs, rng),
    }


# -- knowledge graph ---------------------------------------------------------

def minute_bars(rng: random.Random, start: float) -> tuple[list[list], float]:
    bars, price = [], start
    for _ in range(390):
        o = price
        c = max(1.0, o + rng.gauss(0, o * 0.0008))
        h = max(o, c) + abs(rng.gauss(0, o * 0.0004))
        l = min(o, c) - abs(rng.gauss(0, o * 0.0004))
        bars.append([round(o, 2), round(h, 2), round(l, 2), round(c, 2), rng.randint(20_000, 400_000)])
        price = c
    # rounding can nudge open/close past high/low
    for b in bars:
        b[1] = max(b[1], b[0], b[3])
        b[2] = min(b[2], b[0], b[3])
    return bars, price


def build_kg(rng: random.Random) -> dict[str, list]:
    companies = [
        {"ticker": "AAPL", "name": "Apple Inc.", "market_cap": 2_832_000_000_000, "pe_ratio": 28.4,
         "dividends": [{"date": "2023-11-10", "amount": 0.24}, {"date": "2024-02-09", "amount": 0.24}]},
        {"ticker": "MSFT", "name": "Microsoft Corporation", "market_cap": 3_050_000_000_000, "pe_ratio": 36.9,
         "dividends": [{"date": "2023-11-15", "amount": 0.75}, {"date": "2024-02-15", "amount": 0.75}]},
        {"ticker": "NVDA", "name": "NVIDIA Corporation", "market_cap": 1_960_000_000_000, "pe_ratio": 65.2,
         "dividends": [{"date": "2023-12-05", "amount": 0.04}]},
        {"ticker": "TSLA", "name": "Tesla, Inc.", "market_cap": 630_000_000_000, "pe_ratio": 44.1, "dividends": []},
        {"ticker": "AMZN", "name": "Amazon.com, Inc.", "market_cap": 1_810_000_000_000, "pe_ratio": None, "dividends": []},
    ]
    bars = []
    for ticker, start in (("AAPL", 181.5), ("MSFT", 402.0), ("NVDA", 695.0)):
        price = start
        for day in TRADING_DAYS:
            day_bars, price = minute_bars(rng, price)
            bars.append({"ticker": ticker, "date": day, "bars": day_bars})
    artists = [
        {"name": "Taylor Swift", "kind": "person", "birth_date": "1989-12-13", "works": [
            {"title": "1989", "year": 2014, "type": "album"},
            {"title": "Midnights", "year": 2022, "type": "album"},
            {"title": "Shake It Off", "year": 2014, "type": "single"}]},
        {"name": "Adele", "kind": "person", "birth_date": "1988-05-05", "works": [
            {"title": "25", "year": 2015, "type": "album"},
            {"title": "30", "year": 2021, "type": "album"}]},
        {"name": "Coldplay", "kind": "band", "birth_date": None,
         "members": ["Chris Martin", "Jonny Buckland", "Guy Berryman", "Will Champion"],
         "works": [{"title": "Parachutes", "year": 2000, "type": "album"}]},
        {"name": "The Beatles", "kind": "band", "birth_date": None,
         "members": ["John Lennon", "Paul McCartney", "George Harrison", "Ringo Starr"],
         "works": [{"title": "Abbey Road", "year": 1969, "type": "album"}]},
    ]
    songs = [
        {"title": "Shake It Off", "artist": "Taylor Swift", "release_date": "2014-08-18",
         "writers": ["Taylor Swift", "Max Martin", "Shellback"]},
        {"title": "Hello", "artist": "Adele", "release_date": "2015-10-23", "writers": ["Adele", "Greg Kurstin"]},
        {"title": "Yellow", "artist": "Coldplay", "release_date": "2000-06-26",
         "writers": ["Chris Martin", "Jonny Buckland", "Guy Berryman", "Will Champion"]},
        {"title": "Hey Jude", "artist": "The Beatles", "release_date": "1968-08-26",
         "writers": ["John Lennon", "Paul McCartney"]},
    ]
    movies = [
        {"title": "Titanic", "release_date": "1997-12-19", "directors": ["James Cameron"],
         "cast": ["Leonardo DiCaprio", "Kate Winslet"], "genres": ["drama", "romance"],
         "budget": 200_000_000, "revenue": 2_264_700_000},
        {"title": "Avatar", "release_date": "2009-12-18", "directors": ["James Cameron"],
         "cast": ["Sam Worthington", "Zoe Saldana"], "genres": ["science fiction"],
         "budget": 237_000_000, "revenue": 2_923_700_000},
        {"title": "Oppenheimer", "release_date": "2023-07-21", "directors": ["Christopher Nolan"],
         "cast": ["Cillian Murphy", "Emily Blunt"], "genres": ["drama", "history"],
         "budget": 100_000_000, "revenue": 975_800_000},
        {"title": "Dune: Part Two", "release_date": "2024-03-01", "directors": ["Denis Villeneuve"],
         "cast": ["Timothee Chalamet", "Zendaya"], "genres": ["science fiction"],
         "budget": 190_000_000, "revenue": None},
    ]
    persons = [
        {"name": "James Cameron", "birth_date": "1954-08-16", "acted_in": [],
         "directed": ["Titanic", "Avatar"], "oscar_wins": 3},
        {"name": "Christopher Nolan", "birth_date": "1970-07-30", "acted_in": [],
         "directed": ["Oppenheimer"], "oscar_wins": 2},
        {"name": "Denis Villeneuve", "birth_date": "1967-10-03", "acted_in": [],
         "directed": ["Dune: Part Two"], "oscar_wins": 0},
        {"name": "Cillian Murphy", "birth_date": "1976-05-25", "acted_in": ["Oppenheimer"],
         "directed": [], "oscar_wins": 1},
    ]
    nba = [
        {"date": "2024-02-22", "home": "Golden State Warriors", "away": "Los Angeles Lakers", "home_pts": 128, "away_pts": 110},
        {"date": "2024-02-25", "home": "Phoenix Suns", "away": "Los Angeles Lakers", "home_pts": 123, "away_pts": 109},
        {"date": "2024-02-27", "home": "Los Angeles Lakers", "away": "Washington Wizards", "home_pts": 134, "away_pts": 131},
        {"date": "2024-02-26", "home": "Oklahoma City Thunder", "away": "Houston Rockets", "home_pts": 112, "away_pts": 95},
        {"date": "2024-02-25", "home": "Boston Celtics", "away": "New York Knicks", "home_pts": 116, "away_pts": 100},
    ]
    soccer = [
        {"date": "2024-02-17", "competition": "Premier League", "home": "Burnley", "away": "Arsenal", "home_goals": 0, "away_goals": 5},
        {"date": "2024-02-24", "competition": "Premier League", "home": "Arsenal", "away": "Newcastle United", "home_goals": 4, "away_goals": 1},
        {"date": "2024-02-24", "competition": "Premier League", "home": "Nottingham Forest", "away": "Liverpool", "home_goals": 0, "away_goals": 1},
        {"date": "2024-02-24", "competition": "Premier League", "home": "Bournemouth", "away": "Manchester City", "home_goals": 0, "away_goals": 1},
    ]
    return {
        "finance_companies": companies, "finance_minute_bars": bars, "music_artists": artists,
        "music_songs": songs, "movie_movies": movies, "movie_persons": persons,
        "sports_nba_games": nba, "sports_soccer_games": soccer,
    }


# -- mini-dataset ------------------------------------------------------------

def fact_pages(rng: random.Random, topic: str, facts: list[str], n: int, size: int) -> list[dict]:
    """``n`` pages of roughly ``size`` paragraphs; the facts land in the first two."""
    pages = []
    for i in range(n):
        paras = [paragraph(rng, rng.randint(4, 7)) for _ in range(size)]
        if i < 2:
            for j, fact in enumerate(facts):
                paras.insert(1 + j, fact + " " + paragraph(rng, 2))
        slug = re.sub(r"\W+", "_", topic).strip("_")
        pages.append(search_result(f"{topic} - page {i + 1}", f"https://example.org/{slug}/{i + 1}", paras, rng))
    return pages


def build_dataset(rng: random.Random, kg: dict) -> tuple[list[dict], dict[str, str]]:
    aapl_close = [d for d in kg["finance_minute_bars"] if d["ticker"] == "AAPL"][-1]["bars"][-1][3]
    office = search_result(
        "Microsoft Office 2019 - Wikipedia", "https://en.wikipedia.org/wiki/Microsoft_Office_2019",
        ["Microsoft Office 2019 is a version of Microsoft Office for both Windows and Mac. "
         "It was released on September 24, 2018 as the successor to Office 2016.",
         paragraph(rng, 5)], rng)

    rows = [
        ("q01", "What was AAPL's closing price yesterday?", f"{aapl_close}", "finance", "fast-changing",
         fact_pages(rng, "Apple stock", ["Apple shares trade on the Nasdaq under the symbol AAPL."], 5, 6)),
        ("q02", "What is the market cap of Microsoft?", "3050000000000", "finance", "slow-changing",
         [office] + fact_pages(rng, "Microsoft", ["Microsoft is a technology company based in Redmond."], 4, 6)),
        ("q03", "How many points did the Lakers score in their game yesterday?", "134", "sports", "fast-changing",
         fact_pages(rng, "Lakers", ["The Lakers play their home games in Los Angeles."], 5, 6)),
        ("q04", "What was the score of Arsenal's match last week?", "4-1", "sports", "fast-changing",
         fact_pages(rng, "Arsenal", ["Arsenal is a football club based in north London."], 5, 6)),
        ("q05", "Who directed the movie Titanic?", "James Cameron", "movie", "static",
         fact_pages(rng, "Titanic film", ["Titanic is a 1997 film written and directed by James Cameron."], 50, 17)),
        ("q06", "How many Oscars has Christopher Nolan won?", "2", "movie", "slow-changing",
         fact_pages(rng, "Christopher Nolan", ["Christopher Nolan won Academy Awards for Oppenheimer."], 5, 6)),
        ("q07", "When was the song Shake It Off released?", "August 18, 2014", "music", "static",
         fact_pages(rng, "Shake It Off", ["Shake It Off is a song by Taylor Swift."], 5, 6)),
        ("q08", "What is Taylor Swift's latest album?", "The Tortured Poets Department", "music", "fast-changing",
         fact_pages(rng, "Taylor Swift", ["Taylor Swift released Midnights in October 2022."], 5, 6)),
        ("q09", "What is the capital of Australia?", "Canberra", "open", "static",
         fact_pages(rng, "Australia", ["Canberra is the capital city of Australia."], 50, 17)),
        ("q10", "What is the average height of the trees in the Daintree forest?", "invalid question", "open", "static",
         fact_pages(rng, "Daintree", ["The Daintree forest lies in Queensland."], 5, 6)),
    ]
    records = [
        {"interaction_id": qid, "query": q, "query_time": QUERY_TIME, "answer": a, "domain": d,
         "static_or_dynamic": dyn, "search_results": pages}
        for qid, q, a, d, dyn, pages in rows
    ]
    return records, {"aapl_close": str(aapl_close)}


def build_stub_script(values: dict[str, str]) -> dict:
    e = re.escape

    def ner(domain: str, question: str, reply: str) -> dict:
        return {"pattern": f"question about {domain}.*Question: \"{e(question)}\"", "response": reply}

    def ans(evidence: str, question: str, reply: str) -> dict:
        return {"pattern": f"{evidence}.*Question: {e(question)}", "response": reply}

    rules = [
        ner("finance", "What was AAPL's closing price yesterday?", "AAPL (symbol)"),
        ner("finance", "What is the market cap of Microsoft?", "Microsoft (company)"),
        ner("sports", "How many points did the Lakers score in their game yesterday?", "Lakers (nba team)"),
        ner("sports", "What was the score of Arsenal's match last week?", "Arsenal (soccer team)"),
        ner("movie", "Who directed the movie Titanic?", "Titanic (movie)"),
        ner("movie", "How many Oscars has Christopher Nolan won?", "Christopher Nolan (person)"),
        ner("music", "When was the song Shake It Off released?", "Shake It Off (song)"),
        ner("music", "What is Taylor Swift's latest album?", "Taylor Swift (person)"),
        ans(r"\(api\): get_detailed_price_history\(ticker_name=AAPL\)", "What was AAPL's closing price yesterday?",
            f"The last bar of 2024-02-27 closed at {values['aapl_close']}.\nAnswer: {values['aapl_close']}"),
        ans(r"\(api\): get_market_capitalization\(ticker_name=MSFT\)", "What is the market cap of Microsoft?",
            "Answer: 3050000000000"),
        ans(e("(api): get_nba_games(team_name=Los Angeles Lakers, date=2024-02-27)"),
            "How many points did the Lakers score in their game yesterday?",
            "The Lakers beat the Wizards 134-131.\nAnswer: 134"),
        ans(e("(api): get_soccer_games(team_name=Arsenal, date=2024-02-19..2024-02-25)"),
            "What was the score of Arsenal's match last week?", "Answer: Arsenal beat Newcastle United 4-1"),
        # the reasoning line only appears when the prompt asks for step-by-step work
        ans(r"step by step.*\(api\): get_movie_info\(movie_name=Titanic\)", "Who directed the movie Titanic?",
            "The movie record lists one director.\nAnswer: James Cameron"),
        ans(r"\(api\): get_movie_info\(movie_name=Titanic\)", "Who directed the movie Titanic?",
            "Answer: James Cameron"),
        ans(r"\(web\).*directed by James Cameron", "Who directed the movie Titanic?", "Answer: James Cameron"),
        ans(r"\(api\): get_person_info\(person_name=Christopher Nolan\)", "How many Oscars has Christopher Nolan won?",
            "Answer: 2"),
        ans(r"\(api\): get_song_release_date\(song_name=Shake It Off\)", "When was the song Shake It Off released?",
            "Answer: August 18, 2014"),
        ans(r"\(api\): get_artist_all_works\(artist_name=Taylor Swift\)", "What is Taylor Swift's latest album?",
            "Answer: Midnights"),
        ans(r"\(web\).*Canberra is the capital", "What is the capital of Australia?", "Answer: Canberra"),
        {"pattern": "No references retrieved", "response": "Answer: I don't know"},
    ]
    return {"rules": rules, "default": "Answer: I don't know"}


# -- parser corpus -------------------------------------------------------------

def build_parser_corpus(rng: random.Random) -> dict[str, str]:
    pages = {}
    for i in range(50):
        kind = i % 10
        title = f"Corpus page {i:02d}"
        if kind == 0:
            doc = ""
        elif kind == 1:
            doc = f"<html><head><script>var x = {i};</script></head><body><script>render();</script></body></html>"
        elif kind == 2:
            doc = f"<html><body><div><p>{html.escape(paragraph(rng, 3))}"  # unclosed tags
        elif kind == 3:
            links = "".join(f'<a href="/{j}">{rng.choice(WORDS)} {rng.choice(WORDS)}</a> ' for j in range(30))
            doc = f"<html><body><div class=\"menu\">{links}</div><p>{html.escape(paragraph(rng, 2))}</p></body></html>"
        else:
            doc = page_html(title, [paragraph(rng, rng.randint(3, 6)) for _ in range(rng.randint(2, 8))], rng,
                            chrome=kind % 2 == 0)
        pages[f"page_{i:02d}.html"] = doc
    return pages


def main() -> None:
    rng = random.Random(SEED)
    kg = build_kg(rng)
    fx = DATA / "fixtures"
    fx.mkdir(parents=True, exist_ok=True)
    for name, rows in kg.items():
        (fx / f"{name}.json").write_text(json.dumps(rows, separators=(",", ":")) + "\n", encoding="utf-8")
    records, values = build_dataset(rng, kg)
    with (DATA / "mini_dataset.jsonl").open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")
    (DATA / "stub_script.json").write_text(json.dumps(build_stub_script(values), indent=1) + "\n", encoding="utf-8")
    corpus = DATA / "parser_corpus"
    corpus.mkdir(parents=True, exist_ok=True)
    for name, doc in build_parser_corpus(rng).items():
        (corpus / name).write_text(doc, encoding="utf-8")
    print(f"wrote fixtures, {len(records)} questions, stub script, and parser corpus under {DATA}")


if __name__ == "__main__":
    main()
