import json

import pytest

from conftest import GOLDEN
from routed_rag.resources import data_path
from routed_rag.web import BACKENDS, ParserConfigError, benchmark_parsers, parse_html

CHROME_PAGE = """<html><head><title>Story</title><style>p{}</style></head><body>
<nav class="navbar"><a href="/">Home</a> <a href="/x">Sections</a></nav>
<div class="sidebar"><p>Popular links you might like to read today</p></div>
<article><h1>Main headline</h1>
<p>The council approved the new bridge across the river after a long debate.</p>
<p>Construction starts in spring and should finish within two years.</p></article>
<footer>Copyright</footer></body></html>"""


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_hello_world(backend):
    page = parse_html("<html><body><p>Hello world</p></body></html>", backend)
    assert page.text == "Hello world" and page.success and page.duration >= 0


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_truncated_fragment(backend):
    page = parse_html("<div><p>abc", backend)
    assert (page.text, page.success) == ("abc", True)


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_bytes_and_garbage_never_raise(backend):
    for doc in (b"<p>caf\xc3\xa9</p>", b"\xff\xfe<<>>", "<<<", "</p></div>", "<p>" * 500):
        page = parse_html(doc, backend)
        assert page.success == bool(page.text)


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_empty_and_script_only_fail(backend):
    for doc in ("", "<html><script>x()</script></html>"):
        page = parse_html(doc, backend)
        assert (page.success, page.text) == (False, "")


def test_density_drops_chrome_dom_keeps_it():
    dense = parse_html(CHROME_PAGE, "density").text
    assert "bridge across the river" in dense
    assert "Sections" not in dense and "Popular links" not in dense and "Copyright" not in dense
    dom = parse_html(CHROME_PAGE, "dom").text
    assert "Sections" in dom and "bridge across the river" in dom
    assert "p{}" not in dom


def test_wikipedia_style_page(mini_dataset):
    pages = [p for _, ps in mini_dataset for p in ps if p.page_name == "Microsoft Office 2019 - Wikipedia"]
    assert pages
    for backend in BACKENDS:
        text = parse_html(pages[0].html, backend).text
        assert "successor to Office 2016" in text


def test_unknown_backend_is_config_error():
    with pytest.raises(ParserConfigError):
        parse_html("<p>x</p>", "newspaper")


def test_benchmark_one_document():
    report = benchmark_parsers(["<p>one</p>"])
    assert len(report.rows) == 2
    assert all(r.success_rate in (0.0, 1.0) for r in report.rows)


def test_benchmark_throwing_backend():
    def boom(html):
        raise RuntimeError("nope")

    report = benchmark_parsers(["<p>a</p>", "<p>b</p>"], ["boom"], registry={"boom": boom})
    assert report["boom"].success_rate == 0.0


def test_benchmark_empty_corpus():
    with pytest.raises(ValueError):
        benchmark_parsers([])


def test_bundled_corpus_golden():
    corpus = [f.read_text(encoding="utf-8") for f in sorted(data_path("parser_corpus").glob("*.html"))]
    assert len(corpus) == 50
    report = benchmark_parsers(corpus)
    expected = json.loads((GOLDEN / "parser_success.json").read_text())
    assert {r.backend: r.success_rate for r in report.rows} == expected
    assert report.to_dict()["rows"][0]["score"] is None
