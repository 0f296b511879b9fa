import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_question
from routed_rag.gateway import GatewayError, ScriptedLlm
from routed_rag.router import (
    Domain,
    Dynamism,
    KeywordBackend,
    LlmBackend,
    RoutingError,
    ScriptedBackend,
    classify_domain,
    classify_dynamism,
)

KW = KeywordBackend()


@pytest.mark.parametrize("text,domain", [
    ("What's the latest score for OKC's game today?", Domain.SPORTS),
    ("what is apple's ticker symbol?", Domain.FINANCE),
    ("Who directed Titanic?", Domain.MOVIE),
    ("Which movie did Nolan direct in 2023?", Domain.MOVIE),
    ("Name the members of the band Coldplay", Domain.MUSIC),
    ("How tall is the Eiffel Tower?", Domain.OPEN),
])
def test_keyword_domains(text, domain):
    assert classify_domain(make_question(text), KW) is domain


@pytest.mark.parametrize("text,dyn", [
    ("What's the latest score for OKC's game today?", Dynamism.REAL_TIME),
    ("who directed Titanic?", Dynamism.STATIC),
    ("what did the stock do yesterday?", Dynamism.FAST_CHANGING),
    ("who is the current ceo of apple?", Dynamism.SLOW_CHANGING),
])
def test_keyword_dynamism(text, dyn):
    assert classify_dynamism(text, KW) is dyn


def test_word_boundaries_and_case():
    assert classify_domain("STOCK split news", KW) is Domain.FINANCE
    assert classify_domain("stockholm weather", KW) is Domain.OPEN


def test_empty_question_rejected():
    with pytest.raises(ValueError):
        classify_domain("   ", KW)


def test_scripted_backend_echoes():
    backend = ScriptedBackend(Domain.MOVIE, Dynamism.STATIC)
    for text in ("anything", "latest score today"):
        assert classify_dynamism(text, backend) is Dynamism.STATIC
        assert classify_domain(text, backend) is Domain.MOVIE


def test_keyword_table_from_file(tmp_path):
    import json

    path = tmp_path / "rules.json"
    path.write_text(json.dumps({
        "domain": {"default": "open", "rules": [{"label": "music", "phrases": ["zz top"]}]},
        "dynamism": {"default": "static", "rules": []},
    }))
    backend = KeywordBackend.from_file(path)
    assert classify_domain("is zz top touring", backend) is Domain.MUSIC


def test_llm_backend_parses_and_falls_back():
    llm = ScriptedLlm([("one domain", "The domain is: sports."), ("change over time", "fast-changing")])
    backend = LlmBackend(llm)
    assert classify_domain("q", backend) is Domain.SPORTS
    assert classify_dynamism("q", backend) is Dynamism.FAST_CHANGING
    confused = LlmBackend(ScriptedLlm(default="no idea"))
    assert classify_domain("q", confused) is Domain.OPEN
    assert classify_dynamism("q", confused) is Dynamism.STATIC


def test_llm_backend_unreachable_names_backend():
    class Down:
        backend_id = "chat:down"

        def complete(self, messages):
            raise GatewayError(self.backend_id, "refused")

    with pytest.raises(RoutingError) as err:
        classify_domain("q", LlmBackend(Down()))
    assert "chat:down" in err.value.backend


def test_repeated_calls_are_stable():
    q = make_question("What's the latest score for OKC's game today?")
    assert len({(classify_domain(q, KW), classify_dynamism(q, KW)) for _ in range(100)}) == 1


@given(st.text(min_size=1).filter(str.strip))
def test_keyword_backend_is_total(text):
    assert classify_domain(text, KW) in set(Domain)
    assert classify_dynamism(text, KW) in set(Dynamism)
