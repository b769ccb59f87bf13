import json
from typing import Optional

import pytest

import trustlogic.publish.output as pu
from trustlogic.logic.syntax import parse_formula
from trustlogic.publish.queries import (
    COUNTERMODEL,
    PROVE,
    RISK,
    TRUST_DERIVE,
    Query,
    corpus_paths,
    run_corpus,
    run_query,
)
from trustlogic.publish.workspace import parse_spec

workspace_text = """\
agent a CA b
edge CA -> a
edge b -> CA
trust 1 a CA P
trust 0 CA b P
assume h : [B a]([I a <- CA]t -> t)
"""


def html_is_valid(html: Optional[str], fragment: bool = False):
    from html5lib import HTMLParser  # type: ignore

    htmlparser = HTMLParser(strict=True)
    try:
        if fragment:
            htmlparser.parseFragment(html)
        else:
            htmlparser.parse(html)
        success = True
    except Exception as e:
        print(e)
        success = False
    return success


@pytest.fixture(scope="module")
def reports():
    ws = parse_spec(workspace_text)
    queries = [
        Query(PROVE, parse_formula("[I a <- CA]t -> [B a]t", ws.universe)),
        Query(COUNTERMODEL, parse_formula("[B a]t -> t", ws.universe)),
        Query(TRUST_DERIVE),
        Query(RISK, threshold=(1, 2), probabilities=(0.1, 0.2)),
    ]
    return [run_query(ws, q) for q in queries]


@pytest.fixture(scope="module")
def corpus():
    fitch = [p for p in corpus_paths() if p.name == "fitch_example.tl"]
    return run_corpus(fitch)


def test_render_text(reports):
    text = pu.render_text(reports, title="Checks")
    assert text.startswith("# Checks\n")
    assert "verdict: **proved**" in text
    assert "proof (checked):" in text
    assert "assumptions used: h" in text
    assert "verdict: **refuted**" in text
    assert "refuted at world" in text
    assert "- 0 a b P by higher-first from (1 a CA P) and (0 CA b P)" in text
    assert "failure probability: `0.02" in text


def test_render_corpus(corpus):
    text = pu.render_text(corpus=corpus)
    assert "3/3 expectations met" in text
    assert "fitch_example.tl" in text


def test_reports_to_json(reports, corpus):
    data = json.loads(pu.reports_to_json(reports))
    assert list(data) == ["reports"]
    assert [r["verdict"] for r in data["reports"]] == ["proved", "refuted", "derived", "derived"]
    assert data["reports"][3]["value"] == pytest.approx(0.02)
    assert data["reports"][1]["countermodel"] is not None

    data = json.loads(pu.reports_to_json(corpus=corpus))
    assert data["reports"] == []
    assert data["corpus"][0]["passed"]
    assert len(data["corpus"][0]["expectations"]) == 3


def test_publish_html(reports, tmp_path):
    path = tmp_path / "report.html"
    html = pu.publish_html(reports, path, return_html=True, title="Checks")
    assert html_is_valid(html)
    assert path.read_text() == html
    assert "<title>" in html


def test_publish_html_from_text(reports, tmp_path):
    text = pu.render_text(reports)
    html = pu.publish_html(text, filepath=None, return_html=True)
    assert html_is_valid(html)
    assert pu.publish_html(text, filepath=tmp_path / "x.html") is None


def test_publish_corpus_html(corpus, tmp_path):
    html = pu.publish_html(corpus=corpus, filepath=tmp_path / "corpus.html", return_html=True)
    assert html_is_valid(html)
    assert "expectations met" in html


def test_prettify_html():
    assert pu.prettify_html(None) == ""
    assert pu.prettify_html("<p>x</p>").split() == ["<p>", "x", "</p>"]
